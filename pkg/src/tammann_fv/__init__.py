"""1D compressible multi-material flow with the Tammann equation of state."""

from .eos import (
    AIR,
    PLASTIC,
    WATER,
    ConservedState,
    EosParams,
    InvalidStateError,
    PrimitiveState,
    conserved_from_primitive,
    pressure_from_conserved,
    sound_speed,
)

__version__ = "0.1.0"
