"""
Tammann (stiffened gas) equation of state and state conversions.

The pressure law is p = (gamma - 1) * rho * e - gamma * p_inf.  Setting
p_inf = 0 gives the ideal gas.  All functions accept scalars or numpy
arrays for the state fields; array inputs are validated elementwise and
the first offending index is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import NDArray

Scalar = Union[float, NDArray[np.float64]]


class InvalidStateError(ValueError):
    """A state violates rho > 0 or p + p_inf > 0 for its EOS."""

    def __init__(self, message: str, index: int | None = None, values: dict | None = None):
        self.index = index
        self.values = values or {}
        detail = ""
        if index is not None:
            detail += f" at index {index}"
        if self.values:
            detail += " (" + ", ".join(f"{k}={v!r}" for k, v in self.values.items()) + ")"
        super().__init__(message + detail)


@dataclass(frozen=True)
class EosParams:
    gamma: float
    p_inf: float = 0.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not self.p_inf >= 0.0:
            raise ValueError(f"p_inf must be >= 0, got {self.p_inf}")


@dataclass(frozen=True)
class ConservedState:
    rho: Scalar
    mom: Scalar
    ener: Scalar


@dataclass(frozen=True)
class PrimitiveState:
    rho: Scalar
    u: Scalar
    p: Scalar


# Table values; reference densities are configurable defaults.
AIR = EosParams(1.4, 0.0)
PLASTIC = EosParams(1.1, 4.79e9)
WATER = EosParams(7.15, 3.0e8)

P_ATM = 101325.0
RHO_AIR = 1.204
RHO_PLASTIC = 1050.0
RHO_WATER = 1000.0


def _first_bad(mask) -> int | None:
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return int(np.flatnonzero(mask)[0])


def _pick(x, idx):
    return float(np.asarray(x)[idx]) if idx is not None else float(x)


def check_density(rho: Scalar) -> None:
    bad = ~(np.asarray(rho) > 0.0)
    if np.any(bad):
        idx = _first_bad(bad)
        raise InvalidStateError("non-positive density", idx, {"rho": _pick(rho, idx)})


def check_pressure(p: Scalar, p_inf: Scalar) -> None:
    bad = ~(np.asarray(p) + np.asarray(p_inf) > 0.0)
    if np.any(bad):
        idx = _first_bad(bad)
        p_inf_val = _pick(np.broadcast_to(p_inf, np.shape(p)), idx) if idx is not None else float(p_inf)
        raise InvalidStateError(
            "p + p_inf <= 0", idx, {"p": _pick(p, idx), "p_inf": p_inf_val}
        )


def pressure_from_conserved(q: ConservedState, eos: EosParams) -> Scalar:
    check_density(q.rho)
    rho_e = q.ener - 0.5 * q.mom * q.mom / q.rho
    p = (eos.gamma - 1.0) * rho_e - eos.gamma * eos.p_inf
    check_pressure(p, eos.p_inf)
    return p


def conserved_from_primitive(w: PrimitiveState, eos: EosParams) -> ConservedState:
    check_density(w.rho)
    check_pressure(w.p, eos.p_inf)
    ener = (w.p + eos.gamma * eos.p_inf) / (eos.gamma - 1.0) + 0.5 * w.rho * w.u * w.u
    return ConservedState(w.rho, w.rho * w.u, ener)


def primitive_from_conserved(q: ConservedState, eos: EosParams) -> PrimitiveState:
    p = pressure_from_conserved(q, eos)
    return PrimitiveState(q.rho, q.mom / q.rho, p)


def sound_speed(w: PrimitiveState, eos: EosParams) -> Scalar:
    check_density(w.rho)
    check_pressure(w.p, eos.p_inf)
    return np.sqrt(eos.gamma * (w.p + eos.p_inf) / w.rho)


def flux(w: PrimitiveState, eos: EosParams) -> NDArray[np.float64]:
    """Physical flux [rho u, rho u^2 + p, u (E + p)] stacked on axis 0."""
    q = conserved_from_primitive(w, eos)
    return np.array([q.mom, q.mom * w.u + w.p, w.u * (q.ener + w.p)])


def as_array(q: ConservedState) -> NDArray[np.float64]:
    return np.array([q.rho, q.mom, q.ener], dtype=float)


def from_array(a) -> ConservedState:
    a = np.asarray(a, dtype=float)
    return ConservedState(a[0], a[1], a[2])


def impedance(w: PrimitiveState, eos: EosParams) -> Scalar:
    """Acoustic impedance rho * c."""
    return w.rho * sound_speed(w, eos)
