"""
Linear acoustics of a plane pressure wave crossing a finite layer.

A wave of amplitude p0 travelling from medium a through a layer p of width
w0 into medium w is split at each face.  The part reaching medium w after
N - 1 round trips inside the layer has amplitude

    T_ap * R_pa^(N-1) * R_pw^(N-1) * T_pw * p0

and the round trips are spaced by 2 * w0 / c_p.  Summing every arrival
gives the single-interface transmission from a straight into w, whatever
the layer impedance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import (
    AIR,
    P_ATM,
    PLASTIC,
    RHO_AIR,
    RHO_PLASTIC,
    RHO_WATER,
    WATER,
    EosParams,
    PrimitiveState,
    impedance,
    sound_speed,
)


@dataclass(frozen=True)
class Impedance:
    """Acoustic impedance rho * c in Pa s / m."""

    z: float

    def __post_init__(self):
        if not self.z > 0.0:
            raise ValueError(f"impedance must be > 0, got {self.z}")

    @classmethod
    def of(cls, rho: float, eos: EosParams, p: float = P_ATM) -> "Impedance":
        return cls(float(impedance(PrimitiveState(rho, 0.0, p), eos)))


def _z(z) -> float:
    value = z.z if isinstance(z, Impedance) else float(z)
    if not value > 0.0:
        raise ValueError(f"impedance must be > 0, got {value}")
    return value


def transmit_reflect(p0: float, zA, zB) -> tuple[float, float]:
    """Transmitted and reflected amplitudes for a wave going from A into B."""
    a, b = _z(zA), _z(zB)
    p_t = p0 * 2.0 * b / (a + b)
    p_r = p0 * (b - a) / (a + b)
    return p_t, p_r


def round_trip_ratio(za, zp, zw) -> float:
    """Amplitude factor picked up by one round trip inside the layer."""
    a, p, w = _z(za), _z(zp), _z(zw)
    return (a - p) / (a + p) * (w - p) / (w + p)


def nth_transmission(p0: float, za, zp, zw, n: int) -> float:
    """Amplitude of the n-th wave transmitted into medium w (n = 1 is the first arrival)."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    a, p, w = _z(za), _z(zp), _z(zw)
    enter = 2.0 * p / (p + a)
    leave = 2.0 * w / (w + p)
    back_a = ((a - p) / (a + p)) ** (n - 1)
    back_w = ((w - p) / (w + p)) ** (n - 1)
    return leave * back_a * back_w * enter * p0


def transmission_series(p0: float, za, zp, zw, n_terms: int) -> np.ndarray:
    """First ``n_terms`` transmitted amplitudes as an array."""
    return np.array([nth_transmission(p0, za, zp, zw, n) for n in range(1, n_terms + 1)])


def asymptotic_transmission(p0: float, za, zw) -> float:
    """Sum of all transmitted arrivals; equal to direct transmission from a into w."""
    a, w = _z(za), _z(zw)
    return p0 * 2.0 * w / (w + a)


def bounce_interval(w0: float, cp: float) -> float:
    """Time between successive transmitted arrivals, 2 * w0 / cp."""
    if w0 < 0.0:
        raise ValueError("layer width must be >= 0")
    if not cp > 0.0:
        raise ValueError("sound speed must be > 0")
    return 2.0 * w0 / cp


REFERENCE_MEDIA = {
    "air": (RHO_AIR, AIR),
    "plastic": (RHO_PLASTIC, PLASTIC),
    "water": (RHO_WATER, WATER),
}


def default_impedances(p: float = P_ATM) -> dict[str, Impedance]:
    """Impedances of air, plastic and water at the default reference densities."""
    return {name: Impedance.of(rho, eos, p) for name, (rho, eos) in REFERENCE_MEDIA.items()}


def reference_sound_speed(name: str, p: float = P_ATM) -> float:
    rho, eos = REFERENCE_MEDIA[name]
    return float(sound_speed(PrimitiveState(rho, 0.0, p), eos))
