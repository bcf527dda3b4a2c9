"""
HLLC approximate Riemann solver for the Euler equations with a Tammann EOS
on each side of the edge.

Each side's flux and sound speed are computed with that side's own
parameters; nothing is averaged across the edge.  Speed bounds come from an
injectable estimator (Davis bounds by default).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from ..eos import (
    ConservedState,
    EosParams,
    PrimitiveState,
    conserved_from_primitive,
    sound_speed,
)


class SolverDegenerateError(ArithmeticError):
    """Wave-speed estimates give a zero denominator for the contact speed."""


@dataclass(frozen=True)
class RiemannFan:
    s_left: float
    s_star: float
    s_right: float
    q_left: ConservedState
    q_star_left: ConservedState
    q_star_right: ConservedState
    q_right: ConservedState
    p_star: float

    @property
    def speeds(self) -> NDArray[np.float64]:
        return np.array([self.s_left, self.s_star, self.s_right])

    def waves(self) -> NDArray[np.float64]:
        """Jumps W1 = Q*L - QL, W2 = Q*R - Q*L, W3 = QR - Q*R, shape (3 waves, 3 comps, ...)."""
        states = [self.q_left, self.q_star_left, self.q_star_right, self.q_right]
        arr = [np.array([q.rho, q.mom, q.ener], dtype=float) for q in states]
        return np.stack([arr[1] - arr[0], arr[2] - arr[1], arr[3] - arr[2]])

    def fluctuations(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Left- and right-going fluctuations (A^- dQ, A^+ dQ)."""
        w = self.waves()
        s = self.speeds
        s = s.reshape(s.shape[:1] + (1,) + s.shape[1:])
        return (np.minimum(s, 0.0) * w).sum(axis=0), (np.maximum(s, 0.0) * w).sum(axis=0)


SpeedEstimate = Callable[[PrimitiveState, EosParams, PrimitiveState, EosParams], tuple]


def davis_speeds(wL: PrimitiveState, eosL: EosParams, wR: PrimitiveState, eosR: EosParams):
    cL = sound_speed(wL, eosL)
    cR = sound_speed(wR, eosR)
    s_left = np.minimum(wL.u - cL, wR.u - cR)
    s_right = np.maximum(wL.u + cL, wR.u + cR)
    return s_left, s_right


def pressure_based_speeds(wL: PrimitiveState, eosL: EosParams, wR: PrimitiveState, eosR: EosParams):
    """Pressure-based bounds: acoustic p* guess, then shock-strength factors per side.

    Not used by default.  Kept as an alternative estimator for diagnostics.
    """
    cL = sound_speed(wL, eosL)
    cR = sound_speed(wR, eosR)
    zL = wL.rho * cL
    zR = wR.rho * cR
    p_guess = (zR * wL.p + zL * wR.p - zL * zR * (wR.u - wL.u)) / (zL + zR)

    def factor(w, eos):
        pbar_star = np.maximum(p_guess + eos.p_inf, 0.0)
        ratio = pbar_star / (w.p + eos.p_inf)
        shocked = np.sqrt(1.0 + (eos.gamma + 1.0) / (2.0 * eos.gamma) * (ratio - 1.0))
        return np.where(p_guess > w.p, shocked, 1.0)

    return wL.u - cL * factor(wL, eosL), wR.u + cR * factor(wR, eosR)


def hllc_star_arrays(rL, uL, pL, EL, sL, rR, uR, pR, ER, sR):
    """Contact speed, star pressure and star conserved states from bounds sL, sR.

    The star-state denominator is side-indexed: S_k - S_* for side k.
    """
    dL = sL - uL
    dR = sR - uR
    den = rL * dL - rR * dR
    if np.any(den == 0.0) or not np.all(np.isfinite(den)):
        raise SolverDegenerateError("HLLC contact-speed denominator is zero")
    # increment form of the contact-speed formula: equal states give s_star = uL
    # and p_star = pL exactly, so zero-jump data yields zero-strength waves
    s_star = uL + (pR - pL - rR * dR * (uR - uL)) / den
    p_star = pL + rL * dL * (s_star - uL)

    def star(r, u, p, E, s):
        ratio = (s - u) / (s - s_star)
        rho = r * ratio
        return rho, rho * s_star, E * ratio + (p_star * s_star - p * u) / (s - s_star)

    return s_star, p_star, star(rL, uL, pL, EL, sL), star(rR, uR, pR, ER, sR)


def hllc_solve(
    wL: PrimitiveState,
    eosL: EosParams,
    wR: PrimitiveState,
    eosR: EosParams,
    speeds: SpeedEstimate = davis_speeds,
) -> RiemannFan:
    qL = conserved_from_primitive(wL, eosL)
    qR = conserved_from_primitive(wR, eosR)
    sL, sR = speeds(wL, eosL, wR, eosR)
    if np.any(sL >= sR):
        raise SolverDegenerateError(f"speed bounds not separated: S_L={sL}, S_R={sR}")
    s_star, p_star, starL, starR = hllc_star_arrays(
        wL.rho, wL.u, wL.p, qL.ener, sL, wR.rho, wR.u, wR.p, qR.ener, sR
    )
    return RiemannFan(
        s_left=sL,
        s_star=s_star,
        s_right=sR,
        q_left=qL,
        q_star_left=ConservedState(*starL),
        q_star_right=ConservedState(*starR),
        q_right=qR,
        p_star=p_star,
    )


def lagrangian_transform(fan: RiemannFan) -> RiemannFan:
    """Move into the frame of the contact: speeds shift by -s_star, states untouched."""
    shift = fan.s_star
    return replace(
        fan,
        s_left=fan.s_left - shift,
        s_star=np.zeros_like(shift) if np.ndim(shift) else 0.0,
        s_right=fan.s_right - shift,
    )
