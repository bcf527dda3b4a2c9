"""
Exact Riemann solver for the Euler equations with a Tammann EOS whose
parameters may jump across the edge.

With pbar = p + p_inf each side behaves like an ideal gas in pbar, so the
classical shock and rarefaction relations carry over side by side.  The
star pressure solves

    f_L(p) + f_R(p) + (u_R - u_L) = 0

by safeguarded Newton iteration: the bracket is updated every step and a
bisection step replaces any Newton step that leaves it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..eos import EosParams, PrimitiveState, check_density, check_pressure

MAX_ITER = 100
# relative step size (in pbar) at which the iteration is considered converged
STEP_TOL = 1e-14


class VacuumError(ArithmeticError):
    """The data generate a vacuum: no star pressure with p + min(p_inf) > 0."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, last_iterate):
        self.last_iterate = last_iterate
        super().__init__(f"{message}; last iterate p={last_iterate!r}")


class WaveKind(str, Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


@dataclass(frozen=True)
class StarRegion:
    p_star: float
    u_star: float
    rho_star_left: float
    rho_star_right: float
    wave_kind_left: WaveKind
    wave_kind_right: WaveKind


def _side(p, rho, pk, c, gamma, p_inf):
    """Vectorized f_K(p) and df_K/dp.  pbar must be positive."""
    pbar = p + p_inf
    pkbar = pk + p_inf
    a = 2.0 / ((gamma + 1.0) * rho)
    b = (gamma - 1.0) / (gamma + 1.0) * pkbar
    shock = p > pk
    # evaluate both branches on safe arguments, then select
    root = np.sqrt(a / (np.where(shock, pbar, pkbar) + b))
    f_shock = (p - pk) * root
    df_shock = root * (1.0 - 0.5 * (p - pk) / (np.where(shock, pbar, pkbar) + b))
    ratio = np.where(shock, 1.0, pbar / pkbar)
    z = (gamma - 1.0) / (2.0 * gamma)
    # ratio**z - 1 without cancellation; ratio is close to 1 in stiff media
    rel = np.where(shock, 0.0, (p - pk) / pkbar)
    with np.errstate(divide="ignore"):
        f_rare = 2.0 * c / (gamma - 1.0) * np.expm1(z * np.log1p(rel))
    with np.errstate(divide="ignore"):
        df_rare = np.where(ratio > 0.0, ratio ** (-(gamma + 1.0) / (2.0 * gamma)), np.inf) / (rho * c)
    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def side_function(p, w: PrimitiveState, eos: EosParams):
    """Velocity change across the wave connecting w to pressure p, and its derivative."""
    if np.any(~(np.asarray(p) + eos.p_inf > 0.0)):
        raise ValueError(f"p + p_inf must be positive, got p={p!r}, p_inf={eos.p_inf}")
    c = np.sqrt(eos.gamma * (w.p + eos.p_inf) / w.rho)
    return _side(p, w.rho, w.p, c, eos.gamma, eos.p_inf)


def _star_density(p, rho, pk, gamma, p_inf):
    ratio = (p + p_inf) / (pk + p_inf)
    g = (gamma - 1.0) / (gamma + 1.0)
    shock = (ratio + g) / (g * ratio + 1.0)
    with np.errstate(invalid="ignore"):
        rare = ratio ** (1.0 / gamma)
    return rho * np.where(p > pk, shock, rare)


def solve_star_arrays(rL, uL, pL, gL, piL, rR, uR, pR, gR, piR, max_iter: int = MAX_ITER):
    """Vectorized star solve on raw arrays. Returns (p_star, u_star, rho*L, rho*R, fL, fR)."""
    rL, uL, pL, gL, piL, rR, uR, pR, gR, piR = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (rL, uL, pL, gL, piL, rR, uR, pR, gR, piR))
    )
    cL = np.sqrt(gL * (pL + piL) / rL)
    cR = np.sqrt(gR * (pR + piR) / rR)
    du = uR - uL
    scale = np.maximum(pL + piL, pR + piR)

    lo = -np.minimum(piL, piR)
    fL_lo, _ = _side(lo, rL, pL, cL, gL, piL)
    fR_lo, _ = _side(lo, rR, pR, cR, gR, piR)
    g_lo = fL_lo + fR_lo + du
    if np.any(g_lo >= 0.0):
        idx = int(np.flatnonzero(np.atleast_1d(g_lo >= 0.0))[0])
        raise VacuumError(f"vacuum generated by the data (edge {idx})")

    # initial guess: two-rarefaction for matching EOS, acoustic otherwise
    zL = rL * cL
    zR = rR * cR
    p_ac = (zR * pL + zL * pR - zL * zR * du) / (zL + zR)
    same = (gL == gR) & (piL == piR)
    z = (gL - 1.0) / (2.0 * gL)
    with np.errstate(invalid="ignore", divide="ignore"):
        num = np.maximum(cL + cR - 0.5 * (gL - 1.0) * du, 0.0)
        p_tr = (num / (cL / (pL + piL) ** z + cR / (pR + piR) ** z)) ** (1.0 / z) - piL
    p = np.where(same & np.isfinite(p_tr), p_tr, p_ac)
    # equal pressure and velocity: pL is the root, start on it exactly
    p = np.where((pL == pR) & (du == 0.0), pL, p)
    tiny = 1e-8 * scale
    p = np.maximum(p, lo + tiny)

    hi = np.full_like(p, np.inf)
    lo = lo.copy()
    done = np.zeros(p.shape, dtype=bool)
    for _ in range(max_iter):
        fL, dfL = _side(p, rL, pL, cL, gL, piL)
        fR, dfR = _side(p, rR, pR, cR, gR, piR)
        g = fL + fR + du
        lo = np.where(g < 0.0, p, lo)
        hi = np.where(g > 0.0, p, hi)
        exact_root = g == 0.0
        step = g / (dfL + dfR)
        p_new = p - step
        outside = ~((p_new > lo) & (p_new < hi))
        bisect = np.where(np.isfinite(hi), 0.5 * (lo + hi), p + 2.0 * (p - lo) + scale)
        p_new = np.where(outside, bisect, p_new)
        p_new = np.where(exact_root | done, p, p_new)
        converged = np.abs(p_new - p) <= STEP_TOL * (np.abs(p_new) + np.maximum(piL, piR) + scale * 1e-3)
        done = done | converged | exact_root
        p = p_new
        if np.all(done):
            break
    else:
        raise ConvergenceError("exact Riemann solver did not converge", p)

    # one more Newton step: the stopping test is relative to p + p_inf, so a
    # stiff side can leave a correction that is large compared with p itself
    fL, dfL = _side(p, rL, pL, cL, gL, piL)
    fR, dfR = _side(p, rR, pR, cR, gR, piR)
    p_new = np.clip(p - (fL + fR + du) / (dfL + dfR), lo, hi)
    polish = np.isfinite(p_new) & (p_new != p)
    if np.any(polish):
        p = np.where(polish, p_new, p)
        fL, dfL = _side(p, rL, pL, cL, gL, piL)
        fR, dfR = _side(p, rR, pR, cR, gR, piR)
    # Each side gives its own contact speed, uL - fL and uR + fR.  Weighting
    # them by the opposite derivative cancels the first-order effect of any
    # error left in p, which matters when one side is far stiffer.
    u = (dfR * (uL - fL) + dfL * (uR + fR)) / (dfL + dfR)
    rho_l = _star_density(p, rL, pL, gL, piL)
    rho_r = _star_density(p, rR, pR, gR, piR)
    return p, u, rho_l, rho_r, fL, fR


def solve_star(wL: PrimitiveState, eosL: EosParams, wR: PrimitiveState, eosR: EosParams) -> StarRegion:
    for w, eos in ((wL, eosL), (wR, eosR)):
        check_density(w.rho)
        check_pressure(w.p, eos.p_inf)
    p, u, rl, rr, _, _ = solve_star_arrays(
        wL.rho, wL.u, wL.p, eosL.gamma, eosL.p_inf, wR.rho, wR.u, wR.p, eosR.gamma, eosR.p_inf
    )
    kinds = []
    for pk in (wL.p, wR.p):
        shock = p > pk
        if np.ndim(shock):
            kinds.append(np.where(shock, WaveKind.SHOCK, WaveKind.RAREFACTION))
        else:
            kinds.append(WaveKind.SHOCK if shock else WaveKind.RAREFACTION)
    scalar = np.ndim(p) == 0
    cast = float if scalar else (lambda v: v)
    return StarRegion(cast(p), cast(u), cast(rl), cast(rr), kinds[0], kinds[1])


def pressure_residual(star: StarRegion, wL, eosL, wR, eosR):
    fL, _ = side_function(star.p_star, wL, eosL)
    fR, _ = side_function(star.p_star, wR, eosR)
    return fL + fR + (wR.u - wL.u)


def wave_speeds_arrays(p, u, rL, uL, pL, gL, piL, rR, uR, pR, gR, piR):
    """Head and tail speeds of the left and right waves (equal for shocks).

    Returns (left_head, left_tail, right_tail, right_head).
    """
    cL = np.sqrt(gL * (pL + piL) / rL)
    cR = np.sqrt(gR * (pR + piR) / rR)
    ratioL = (p + piL) / (pL + piL)
    ratioR = (p + piR) / (pR + piR)
    shockL = p > pL
    shockR = p > pR
    with np.errstate(invalid="ignore"):
        sL_shock = uL - cL * np.sqrt((gL + 1.0) / (2.0 * gL) * ratioL + (gL - 1.0) / (2.0 * gL))
        sR_shock = uR + cR * np.sqrt((gR + 1.0) / (2.0 * gR) * ratioR + (gR - 1.0) / (2.0 * gR))
        cL_star = cL * ratioL ** ((gL - 1.0) / (2.0 * gL))
        cR_star = cR * ratioR ** ((gR - 1.0) / (2.0 * gR))
    left_head = np.where(shockL, sL_shock, uL - cL)
    left_tail = np.where(shockL, sL_shock, u - cL_star)
    right_tail = np.where(shockR, sR_shock, u + cR_star)
    right_head = np.where(shockR, sR_shock, uR + cR)
    return left_head, left_tail, right_tail, right_head


def sample_arrays(xi, p, u, rhoL_star, rhoR_star, rL, uL, pL, gL, piL, rR, uR, pR, gR, piR):
    """Self-similar solution at x/t = xi. Returns (rho, u, p, on_left)."""
    lh, lt, rt, rh = wave_speeds_arrays(p, u, rL, uL, pL, gL, piL, rR, uR, pR, gR, piR)
    cL = np.sqrt(gL * (pL + piL) / rL)
    cR = np.sqrt(gR * (pR + piR) / rR)

    # left rarefaction interior
    c_fan = 2.0 / (gL + 1.0) * (cL + 0.5 * (gL - 1.0) * (uL - xi))
    u_fan = 2.0 / (gL + 1.0) * (cL + 0.5 * (gL - 1.0) * uL + xi)
    with np.errstate(invalid="ignore"):
        rho_fanL = rL * (c_fan / cL) ** (2.0 / (gL - 1.0))
        p_fanL = (pL + piL) * (c_fan / cL) ** (2.0 * gL / (gL - 1.0)) - piL
    in_fanL = (xi > lh) & (xi < lt)
    rho_l = np.where(xi <= lh, rL, np.where(in_fanL, rho_fanL, rhoL_star))
    u_l = np.where(xi <= lh, uL, np.where(in_fanL, u_fan, u))
    p_l = np.where(xi <= lh, pL, np.where(in_fanL, p_fanL, p))

    c_fan = 2.0 / (gR + 1.0) * (cR - 0.5 * (gR - 1.0) * (uR - xi))
    u_fan = 2.0 / (gR + 1.0) * (-cR + 0.5 * (gR - 1.0) * uR + xi)
    with np.errstate(invalid="ignore"):
        rho_fanR = rR * (c_fan / cR) ** (2.0 / (gR - 1.0))
        p_fanR = (pR + piR) * (c_fan / cR) ** (2.0 * gR / (gR - 1.0)) - piR
    in_fanR = (xi > rt) & (xi < rh)
    rho_r = np.where(xi >= rh, rR, np.where(in_fanR, rho_fanR, rhoR_star))
    u_r = np.where(xi >= rh, uR, np.where(in_fanR, u_fan, u))
    p_r = np.where(xi >= rh, pR, np.where(in_fanR, p_fanR, p))

    left = xi < u
    return (
        np.where(left, rho_l, rho_r),
        np.where(left, u_l, u_r),
        np.where(left, p_l, p_r),
        left,
    )


def sample(star: StarRegion, wL: PrimitiveState, eosL: EosParams, wR: PrimitiveState, eosR: EosParams, xi) -> PrimitiveState:
    """Exact solution at x/t = xi; at xi == u_star the right-hand state is returned."""
    rho, u, p, _ = sample_arrays(
        xi, star.p_star, star.u_star, star.rho_star_left, star.rho_star_right,
        wL.rho, wL.u, wL.p, eosL.gamma, eosL.p_inf, wR.rho, wR.u, wR.p, eosR.gamma, eosR.p_inf,
    )
    if np.ndim(rho) == 0:
        return PrimitiveState(float(rho), float(u), float(p))
    return PrimitiveState(rho, u, p)
