"""
Wave-propagation finite volume integrator for the 1D Euler equations with a
per-cell Tammann EOS.

Cells are updated with

    Q_i <- Q_i - dt/dx (A+dQ_{i-1/2} + A-dQ_{i+1/2}) - dt/dx (Ft_{i+1/2} - Ft_{i-1/2})

where the fluctuations come from the Riemann solver dispatched at each edge
and Ft are limited second-order wave corrections.  Edge dispatch:

* uniform ideal gas                      -> HLLC, Eulerian speeds
* EOS parameter jump                     -> exact solver, contact frame
* uniform stiff material (p_inf > 0)     -> exact solver, Eulerian
  (contact frame too when ``lagrangian_in_stiff`` is set)

In the contact frame the contact wave gets speed zero, so material
boundaries stay on their cell edge.  The price is a conservation defect of
dt * u_star * (Q_R - Q_L) per transformed edge, accumulated in
:class:`StepDiagnostics`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from .eos import ConservedState, EosParams, InvalidStateError, PrimitiveState
from .riemann.exact import sample_arrays, solve_star_arrays, wave_speeds_arrays
from .riemann.hllc import davis_speeds, hllc_star_arrays

log = logging.getLogger(__name__)


class BoundaryKind(str, Enum):
    OUTFLOW = "outflow"
    WALL = "wall"


@dataclass(frozen=True)
class Grid1D:
    n_cells: int
    x_lower: float
    x_upper: float
    n_ghost: int = 2

    def __post_init__(self):
        if self.n_cells < 1 or not self.x_upper > self.x_lower:
            raise ValueError(f"invalid grid: {self}")
        if self.n_ghost < 2:
            raise ValueError("n_ghost must be >= 2")

    @property
    def dx(self) -> float:
        return (self.x_upper - self.x_lower) / self.n_cells

    @property
    def edges(self) -> NDArray[np.float64]:
        return self.x_lower + self.dx * np.arange(self.n_cells + 1)

    @property
    def centers(self) -> NDArray[np.float64]:
        return self.x_lower + self.dx * (np.arange(self.n_cells) + 0.5)

    def cell_index(self, x: float) -> int:
        """Cell containing x; a point on an edge belongs to the cell on its right."""
        i = int(np.floor((x - self.x_lower) / self.dx))
        if not 0 <= i < self.n_cells:
            raise ValueError(f"x={x} outside [{self.x_lower}, {self.x_upper})")
        return i


@dataclass(frozen=True)
class MaterialGrid:
    """Per-cell material index into ``materials``."""

    materials: tuple[EosParams, ...]
    names: tuple[str, ...]
    index: NDArray[np.int64]

    @property
    def gamma(self) -> NDArray[np.float64]:
        return np.array([m.gamma for m in self.materials])[self.index]

    @property
    def p_inf(self) -> NDArray[np.float64]:
        return np.array([m.p_inf for m in self.materials])[self.index]

    def interface_edges(self) -> NDArray[np.int64]:
        """Interior edge numbers (edge k lies between cells k-1 and k) where the material changes."""
        return np.flatnonzero(np.diff(self.index) != 0) + 1

    @classmethod
    def uniform(cls, n_cells: int, eos: EosParams, name: str = "material") -> "MaterialGrid":
        return cls((eos,), (name,), np.zeros(n_cells, dtype=np.int64))


@dataclass(frozen=True)
class SimulationState:
    time: float
    q: NDArray[np.float64]  # shape (3, n_cells): rho, mom, ener
    grid: Grid1D
    materials: MaterialGrid

    @property
    def cells(self) -> ConservedState:
        return ConservedState(self.q[0], self.q[1], self.q[2])

    def primitive(self) -> PrimitiveState:
        rho, mom, ener = self.q
        gamma = self.materials.gamma
        p_inf = self.materials.p_inf
        u = mom / rho
        p = (gamma - 1.0) * (ener - 0.5 * mom * u) - gamma * p_inf
        return PrimitiveState(rho, u, p)

    def totals(self) -> NDArray[np.float64]:
        return self.q.sum(axis=1) * self.grid.dx


def state_from_primitive(w: PrimitiveState, grid: Grid1D, materials: MaterialGrid, time: float = 0.0) -> SimulationState:
    gamma = materials.gamma
    p_inf = materials.p_inf
    rho = np.broadcast_to(np.asarray(w.rho, dtype=float), (grid.n_cells,))
    u = np.broadcast_to(np.asarray(w.u, dtype=float), (grid.n_cells,))
    p = np.broadcast_to(np.asarray(w.p, dtype=float), (grid.n_cells,))
    q = np.array([rho, rho * u, (p + gamma * p_inf) / (gamma - 1.0) + 0.5 * rho * u * u])
    state = SimulationState(time, q, grid, materials)
    validate(state)
    return state


@dataclass(frozen=True)
class SolverOptions:
    order: int = 2
    limiter: str = "mc"
    bc_lower: BoundaryKind = BoundaryKind.OUTFLOW
    bc_upper: BoundaryKind = BoundaryKind.OUTFLOW
    interface_solver: str = "exact"
    stiff_solver: str = "exact"
    lagrangian_in_stiff: bool = False
    speed_estimate: Callable = davis_speeds


@dataclass
class StepDiagnostics:
    steps: int = 0
    max_courant: float = 0.0
    # cumulative sum over steps of dt * (A+dQ + A-dQ - (F_R - F_L)) at contact-frame edges
    interface_defect: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))


def _phi(theta, limiter: str):
    if limiter == "mc":
        return np.maximum(0.0, np.minimum(np.minimum(2.0 * theta, 0.5 * (1.0 + theta)), 2.0))
    if limiter == "minmod":
        return np.maximum(0.0, np.minimum(1.0, theta))
    if limiter == "superbee":
        return np.maximum(0.0, np.maximum(np.minimum(1.0, 2.0 * theta), np.minimum(2.0, theta)))
    if limiter == "vanleer":
        return (theta + np.abs(theta)) / (1.0 + np.abs(theta))
    if limiter == "none":
        return np.ones_like(theta)
    raise ValueError(f"unknown limiter {limiter!r}")


def apply_boundaries(
    q: NDArray[np.float64],
    n_ghost: int,
    lower: BoundaryKind = BoundaryKind.OUTFLOW,
    upper: BoundaryKind = BoundaryKind.OUTFLOW,
) -> NDArray[np.float64]:
    """Return q padded with ``n_ghost`` ghost cells per side.

    Outflow copies the nearest interior cell; a wall mirrors the interior
    cells and negates their momentum.
    """
    g = n_ghost
    out = np.empty((q.shape[0], q.shape[1] + 2 * g))
    out[:, g:-g] = q
    for side, kind in (("lower", BoundaryKind(lower)), ("upper", BoundaryKind(upper))):
        if side == "lower":
            src = q[:, :g][:, ::-1] if kind == BoundaryKind.WALL else np.repeat(q[:, :1], g, axis=1)
            out[:, :g] = src
            if kind == BoundaryKind.WALL:
                out[1, :g] *= -1.0
        else:
            src = q[:, -g:][:, ::-1] if kind == BoundaryKind.WALL else np.repeat(q[:, -1:], g, axis=1)
            out[:, -g:] = src
            if kind == BoundaryKind.WALL:
                out[1, -g:] *= -1.0
    return out


def validate(state: SimulationState, q: NDArray[np.float64] | None = None) -> None:
    q = state.q if q is None else q
    rho, mom, ener = q
    gamma = state.materials.gamma
    p_inf = state.materials.p_inf
    with np.errstate(all="ignore"):
        p = (gamma - 1.0) * (ener - 0.5 * mom * mom / rho) - gamma * p_inf
        bad = ~((rho > 0.0) & (p + p_inf > 0.0) & np.isfinite(ener) & np.isfinite(mom))
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise InvalidStateError(
            "invalid cell state",
            i,
            {
                "x": float(state.grid.centers[i]),
                "time": state.time,
                "rho": float(rho[i]),
                "u": float(mom[i] / rho[i]) if rho[i] != 0 else float("nan"),
                "p": float(p[i]),
                "p_inf": float(p_inf[i]),
            },
        )


def _flux(rho, u, p, ener):
    return np.array([rho * u, rho * u * u + p, u * (ener + p)])


def edge_fans(qg, gam, pinf, options: SolverOptions):
    """Waves, speeds and fluctuations at every edge of the padded array.

    Returns (waves[3 waves, 3 comps, E], speeds[3, E], max_speed[E],
    amdq[3, E], apdq[3, E], contact_frame[E], jump[E]).
    """
    rho, mom, ener = qg
    u = mom / rho
    p = (gam - 1.0) * (ener - 0.5 * mom * u) - gam * pinf
    c = np.sqrt(gam * (p + pinf) / rho)

    L = slice(0, -1)
    R = slice(1, None)
    rL, uL, pL, EL, gL, piL, cL = rho[L], u[L], p[L], ener[L], gam[L], pinf[L], c[L]
    rR, uR, pR, ER, gR, piR, cR = rho[R], u[R], p[R], ener[R], gam[R], pinf[R], c[R]

    jump = (gL != gR) | (piL != piR)
    stiff = (piL > 0.0) | (piR > 0.0)
    want_exact = np.where(
        jump,
        options.interface_solver == "exact",
        stiff & (options.stiff_solver == "exact"),
    )
    contact_frame = jump | (stiff & options.lagrangian_in_stiff)

    qL = qg[:, L]
    qR = qg[:, R]
    fL = _flux(rL, uL, pL, EL)
    fR = _flux(rR, uR, pR, ER)

    n_edges = rL.shape[0]
    waves = np.empty((3, 3, n_edges))
    speeds = np.empty((3, n_edges))
    max_speed = np.empty(n_edges)
    amdq = np.empty((3, n_edges))
    apdq = np.empty((3, n_edges))

    h = ~want_exact
    if np.any(h):
        if options.speed_estimate is davis_speeds:
            sL = np.minimum(uL[h] - cL[h], uR[h] - cR[h])
            sR = np.maximum(uL[h] + cL[h], uR[h] + cR[h])
        else:
            sL, sR = _custom_speeds(
                options.speed_estimate,
                rL[h], uL[h], pL[h], gL[h], piL[h],
                rR[h], uR[h], pR[h], gR[h], piR[h],
            )
        s_star, _, starL, starR = hllc_star_arrays(
            rL[h], uL[h], pL[h], EL[h], sL, rR[h], uR[h], pR[h], ER[h], sR
        )
        qsL = np.array(starL)
        qsR = np.array(starR)
        w = np.stack([qsL - qL[:, h], qsR - qsL, qR[:, h] - qsR])
        s = np.stack([sL, s_star, sR])
        shift = np.where(contact_frame[h], s_star, 0.0)
        s = s - shift
        waves[:, :, h] = w
        speeds[:, h] = s
        max_speed[h] = np.max(np.abs(s), axis=0)
        amdq[:, h] = np.einsum("pe,pce->ce", np.minimum(s, 0.0), w)
        apdq[:, h] = np.einsum("pe,pce->ce", np.maximum(s, 0.0), w)

    x = want_exact
    if np.any(x):
        args = (rL[x], uL[x], pL[x], gL[x], piL[x], rR[x], uR[x], pR[x], gR[x], piR[x])
        ps, us, rsl, rsr, _, _ = solve_star_arrays(*args)
        EsL = (ps + gL[x] * piL[x]) / (gL[x] - 1.0) + 0.5 * rsl * us * us
        EsR = (ps + gR[x] * piR[x]) / (gR[x] - 1.0) + 0.5 * rsr * us * us
        qsL = np.array([rsl, rsl * us, EsL])
        qsR = np.array([rsr, rsr * us, EsR])
        lh, lt, rt, rh = wave_speeds_arrays(ps, us, *args)
        w = np.stack([qsL - qL[:, x], qsR - qsL, qR[:, x] - qsR])
        s = np.stack([0.5 * (lh + lt), us, 0.5 * (rt + rh)])
        cf = contact_frame[x]
        shift = np.where(cf, us, 0.0)
        s = s - shift
        waves[:, :, x] = w
        speeds[:, x] = s
        max_speed[x] = np.maximum(np.abs(lh - shift), np.abs(rh - shift))

        fsL = _flux(rsl, us, ps, EsL)
        fsR = _flux(rsr, us, ps, EsR)
        # contact frame: each side's wave goes entirely to its own side
        am_cf = fsL - fL[:, x] - us * (qsL - qL[:, x])
        ap_cf = fR[:, x] - fsR - us * (qR[:, x] - qsR)
        # Eulerian: Godunov flux at x/t = 0
        r0, u0, p0, left = sample_arrays(np.zeros_like(ps), ps, us, rsl, rsr, *args)
        g0 = np.where(left, gL[x], gR[x])
        pi0 = np.where(left, piL[x], piR[x])
        E0 = (p0 + g0 * pi0) / (g0 - 1.0) + 0.5 * r0 * u0 * u0
        f0 = _flux(r0, u0, p0, E0)
        amdq[:, x] = np.where(cf, am_cf, f0 - fL[:, x])
        apdq[:, x] = np.where(cf, ap_cf, fR[:, x] - f0)

    return waves, speeds, max_speed, amdq, apdq, contact_frame, jump, fR - fL


class _EosArrays:
    __slots__ = ("gamma", "p_inf")

    def __init__(self, gamma, p_inf):
        self.gamma = gamma
        self.p_inf = p_inf


def _custom_speeds(fn, rL, uL, pL, gL, piL, rR, uR, pR, gR, piR):
    return fn(
        PrimitiveState(rL, uL, pL), _EosArrays(gL, piL), PrimitiveState(rR, uR, pR), _EosArrays(gR, piR)
    )


def step(
    state: SimulationState,
    cfl_target: float = 0.9,
    options: SolverOptions | None = None,
    dt_max: float | None = None,
    diagnostics: StepDiagnostics | None = None,
) -> tuple[SimulationState, float]:
    """Advance one time step with dt = cfl_target * dx / max|s| (clipped to dt_max)."""
    if not 0.0 < cfl_target < 1.0:
        raise ValueError(f"cfl_target must lie in (0, 1), got {cfl_target}")
    options = options or SolverOptions()
    grid = state.grid
    g = grid.n_ghost
    n = grid.n_cells
    dx = grid.dx

    qg = apply_boundaries(state.q, g, options.bc_lower, options.bc_upper)
    gam = np.pad(state.materials.gamma, g, mode="edge")
    pinf = np.pad(state.materials.p_inf, g, mode="edge")

    waves, speeds, smax, amdq, apdq, cframe, jump, dflux = edge_fans(qg, gam, pinf, options)

    # edges bounding interior cells: padded edge j lies between padded cells j and j+1
    e_lo, e_hi = g - 1, g + n  # interior edges are e_lo .. e_hi - 1
    s_top = float(np.max(smax[e_lo:e_hi]))
    dt = cfl_target * dx / s_top if s_top > 0.0 else np.inf
    if dt_max is not None:
        dt = min(dt, dt_max)
    if not np.isfinite(dt):
        raise ValueError("no finite time step: all wave speeds are zero and dt_max is unset")
    nu = dt / dx

    q_new = state.q - nu * (apdq[:, e_lo:e_hi - 1] + amdq[:, e_lo + 1:e_hi])

    if options.order == 2:
        e = np.arange(e_lo, e_hi)
        w = waves[:, :, e]
        s = speeds[:, e]
        upw = np.where(s > 0.0, e - 1, e + 1)
        w_up = waves[np.arange(3)[:, None], :, upw].transpose(0, 2, 1)
        norm2 = np.einsum("pce,pce->pe", w, w)
        dot = np.einsum("pce,pce->pe", w_up, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            theta = np.where(norm2 > 0.0, dot / norm2, 0.0)
        phi = np.where(norm2 > 0.0, _phi(theta, options.limiter), 0.0)
        coef = 0.5 * np.abs(s) * (1.0 - nu * np.abs(s)) * phi
        ftilde = np.einsum("pe,pce->ce", coef, w)
        ftilde[:, jump[e]] = 0.0
        q_new -= nu * (ftilde[:, 1:] - ftilde[:, :-1])

    new_state = replace(state, time=state.time + dt, q=q_new)
    validate(new_state)

    if diagnostics is not None:
        diagnostics.steps += 1
        diagnostics.max_courant = max(diagnostics.max_courant, nu * s_top)
        cf = np.flatnonzero(cframe[e_lo:e_hi]) + e_lo
        if cf.size:
            defect = (amdq[:, cf] + apdq[:, cf] - dflux[:, cf]).sum(axis=1)
            diagnostics.interface_defect += dt * defect
    return new_state, dt


Callback = Callable[[SimulationState, float], None]


def run_until(
    state: SimulationState,
    t_end: float,
    callbacks: Iterable[Callback] = (),
    cfl_target: float = 0.9,
    options: SolverOptions | None = None,
    diagnostics: StepDiagnostics | None = None,
    max_steps: int | None = None,
) -> SimulationState:
    """Step until ``t_end``; the last step is shortened to land on it exactly."""
    if t_end < state.time:
        raise ValueError(f"t_end={t_end} is before the current time {state.time}")
    callbacks: Sequence[Callback] = tuple(callbacks)
    steps = 0
    while state.time < t_end:
        remaining = t_end - state.time
        state, dt = step(state, cfl_target, options, dt_max=remaining, diagnostics=diagnostics)
        if dt >= remaining:
            state = replace(state, time=t_end)
        steps += 1
        for cb in callbacks:
            cb(state, dt)
        if max_steps is not None and steps >= max_steps:
            log.warning("stopped after max_steps=%d at t=%g", max_steps, state.time)
            break
    return state
