"""
Grid convergence of the finite volume scheme
============================================

A smooth acoustic pulse in air gives the observed order of the limited
second-order scheme; the Sod tube shows the L1 density error against the
exact solution falling with resolution.
"""

from __future__ import annotations

import numpy as np

from tammann_fv.eos import AIR, PrimitiveState
from tammann_fv.fvm import Grid1D, MaterialGrid, SimulationState, SolverOptions, run_until, state_from_primitive
from tammann_fv.riemann import sample, solve_star


def pulse(n: int) -> SimulationState:
    """Right-moving simple wave, averaged over 8 sub-samples per cell."""
    grid = Grid1D(n, 0.0, 1.0)
    sub = grid.centers[:, None] + grid.dx * ((np.arange(8) + 0.5) / 8 - 0.5)
    p = 1.0 + 1e-3 * np.exp(-(((sub - 0.4) / 0.05) ** 2))
    rho = p ** (1 / 1.4)
    u = 2 * np.sqrt(1.4) / 0.4 * (p ** (0.4 / 2.8) - 1.0)
    q = np.array([rho.mean(1), (rho * u).mean(1), (p / 0.4 + 0.5 * rho * u * u).mean(1)])
    return SimulationState(0.0, q, grid, MaterialGrid.uniform(n, AIR))


for limiter in ("minmod", "mc", "none"):
    t = 0.2 / np.sqrt(1.4)
    rho = [run_until(pulse(n), t, options=SolverOptions(limiter=limiter)).q[0] for n in (100, 200, 400, 800)]
    diff = [np.abs(rho[k] - rho[k + 1].reshape(-1, 2).mean(1)).mean() for k in range(3)]
    orders = np.log2(np.array(diff[:-1]) / np.array(diff[1:]))
    print(f"pulse, {limiter:7s} limiter: observed L1 orders " + ", ".join(f"{o:.2f}" for o in orders))

left, right = PrimitiveState(1.0, 0.0, 1.0), PrimitiveState(0.125, 0.0, 0.1)
star = solve_star(left, AIR, right, AIR)
for n in (100, 200, 400, 800):
    grid = Grid1D(n, 0.0, 1.0)
    x = grid.centers
    w = PrimitiveState(np.where(x < 0.5, 1.0, 0.125), 0.0, np.where(x < 0.5, 1.0, 0.1))
    out = run_until(state_from_primitive(w, grid, MaterialGrid.uniform(n, AIR)), 0.2)
    exact = sample(star, left, AIR, right, AIR, (x - 0.5) / 0.2)
    print(f"sod, {n:4d} cells: L1 density error {np.abs(out.q[0] - exact.rho).sum() * grid.dx:.3e}")
