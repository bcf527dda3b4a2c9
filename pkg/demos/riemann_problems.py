"""
Riemann problems: approximate versus exact star states
======================================================

Compare the HLLC star pressure with the exact (Newton) solution for a few
classic ideal-gas problems, then solve an air|water interface problem and
sample the exact fan.
"""

from __future__ import annotations

import numpy as np

from tammann_fv.eos import AIR, P_ATM, RHO_AIR, RHO_WATER, WATER, PrimitiveState
from tammann_fv.riemann import hllc_solve, sample, solve_star

# Sod, the symmetric double rarefaction and the strong left blast
problems = {
    "sod": (PrimitiveState(1.0, 0.0, 1.0), PrimitiveState(0.125, 0.0, 0.1)),
    "123": (PrimitiveState(1.0, -2.0, 0.4), PrimitiveState(1.0, 2.0, 0.4)),
    "blast": (PrimitiveState(1.0, 0.0, 1000.0), PrimitiveState(1.0, 0.0, 0.01)),
}
print(f"{'problem':8s} {'hllc p*':>12s} {'exact p*':>12s} {'exact u*':>10s}")
for name, (wl, wr) in problems.items():
    approx = hllc_solve(wl, AIR, wr, AIR)
    exact = solve_star(wl, AIR, wr, AIR)
    print(f"{name:8s} {approx.p_star:12.5g} {exact.p_star:12.5g} {exact.u_star:10.5g}")
# The HLLC estimate is a linear blend of the two outer states: it undershoots
# the Sod shock, and for the 123 problem its star pressure is not even positive.
# The star state is only used through its fluxes, so the finite volume update
# stays well defined; the exact solver is what resolves the star pressure.

# Compressed air at rest against water at ambient pressure.  The stiff water
# takes up almost the whole air pressure at a tiny interface speed, and only
# a weak rarefaction runs back into the air.
air = PrimitiveState(RHO_AIR * (184060.0 / P_ATM) ** (1 / 1.4), 0.0, 184060.0)
water = PrimitiveState(RHO_WATER, 0.0, P_ATM)
star = solve_star(air, AIR, water, WATER)
print(f"\nair|water: p* = {star.p_star / 1e3:.2f} kPa, u* = {star.u_star * 1e3:.3f} mm/s")
print(f"left wave {star.wave_kind_left.value}, right wave {star.wave_kind_right.value}")

xi = np.linspace(-600.0, 1600.0, 12)
fan = sample(star, air, AIR, water, WATER, xi)
for s, p in zip(xi, fan.p):
    print(f"  x/t = {s:8.1f} m/s   p = {p / 1e3:8.2f} kPa")
