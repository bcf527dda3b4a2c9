"""
Shock tube with a plastic layer of varying width
================================================

Run the bundled sweep configuration at reduced resolution and print the
gauge maxima per layer width.  Pass ``--full`` for the 2000-cell runs used
by the acceptance tests (a few minutes on one core).
"""

from __future__ import annotations

import sys

from tammann_fv.config import load_sweep_config
from tammann_fv.experiment import simulate

full = "--full" in sys.argv
sweep = load_sweep_config("sweep.cfg")
base = sweep.base
if not full:
    # 800 cells keep every layer in the sweep at four cells or more
    from dataclasses import replace

    base = replace(base, grid=replace(base.grid, n_cells=800))

print(f"{base.grid.n_cells} cells on [{base.grid.x_lower}, {base.grid.x_upper}] m")
print(f"{'width':>6s} {'gauge 2':>9s} {'gauge 3':>9s} {'gauge 4':>9s}   (kPa)")
peaks = {}
for width in sweep.reporting_order():
    if 0.0 < width < 4 * (base.grid.x_upper - base.grid.x_lower) / base.grid.n_cells:
        print(f"{width:6.2f}   skipped: too thin for {base.grid.n_cells} cells")
        continue
    result = simulate(base.with_width(width))
    peaks[width] = {g: p / 1e3 for g, p in result.max_pressures().items()}
    print(f"{width:6.2f} " + " ".join(f"{peaks[width][g]:9.2f}" for g in (2, 3, 4)))

# the thin layer transmits what the plain air|water interface transmits
if 0.0 in peaks:
    thin = min(w for w in peaks if w > 0.0)
    gap = abs(peaks[thin][4] - peaks[0.0][4]) / peaks[0.0][4]
    print(f"\nthinnest layer ({thin} m) vs no layer at gauge 4: {100 * gap:.2f}% apart")
    print(f"air to water amplification: {peaks[0.0][4] / (base.shock.initial_amplitude / 1e3):.3f}")
