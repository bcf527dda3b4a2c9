"""
Acoustic transmission through a thin layer
==========================================

Linear acoustics predicts a staircase of transmitted pressures behind a
layer sandwiched between air and water.  Every step is one round trip inside
the layer, and the steps sum to the value for air against water directly,
whatever the layer is made of.
"""

from __future__ import annotations

import numpy as np

from tammann_fv.acoustics import (
    asymptotic_transmission,
    bounce_interval,
    default_impedances,
    reference_sound_speed,
    transmission_series,
)

z = default_impedances()
p0 = 82.735e3  # incident overpressure in Pa
for name in ("air", "plastic", "water"):
    print(f"Z_{name:8s} = {z[name].z:12.6g} kg/(m^2 s)")

terms = transmission_series(p0, z["air"], z["plastic"], z["water"], 40)
closed = asymptotic_transmission(p0, z["air"], z["water"])
partial = np.cumsum(terms)
print(f"\nclosed form {closed / 1e3:.4f} kPa (ratio {closed / p0:.6f})")
for n in (1, 2, 5, 10, 20, 40):
    print(f"after {n:3d} round trips: {partial[n - 1] / 1e3:10.4f} kPa")

cp = reference_sound_speed("plastic")
for w in (0.1, 0.6, 2.6):
    print(f"layer {w:3.1f} m: one step every {bounce_interval(w, cp) * 1e6:7.1f} us")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    tau = bounce_interval(0.1, cp)
    t = tau * np.arange(1, 41)
    plt.step(t * 1e3, partial / 1e3, where="post", label="bounce series")
    plt.axhline(closed / 1e3, ls="--", color="k", label="air to water")
    plt.xlabel("time after first arrival (ms)")
    plt.ylabel("transmitted overpressure (kPa)")
    plt.legend()
    plt.savefig("layer_acoustics.svg")
    print("wrote layer_acoustics.svg")
