"""
Optional SVG line plots drawn from the CSV outputs.  Needs matplotlib.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _load(path: Path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=None, encoding="utf-8", names=header)
    return np.atleast_1d(data)


def plot_run(csv_paths, out_dir: Path, tag: str) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = []
    gauges = sorted(p for p in csv_paths if Path(p).name.startswith("gauge"))
    if gauges:
        fig, ax = plt.subplots(figsize=(7, 4))
        for path in gauges:
            d = _load(path)
            ax.plot(d["time_s"] * 1e3, d["pressure_kPa"], label=Path(path).stem.split("_")[0])
        ax.set_xlabel("time (ms)")
        ax.set_ylabel("pressure (kPa)")
        ax.legend()
        path = Path(out_dir) / f"gauges_{tag}.svg"
        fig.savefig(path)
        plt.close(fig)
        out.append(path)
    for snap in sorted(p for p in csv_paths if Path(p).name.startswith("snapshot")):
        d = _load(snap)
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(d["x_m"], d["p_kPa"])
        ax.set_xlabel("x (m)")
        ax.set_ylabel("pressure (kPa)")
        path = Path(snap).with_suffix(".svg")
        fig.savefig(path)
        plt.close(fig)
        out.append(path)
    return out
