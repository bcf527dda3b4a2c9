"""
Run orchestration and output files.

File schemas (all CSV, comma separated, one header line):

* gauge traces   ``gauge{id}_w{width}.csv``      ``time_s,pressure_kPa``
* snapshots      ``snapshot_w{width}_{k:04d}.csv`` ``x_m,rho,u,p_kPa,material``
* run summary    ``summary_w{width}.csv``         ``gauge_id,position_m,max_pressure_kPa``
* sweep table    ``sweep_table.csv``              ``width_m,initial_kPa,gauge2_kPa,gauge3_kPa,gauge4_kPa``

Numbers are written with fixed formats so that re-running a config gives
byte-identical files on the same platform.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import RunConfig, SweepConfig
from .fvm import SimulationState, StepDiagnostics, run_until
from .scenario import GaugeTrace, build_initial_state, build_layout_report, make_traces, record_gauges

log = logging.getLogger(__name__)

TABLE_GAUGES = (2, 3, 4)


def width_tag(width: float) -> str:
    return f"w{width:.3f}"


@dataclass
class RunResult:
    config: RunConfig
    state: SimulationState
    traces: list[GaugeTrace]
    diagnostics: StepDiagnostics
    snapshots: list[SimulationState] = field(default_factory=list)
    snap_distances: tuple[float, ...] = ()

    def max_pressures(self) -> dict[int, float]:
        """Maximum absolute pressure per gauge id, in Pa."""
        return {t.gauge_id: t.max_pressure for t in self.traces}


def simulate(cfg: RunConfig) -> RunResult:
    """Build the layout and initial pulse from ``cfg`` and integrate to ``t_end``."""
    layout = cfg.layout()
    grid, materials, snaps = build_layout_report(layout, cfg.grid.n_cells)
    state = build_initial_state(grid, materials, layout, cfg.shock.spec())
    traces = make_traces(grid, cfg.gauges)
    record_gauges(state, traces)
    snapshots = []
    interval = cfg.output.snapshot_interval
    if interval > 0.0:
        snapshots.append(state)
    next_snap = [interval]

    def on_step(s: SimulationState, dt: float) -> None:
        record_gauges(s, traces)
        if interval > 0.0 and s.time >= next_snap[0]:
            snapshots.append(s)
            while next_snap[0] <= s.time:
                next_snap[0] += interval

    diag = StepDiagnostics()
    final = run_until(state, cfg.t_end, [on_step], cfl_target=cfg.cfl, options=cfg.options, diagnostics=diag)
    log.info(
        "width %.3f m: %d steps, max Courant %.3f, interface defect %s",
        cfg.plastic_width, diag.steps, diag.max_courant, np.array2string(diag.interface_defect, precision=4),
    )
    return RunResult(cfg, final, traces, diag, snapshots, snaps)


def _write(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_run_outputs(result: RunResult, out_dir: Path, plots: bool = False) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tag = width_tag(result.config.plastic_width)
    written = []
    for trace in result.traces:
        path = out_dir / f"gauge{trace.gauge_id}_{tag}.csv"
        _write(path, ["time_s", "pressure_kPa"],
               ([f"{t:.9e}", f"{p / 1e3:.6f}"] for t, p in zip(trace.times, trace.pressures)))
        written.append(path)
    path = out_dir / f"summary_{tag}.csv"
    _write(path, ["gauge_id", "position_m", "max_pressure_kPa"],
           ([t.gauge_id, f"{t.position:.6f}", f"{t.max_pressure / 1e3:.6f}"] for t in result.traces))
    written.append(path)
    for k, snap in enumerate(result.snapshots):
        path = out_dir / f"snapshot_{tag}_{k:04d}.csv"
        w = snap.primitive()
        names = np.asarray(snap.materials.names)[snap.materials.index]
        rows = (
            [f"{x:.6f}", f"{r:.9e}", f"{u:.9e}", f"{p / 1e3:.6f}", m]
            for x, r, u, p, m in zip(snap.grid.centers, w.rho, w.u, w.p, names)
        )
        _write(path, ["x_m", "rho", "u", "p_kPa", "material"], rows)
        written.append(path)
    if plots:
        from .plots import plot_run

        written += plot_run(written, out_dir, tag)
    return written


@dataclass
class SweepRow:
    width: float
    initial: float
    gauges: dict[int, float] | None
    error: str | None = None


def _sweep_member(cfg: RunConfig, out_dir: str, plots: bool) -> SweepRow:
    initial = cfg.shock.initial_amplitude
    try:
        result = simulate(cfg)
        write_run_outputs(result, Path(out_dir), plots)
        return SweepRow(cfg.plastic_width, initial, result.max_pressures())
    except (ArithmeticError, ValueError) as exc:
        log.error("width %.3f m failed: %s", cfg.plastic_width, exc)
        return SweepRow(cfg.plastic_width, initial, None, f"{type(exc).__name__}: {exc}")


def run_sweep(sweep: SweepConfig, out_dir: Path, jobs: int = 1, plots: bool = False) -> list[SweepRow]:
    """Run every width (up to ``jobs`` at once) and write the sweep table.

    Rows come back in reporting order: plastic widths descending with the
    no-plastic run last.  A failing width is recorded and the others continue.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    configs = [sweep.base.with_width(w) for w in sweep.reporting_order()]
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_member, configs, [str(out_dir)] * len(configs), [plots] * len(configs)))
    else:
        rows = [_sweep_member(c, str(out_dir), plots) for c in configs]
    write_sweep_table(rows, out_dir / "sweep_table.csv")
    return rows


def write_sweep_table(rows: list[SweepRow], path: Path) -> None:
    def cell(row: SweepRow, gid: int) -> str:
        if row.gauges is None or gid not in row.gauges:
            return ""
        return f"{row.gauges[gid] / 1e3:.2f}"

    _write(
        path,
        ["width_m", "initial_kPa"] + [f"gauge{g}_kPa" for g in TABLE_GAUGES],
        ([f"{r.width:.3f}", f"{r.initial / 1e3:.2f}"] + [cell(r, g) for g in TABLE_GAUGES] for r in rows),
    )


def thin_layer_gap(rows: list[SweepRow], gauge_id: int = 4) -> float | None:
    """Relative gauge gap between the thinnest plastic layer and the no-plastic run."""
    ok = [r for r in rows if r.gauges is not None and gauge_id in r.gauges]
    none = [r for r in ok if r.width == 0.0]
    thin = [r for r in ok if r.width > 0.0]
    if not none or not thin:
        return None
    ref = none[0].gauges[gauge_id]
    thinnest = min(thin, key=lambda r: r.width)
    return abs(thinnest.gauges[gauge_id] - ref) / ref
