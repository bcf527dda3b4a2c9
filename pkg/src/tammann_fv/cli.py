"""
Command-line entry point.

    tammann-fv run CONFIG        one simulation, gauge CSVs and a summary
    tammann-fv sweep CONFIG      the plastic-width sweep and its table
    tammann-fv riemann ...       HLLC and exact star states for one edge
    tammann-fv acoustics ...     layered-media transmission series

Exit codes: 0 success, 2 invalid configuration or arguments, 3 solver failure.
The default output directory comes from ``$TAMMANN_FV_OUTPUT_DIR`` and
falls back to ``./tammann_output``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import acoustics
from .config import ConfigError, load_run_config, load_sweep_config
from .eos import AIR, PLASTIC, WATER, EosParams, InvalidStateError, PrimitiveState
from .experiment import simulate, run_sweep, thin_layer_gap, write_run_outputs
from .riemann import (
    ConvergenceError,
    SolverDegenerateError,
    VacuumError,
    hllc_solve,
    lagrangian_transform,
    solve_star,
)
from .riemann.exact import wave_speeds_arrays

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
OUTPUT_ENV = "TAMMANN_FV_OUTPUT_DIR"
SOLVER_ERRORS = (InvalidStateError, ConvergenceError, VacuumError, SolverDegenerateError, ArithmeticError)
NAMED_EOS = {"air": AIR, "plastic": PLASTIC, "water": WATER}

log = logging.getLogger("tammann_fv")


class UsageError(Exception):
    pass


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUTPUT_ENV) or "tammann_output")


def _report_solver_error(exc: Exception) -> int:
    print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
    values = getattr(exc, "values", None)
    if values:
        print("  state: " + ", ".join(f"{k}={v!r}" for k, v in values.items()), file=sys.stderr)
    last = getattr(exc, "last_iterate", None)
    if last is not None:
        print(f"  last iterate: {last!r}", file=sys.stderr)
    return EXIT_SOLVER


def cmd_run(args) -> int:
    cfg = load_run_config(args.config)
    if args.width is not None:
        cfg = cfg.with_width(args.width)
    try:
        result = simulate(cfg)
    except SOLVER_ERRORS as exc:
        return _report_solver_error(exc)
    out = _out_dir(args)
    write_run_outputs(result, out, plots=args.plots or cfg.output.plots)
    print(f"plastic width {cfg.plastic_width:g} m, t_end {cfg.t_end:g} s, {result.diagnostics.steps} steps")
    print(f"initial amplitude {cfg.shock.initial_amplitude / 1e3:.2f} kPa")
    for trace in result.traces:
        print(f"gauge {trace.gauge_id} (x = {trace.position:g} m): max {trace.max_pressure / 1e3:.2f} kPa")
    print(f"outputs in {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    sweep = load_sweep_config(args.config)
    out = _out_dir(args)
    rows = run_sweep(sweep, out, jobs=args.jobs, plots=args.plots or sweep.base.output.plots)
    print(f"{'width_m':>8} {'initial':>8} {'gauge2':>8} {'gauge3':>8} {'gauge4':>8}")
    failed = 0
    for r in rows:
        if r.gauges is None:
            failed += 1
            print(f"{r.width:8.3f} failed: {r.error}")
            continue
        vals = [r.gauges.get(g, np.nan) / 1e3 for g in (2, 3, 4)]
        print(f"{r.width:8.3f} {r.initial / 1e3:8.2f} " + " ".join(f"{v:8.2f}" for v in vals))
    gap = thin_layer_gap(rows)
    if gap is not None:
        print(f"thin layer vs no plastic, gauge 4: {100 * gap:.2f}% relative difference")
    print(f"table written to {out / 'sweep_table.csv'}")
    return EXIT_SOLVER if failed else EXIT_OK


def _triple(text: str, what: str, n: int = 3) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: {text!r} is not a comma-separated list of numbers") from None
    if len(vals) != n:
        raise UsageError(f"{what}: expected {n} values, got {len(vals)}")
    return vals


def _eos_arg(text: str, what: str) -> EosParams:
    if text.lower() in NAMED_EOS:
        return NAMED_EOS[text.lower()]
    gamma, p_inf = _triple(text, what, 2)
    try:
        return EosParams(gamma, p_inf)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from None


def cmd_riemann(args) -> int:
    wL = PrimitiveState(*_triple(args.left, "--left"))
    wR = PrimitiveState(*_triple(args.right, "--right"))
    eosL = _eos_arg(args.eos_left, "--eos-left")
    eosR = _eos_arg(args.eos_right, "--eos-right")
    for w, eos, side in ((wL, eosL, "left"), (wR, eosR, "right")):
        if not (w.rho > 0 and w.p + eos.p_inf > 0):
            raise UsageError(f"{side} state violates rho > 0 and p + p_inf > 0")
    try:
        fan = hllc_solve(wL, eosL, wR, eosR)
        star = solve_star(wL, eosL, wR, eosR)
    except SOLVER_ERRORS as exc:
        return _report_solver_error(exc)
    lh, _, _, rh = wave_speeds_arrays(
        star.p_star, star.u_star, wL.rho, wL.u, wL.p, eosL.gamma, eosL.p_inf,
        wR.rho, wR.u, wR.p, eosR.gamma, eosR.p_inf,
    )
    exact_speeds = [float(lh), star.u_star, float(rh)]
    frame = "Eulerian"
    if args.lagrangian:
        fan = lagrangian_transform(fan)
        exact_speeds = [s - star.u_star for s in exact_speeds]
        exact_speeds[1] = 0.0
        frame = "contact frame"
    rows = [
        ("s_left", fan.s_left, exact_speeds[0]),
        ("s_star", fan.s_star, exact_speeds[1]),
        ("s_right", fan.s_right, exact_speeds[2]),
        ("p_star", fan.p_star, star.p_star),
        ("rho_star_left", fan.q_star_left.rho, star.rho_star_left),
        ("rho_star_right", fan.q_star_right.rho, star.rho_star_right),
        ("p_star - p_left", fan.p_star - wL.p, star.p_star - wL.p),
        ("p_star - p_right", fan.p_star - wR.p, star.p_star - wR.p),
    ]
    print(f"wave speeds in the {frame}")
    print(f"{'quantity':<18} {'hllc':>16} {'exact':>16}")
    for name, a, b in rows:
        print(f"{name:<18} {float(a) + 0.0:16.9g} {float(b) + 0.0:16.9g}")
    print(f"exact waves: left {star.wave_kind_left.value}, right {star.wave_kind_right.value}")
    return EXIT_OK


def cmd_acoustics(args) -> int:
    if args.impedances:
        za, zp, zw = _triple(args.impedances, "--impedances")
        try:
            za, zp, zw = (acoustics.Impedance(z) for z in (za, zp, zw))
        except ValueError as exc:
            raise UsageError(f"--impedances: {exc}") from None
        cp = args.cp
    else:
        names = [n.strip() for n in args.materials.split(",")]
        table = acoustics.default_impedances()
        if len(names) != 3 or any(n not in table for n in names):
            raise UsageError(f"--materials expects three of {', '.join(table)}")
        za, zp, zw = (table[n] for n in names)
        cp = args.cp or acoustics.reference_sound_speed(names[1])
    if args.width < 0 or args.terms < 1:
        raise UsageError("--width must be >= 0 and --terms >= 1")
    p0 = args.p0 * 1e3
    tau = acoustics.bounce_interval(args.width, cp) if cp else float("nan")
    closed = acoustics.asymptotic_transmission(p0, za, zw)
    print(f"impedances (Pa s/m): outer-left {za.z:.6g}, layer {zp.z:.6g}, outer-right {zw.z:.6g}")
    print(f"incident amplitude {args.p0:g} kPa, layer width {args.width:g} m, bounce interval {tau:.6g} s")
    print(f"{'n':>4} {'arrival_s':>12} {'p_T,n (kPa)':>14} {'partial sum':>14}")
    total = 0.0
    for n in range(1, args.terms + 1):
        pn = acoustics.nth_transmission(p0, za, zp, zw, n)
        total += pn
        print(f"{n:4d} {(n - 1) * tau:12.6g} {pn / 1e3:14.8g} {total / 1e3:14.8g}")
    print(f"closed form {closed / 1e3:.8g} kPa (ratio to incident {closed / p0:.6f})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tammann-fv", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (-vv for debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p):
        p.add_argument("config", help="config file, or the name of a bundled config")
        p.add_argument("-o", "--out", help=f"output directory (default ${OUTPUT_ENV} or ./tammann_output)")
        p.add_argument("--plots", action="store_true", help="also write SVG plots (needs matplotlib)")

    p = sub.add_parser("run", help="run one configuration")
    outputs(p)
    p.add_argument("--width", type=float, help="override the plastic width in m")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run the plastic-width sweep")
    outputs(p)
    p.add_argument("-j", "--jobs", type=int, default=1, help="widths run in parallel")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("riemann", help="compare HLLC and exact star states")
    p.add_argument("--left", required=True, help="rho,u,p of the left state")
    p.add_argument("--right", required=True, help="rho,u,p of the right state")
    p.add_argument("--eos-left", default="air", help="material name or gamma,p_inf (default air)")
    p.add_argument("--eos-right", default="air", help="material name or gamma,p_inf (default air)")
    p.add_argument("--lagrangian", action="store_true", help="report speeds in the frame of the contact")
    p.set_defaults(func=cmd_riemann)

    p = sub.add_parser("acoustics", help="transmission through a layer, bounce by bounce")
    p.add_argument("--materials", default="air,plastic,water", help="outer-left,layer,outer-right material names")
    p.add_argument("--impedances", help="za,zp,zw in Pa s/m (overrides --materials)")
    p.add_argument("--cp", type=float, help="sound speed in the layer, m/s")
    p.add_argument("--width", type=float, default=0.1, help="layer width in m")
    p.add_argument("--p0", type=float, default=82.735, help="incident amplitude in kPa")
    p.add_argument("--terms", type=int, default=8, help="number of transmitted arrivals to list")
    p.set_defaults(func=cmd_acoustics)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
