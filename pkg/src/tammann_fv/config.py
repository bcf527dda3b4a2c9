"""
Declarative run and sweep configuration.

Configs are INI files (``configparser`` syntax).  Every value is validated
before any grid or state is allocated; errors carry the file name and the
line of the offending key so they can be reported as ``file:line: message``.
See ``configs/schema.cfg`` for the annotated schema.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .eos import P_ATM, EosParams
from .fvm import BoundaryKind, SolverOptions
from .scenario import MIN_LAYER_CELLS, Gauge, InitialShockSpec, LayeredLayout, Material

CONFIG_DIR = Path(__file__).parent / "configs"
LIMITERS = ("mc", "minmod", "superbee", "vanleer", "none")
DEFAULT_WIDTHS = (2.6, 1.4, 0.6, 0.2, 0.1, 0.0)


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is 1-based or None when not attributable."""

    def __init__(self, message: str, source: str = "<config>", line: int | None = None):
        self.message = message
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class GridConfig:
    n_cells: int = 2000
    x_lower: float = -10.0
    x_upper: float = 10.0


@dataclass(frozen=True)
class ShockConfig:
    peak_pressure: float
    front_position: float
    pulse_length: float
    convention: str = "absolute"
    p_ambient: float = P_ATM

    def spec(self) -> InitialShockSpec:
        if self.convention == "absolute":
            return InitialShockSpec.from_absolute_peak(
                self.peak_pressure, self.front_position, self.pulse_length, self.p_ambient
            )
        return InitialShockSpec(self.peak_pressure, self.front_position, self.pulse_length, self.p_ambient)

    @property
    def initial_amplitude(self) -> float:
        """Absolute peak pressure of the initial pulse in Pa."""
        return self.spec().peak_pressure


@dataclass(frozen=True)
class OutputConfig:
    snapshot_interval: float = 0.0
    plots: bool = False


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig
    materials: dict[str, Material]
    layer_names: tuple[str, str, str]
    plastic_width: float
    shock: ShockConfig
    gauges: tuple[Gauge, ...]
    cfl: float
    options: SolverOptions
    t_end: float
    output: OutputConfig = field(default_factory=OutputConfig)
    source: str = "<config>"

    def layout(self) -> LayeredLayout:
        left, mid, right = (self.materials[n] for n in self.layer_names)
        mats = {"air": left, "plastic": mid, "water": right}
        return LayeredLayout.air_plastic_water(self.grid.x_lower, self.grid.x_upper, self.plastic_width, mats)

    def with_width(self, width: float) -> "RunConfig":
        cfg = replace(self, plastic_width=float(width))
        _check_resolution(cfg, None)
        return cfg


@dataclass(frozen=True)
class SweepConfig:
    base: RunConfig
    widths: tuple[float, ...] = DEFAULT_WIDTHS

    def reporting_order(self) -> tuple[float, ...]:
        return tuple(sorted(self.widths, reverse=True))


class _Reader:
    """configparser wrapper that remembers the line of every section and key."""

    _section_re = re.compile(r"^\s*\[([^\]]+)\]")
    _key_re = re.compile(r"^\s*([^=:#;\s][^=:]*?)\s*[=:]")

    def __init__(self, text: str, source: str):
        self.source = source
        self.parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
        self.parser.optionxform = str
        try:
            self.parser.read_string(text, source=source)
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            msg = getattr(exc, "message", str(exc)).splitlines()[0]
            raise ConfigError(msg, source, line) from None
        self.lines: dict[tuple[str, str | None], int] = {}
        section = None
        for i, raw in enumerate(text.splitlines(), start=1):
            m = self._section_re.match(raw)
            if m:
                section = m.group(1).strip()
                self.lines.setdefault((section, None), i)
                continue
            m = self._key_re.match(raw)
            if m and section is not None and not raw[:1].isspace():
                self.lines.setdefault((section, m.group(1).strip()), i)

    def error(self, message: str, section: str, key: str | None = None) -> ConfigError:
        line = self.lines.get((section, key)) or self.lines.get((section, None))
        return ConfigError(message, self.source, line)

    def has(self, section: str, key: str | None = None) -> bool:
        if key is None:
            return self.parser.has_section(section)
        return self.parser.has_option(section, key)

    def keys(self, section: str) -> list[str]:
        return list(self.parser[section].keys()) if self.has(section) else []

    def raw(self, section: str, key: str, default=None, required: bool = False) -> str | None:
        if self.has(section, key):
            return self.parser[section][key].strip()
        if required:
            raise self.error(f"missing required key [{section}] {key}", section)
        return default

    def number(self, section, key, default=None, cast=float, positive=False, nonneg=False):
        text = self.raw(section, key, None, required=default is None)
        if text is None:
            return default
        try:
            value = cast(text)
        except ValueError:
            raise self.error(f"[{section}] {key} = {text!r} is not a valid {cast.__name__}", section, key) from None
        if not math.isfinite(value):
            raise self.error(f"[{section}] {key} must be finite", section, key)
        if positive and not value > 0:
            raise self.error(f"[{section}] {key} must be > 0, got {value}", section, key)
        if nonneg and not value >= 0:
            raise self.error(f"[{section}] {key} must be >= 0, got {value}", section, key)
        return value

    def boolean(self, section, key, default: bool) -> bool:
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            return self.parser.getboolean(section, key)
        except ValueError:
            raise self.error(f"[{section}] {key} = {text!r} is not a boolean", section, key) from None

    def choice(self, section, key, default: str, allowed) -> str:
        text = self.raw(section, key, default).lower()
        if text not in allowed:
            raise self.error(f"[{section}] {key} = {text!r}; expected one of {', '.join(allowed)}", section, key)
        return text

    def floats(self, section, key) -> list[float]:
        text = self.raw(section, key, required=True)
        try:
            return [float(v) for v in text.split(",") if v.strip()]
        except ValueError:
            raise self.error(f"[{section}] {key} = {text!r} is not a comma-separated list of numbers", section, key) from None


def _read_materials(r: _Reader) -> dict[str, Material]:
    if not r.has("materials"):
        raise r.error("missing [materials] section", "materials")
    out = {}
    for name in r.keys("materials"):
        vals = r.floats("materials", name)
        if len(vals) != 3:
            raise r.error(f"material {name!r} needs 'gamma, p_inf_Pa, rho_ref', got {len(vals)} values", "materials", name)
        gamma, p_inf, rho = vals
        try:
            eos = EosParams(gamma, p_inf)
        except ValueError as exc:
            raise r.error(f"material {name!r}: {exc}", "materials", name) from None
        if not rho > 0:
            raise r.error(f"material {name!r}: reference density must be > 0", "materials", name)
        out[name] = Material(name, eos, rho)
    return out


def _check_resolution(cfg: RunConfig, r: _Reader | None) -> None:
    dx = (cfg.grid.x_upper - cfg.grid.x_lower) / cfg.grid.n_cells
    w = cfg.plastic_width
    if 0.0 < w < MIN_LAYER_CELLS * dx:
        need = math.ceil(MIN_LAYER_CELLS * (cfg.grid.x_upper - cfg.grid.x_lower) / w)
        msg = f"plastic width {w} m spans fewer than {MIN_LAYER_CELLS} cells; use n_cells >= {need}"
        raise r.error(msg, "layout", "plastic_width") if r else ConfigError(msg, cfg.source)
    if not (cfg.grid.x_lower < -0.5 * w and 0.5 * w < cfg.grid.x_upper):
        msg = f"plastic width {w} m does not fit in the domain"
        raise r.error(msg, "layout", "plastic_width") if r else ConfigError(msg, cfg.source)


def _read_run(r: _Reader) -> RunConfig:
    grid = GridConfig(
        n_cells=r.number("grid", "n_cells", GridConfig.n_cells, cast=int, positive=True),
        x_lower=r.number("grid", "x_lower", GridConfig.x_lower),
        x_upper=r.number("grid", "x_upper", GridConfig.x_upper),
    )
    if not grid.x_lower < grid.x_upper:
        raise r.error("x_lower must be < x_upper", "grid", "x_upper")

    materials = _read_materials(r)
    names = []
    for key in ("left", "middle", "right"):
        name = r.raw("layout", key, required=True)
        if name not in materials:
            raise r.error(f"[layout] {key} refers to undefined material {name!r}", "layout", key)
        names.append(name)
    width = r.number("layout", "plastic_width", 0.0, nonneg=True)

    ambient = r.number("shock", "ambient_kpa", P_ATM / 1e3, positive=True) * 1e3
    shock = ShockConfig(
        peak_pressure=r.number("shock", "peak_kpa", nonneg=True) * 1e3,
        front_position=r.number("shock", "front"),
        pulse_length=r.number("shock", "length", positive=True),
        convention=r.choice("shock", "convention", "absolute", ("absolute", "overpressure")),
        p_ambient=ambient,
    )
    if shock.convention == "absolute" and shock.peak_pressure < ambient:
        raise r.error("absolute peak must be >= ambient pressure", "shock", "peak_kpa")
    tail = shock.front_position - shock.pulse_length
    if not (grid.x_lower <= tail and shock.front_position < -0.5 * width):
        raise r.error(
            f"pulse [{tail}, {shock.front_position}] must lie inside the left layer "
            f"[{grid.x_lower}, {-0.5 * width}]",
            "shock",
            "front",
        )

    gauges = []
    for key in r.keys("gauges"):
        try:
            gid = int(key)
        except ValueError:
            raise r.error(f"gauge id {key!r} is not an integer", "gauges", key) from None
        x = r.number("gauges", key)
        if not grid.x_lower <= x < grid.x_upper:
            raise r.error(f"gauge {gid} at x = {x} lies outside the domain", "gauges", key)
        gauges.append(Gauge(gid, x))

    options = SolverOptions(
        order=r.number("solver", "order", 2, cast=int),
        limiter=r.choice("solver", "limiter", "mc", LIMITERS),
        bc_lower=BoundaryKind(r.choice("solver", "bc_lower", "outflow", ("outflow", "wall"))),
        bc_upper=BoundaryKind(r.choice("solver", "bc_upper", "outflow", ("outflow", "wall"))),
        interface_solver=r.choice("solver", "interface_solver", "exact", ("exact", "hllc")),
        lagrangian_in_stiff=r.boolean("solver", "lagrangian_in_stiff", False),
    )
    if options.order not in (1, 2):
        raise r.error("[solver] order must be 1 or 2", "solver", "order")
    cfl = r.number("solver", "cfl", 0.9, positive=True)
    if cfl >= 1.0:
        raise r.error("[solver] cfl must be < 1", "solver", "cfl")
    t_end = r.number("solver", "t_end", nonneg=True)

    output = OutputConfig(
        snapshot_interval=r.number("output", "snapshot_interval", 0.0, nonneg=True),
        plots=r.boolean("output", "plots", False),
    )
    cfg = RunConfig(grid, materials, tuple(names), width, shock, tuple(gauges), cfl, options, t_end, output, r.source)
    _check_resolution(cfg, r)
    return cfg


def _reader(path) -> _Reader:
    path = resolve_config_path(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    return _Reader(text, str(path))


def resolve_config_path(path) -> Path:
    """Use ``path`` if it exists, otherwise fall back to a bundled config of that name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = CONFIG_DIR / p.name
    if bundled.exists():
        return bundled
    bundled = CONFIG_DIR / (p.name + ".cfg")
    return bundled if bundled.exists() else p


def load_run_config(path) -> RunConfig:
    return _read_run(_reader(path))


def parse_run_config(text: str, source: str = "<string>") -> RunConfig:
    return _read_run(_Reader(text, source))


def _read_sweep(r: _Reader) -> SweepConfig:
    base = _read_run(r)
    widths = tuple(r.floats("sweep", "widths")) if r.has("sweep", "widths") else DEFAULT_WIDTHS
    if not widths:
        raise r.error("[sweep] widths is empty", "sweep", "widths")
    for w in widths:
        if w < 0:
            raise r.error(f"[sweep] widths must be >= 0, got {w}", "sweep", "widths")
        try:
            base.with_width(w)
        except ConfigError as exc:
            raise r.error(exc.message, "sweep", "widths") from None
    return SweepConfig(base, widths)


def load_sweep_config(path) -> SweepConfig:
    return _read_sweep(_reader(path))


def parse_sweep_config(text: str, source: str = "<string>") -> SweepConfig:
    return _read_sweep(_Reader(text, source))
