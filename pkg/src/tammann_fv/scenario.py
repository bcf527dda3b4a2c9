"""
Air / plastic / water shock-tube scenarios: material layouts, the idealized
initial shock and pressure gauges.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .eos import AIR, P_ATM, PLASTIC, RHO_AIR, RHO_PLASTIC, RHO_WATER, WATER, EosParams, PrimitiveState
from .fvm import Grid1D, MaterialGrid, SimulationState, state_from_primitive

log = logging.getLogger(__name__)

MIN_LAYER_CELLS = 4


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Material:
    name: str
    eos: EosParams
    rho_ref: float


DEFAULT_MATERIALS = {
    "air": Material("air", AIR, RHO_AIR),
    "plastic": Material("plastic", PLASTIC, RHO_PLASTIC),
    "water": Material("water", WATER, RHO_WATER),
}


@dataclass(frozen=True)
class Layer:
    material: Material
    x_left: float
    x_right: float

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


@dataclass(frozen=True)
class LayeredLayout:
    layers: tuple[Layer, ...]
    plastic_width: float = 0.0

    def __post_init__(self):
        for a, b in zip(self.layers, self.layers[1:]):
            if a.x_right != b.x_left:
                raise ValueError(f"layers {a.material.name} and {b.material.name} do not tile")
        if any(layer.width <= 0.0 for layer in self.layers):
            raise ValueError("zero-width layers must be dropped")

    @classmethod
    def air_plastic_water(
        cls,
        x_lower: float,
        x_upper: float,
        plastic_width: float,
        materials: dict[str, Material] | None = None,
    ) -> "LayeredLayout":
        """Air | plastic | water with the plastic centered at x = 0; width 0 drops the plastic."""
        if plastic_width < 0.0:
            raise ValueError("plastic width must be >= 0")
        m = materials or DEFAULT_MATERIALS
        half = 0.5 * plastic_width
        if not (x_lower < -half and half < x_upper):
            raise ValueError("plastic layer does not fit in the domain")
        bounds = [
            (m["air"], x_lower, -half),
            (m["plastic"], -half, half),
            (m["water"], half, x_upper),
        ]
        layers = tuple(Layer(mat, a, b) for mat, a, b in bounds if b > a)
        return cls(layers, plastic_width)

    @property
    def x_lower(self) -> float:
        return self.layers[0].x_left

    @property
    def x_upper(self) -> float:
        return self.layers[-1].x_right


@dataclass(frozen=True)
class SnappedLayout:
    grid: Grid1D
    materials: MaterialGrid
    layout: LayeredLayout
    snap_distances: tuple[float, ...]


def build_layout(layout: LayeredLayout, n_cells: int, n_ghost: int = 2) -> tuple[Grid1D, MaterialGrid]:
    return build_layout_report(layout, n_cells, n_ghost)[:2]


def build_layout_report(layout: LayeredLayout, n_cells: int, n_ghost: int = 2):
    """Snap layer boundaries to the nearest cell edge.

    Returns (grid, material grid, snap distances per internal boundary).
    """
    grid = Grid1D(n_cells, layout.x_lower, layout.x_upper, n_ghost)
    dx = grid.dx
    for layer in layout.layers:
        if layer.width < MIN_LAYER_CELLS * dx:
            need = math.ceil(MIN_LAYER_CELLS * (grid.x_upper - grid.x_lower) / layer.width)
            raise ResolutionError(
                f"layer {layer.material.name!r} of width {layer.width} m spans fewer than "
                f"{MIN_LAYER_CELLS} cells at n_cells={n_cells}; use n_cells >= {need}"
            )
    names: list[str] = []
    eoss: list[EosParams] = []
    index = np.empty(n_cells, dtype=np.int64)
    snaps = []
    start = 0
    for k, layer in enumerate(layout.layers):
        if k == len(layout.layers) - 1:
            stop = n_cells
        else:
            stop = int(round((layer.x_right - grid.x_lower) / dx))
            snaps.append(abs(grid.x_lower + stop * dx - layer.x_right))
        if layer.material.name not in names:
            names.append(layer.material.name)
            eoss.append(layer.material.eos)
        index[start:stop] = names.index(layer.material.name)
        start = stop
    if snaps:
        log.debug("material edges snapped by up to %.3g m", max(snaps))
    return grid, MaterialGrid(tuple(eoss), tuple(names), index), tuple(snaps)


@dataclass(frozen=True)
class InitialShockSpec:
    """Right-moving pulse: sharp front at ``peak_overpressure`` above ambient,
    then linear decay to ambient over ``pulse_length`` behind the front."""

    peak_overpressure: float
    front_position: float
    pulse_length: float
    p_ambient: float = P_ATM

    def __post_init__(self):
        if self.peak_overpressure < 0.0:
            raise ValueError("peak overpressure must be >= 0")
        if self.pulse_length <= 0.0:
            raise ValueError("pulse length must be > 0")

    @classmethod
    def from_absolute_peak(cls, p_peak: float, front_position: float, pulse_length: float, p_ambient: float = P_ATM):
        return cls(p_peak - p_ambient, front_position, pulse_length, p_ambient)

    @property
    def peak_pressure(self) -> float:
        return self.p_ambient + self.peak_overpressure

    def pressure(self, x):
        x = np.asarray(x, dtype=float)
        tail = self.front_position - self.pulse_length
        inside = (x > tail) & (x <= self.front_position)
        frac = (x - tail) / self.pulse_length
        return np.where(inside, self.p_ambient + self.peak_overpressure * frac, self.p_ambient)


def build_initial_state(
    grid: Grid1D,
    materials: MaterialGrid,
    layout: LayeredLayout,
    shock: InitialShockSpec,
) -> SimulationState:
    """Ambient rest state in every layer plus a right-moving simple wave in the air.

    Inside the pulse the density follows the isentrope through the ambient
    state and the velocity the matching Riemann invariant.
    """
    x = grid.centers
    rho_ref = np.empty(grid.n_cells)
    for layer in layout.layers:
        rho_ref[materials.index == materials.names.index(layer.material.name)] = layer.material.rho_ref
    gamma = materials.gamma
    p_inf = materials.p_inf
    p = shock.pressure(x)
    pulse = p != shock.p_ambient
    if np.any(pulse):
        if len(np.unique(materials.index[pulse])) != 1:
            raise ValueError("initial pulse straddles a material boundary")
        first = layout.layers[0]
        if not (shock.front_position <= first.x_right and shock.front_position - shock.pulse_length >= first.x_left):
            raise ValueError("initial pulse must lie entirely inside the leftmost layer")
    ratio = (p + p_inf) / (shock.p_ambient + p_inf)
    rho = rho_ref * ratio ** (1.0 / gamma)
    c_amb = np.sqrt(gamma * (shock.p_ambient + p_inf) / rho_ref)
    u = 2.0 * c_amb / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    return state_from_primitive(PrimitiveState(rho, u, p), grid, materials)


@dataclass(frozen=True)
class Gauge:
    gauge_id: int
    position: float


@dataclass
class GaugeTrace:
    gauge_id: int
    position: float
    cell: int
    times: list[float] = field(default_factory=list)
    pressures: list[float] = field(default_factory=list)

    @property
    def max_pressure(self) -> float:
        return max(self.pressures)

    def as_arrays(self):
        return np.asarray(self.times), np.asarray(self.pressures)


def make_traces(grid: Grid1D, gauges) -> list[GaugeTrace]:
    return [GaugeTrace(g.gauge_id, g.position, grid.cell_index(g.position)) for g in gauges]


def record_gauges(state: SimulationState, traces: list[GaugeTrace]) -> list[GaugeTrace]:
    """Append (t, p) from the cell containing each gauge; repeated times are skipped."""
    if not traces:
        return traces
    cells = np.array([t.cell for t in traces])
    rho, mom, ener = state.q[:, cells]
    gamma = state.materials.gamma[cells]
    p_inf = state.materials.p_inf[cells]
    p = (gamma - 1.0) * (ener - 0.5 * mom * mom / rho) - gamma * p_inf
    for trace, value in zip(traces, p):
        if trace.times and state.time <= trace.times[-1]:
            continue
        trace.times.append(float(state.time))
        trace.pressures.append(float(value))
    return traces
