from __future__ import annotations

import pytest

from tammann_fv.config import (
    CONFIG_DIR,
    DEFAULT_WIDTHS,
    ConfigError,
    load_run_config,
    load_sweep_config,
    parse_run_config,
    parse_sweep_config,
    resolve_config_path,
)
from tammann_fv.eos import P_ATM, PLASTIC
from tammann_fv.fvm import BoundaryKind

SCHEMA = (CONFIG_DIR / "schema.cfg").read_text()


def edit(text: str, key: str, value: str | None) -> str:
    """Replace (or with None, drop) the first line assigning ``key``."""
    out = []
    done = False
    for line in text.splitlines():
        if not done and line.split("=")[0].strip() == key:
            done = True
            if value is not None:
                out.append(f"{key} = {value}")
            continue
        out.append(line)
    assert done, key
    return "\n".join(out) + "\n"


def line_of(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if line.split("=")[0].strip() == key:
            return i
    raise KeyError(key)


@pytest.mark.parametrize("name", ["schema.cfg", "air_water.cfg", "plastic_2.6.cfg", "sweep.cfg"])
def test_bundled_configs_load(name):
    cfg = load_run_config(CONFIG_DIR / name)
    assert cfg.grid.n_cells == 2000
    assert (cfg.grid.x_lower, cfg.grid.x_upper) == (-10.0, 10.0)
    assert cfg.shock.initial_amplitude == pytest.approx(184060.0)
    assert [g.gauge_id for g in cfg.gauges] == [1, 2, 3, 4]


def test_schema_values():
    cfg = parse_run_config(SCHEMA)
    assert cfg.materials["plastic"].eos == PLASTIC
    assert cfg.layer_names == ("air", "plastic", "water")
    assert cfg.plastic_width == 0.1
    assert cfg.options.limiter == "mc" and cfg.options.order == 2
    assert cfg.options.bc_lower is BoundaryKind.OUTFLOW
    assert cfg.cfl == 0.9 and cfg.t_end == 0.02
    assert cfg.source == "<string>"


def test_bundled_name_resolution():
    assert resolve_config_path("air_water") == CONFIG_DIR / "air_water.cfg"
    assert load_run_config("air_water.cfg").plastic_width == 0.0


def test_overpressure_convention():
    text = edit(edit(SCHEMA, "convention", "overpressure"), "peak_kpa", "82.735")
    cfg = parse_run_config(text)
    assert cfg.shock.initial_amplitude == pytest.approx(82735.0 + P_ATM)


def test_sweep_widths_and_reporting_order():
    sweep = load_sweep_config(CONFIG_DIR / "sweep.cfg")
    assert sweep.widths == DEFAULT_WIDTHS
    text = SCHEMA.replace("widths = 2.6, 1.4, 0.6, 0.2, 0.1, 0.0", "widths = 0.0, 1.4, 0.6")
    assert parse_sweep_config(text).reporting_order() == (1.4, 0.6, 0.0)


@pytest.mark.parametrize(
    "key,value,match",
    [
        ("middle", "rubber", "undefined material 'rubber'"),
        ("n_cells", "many", "not a valid int"),
        ("cfl", "1.0", "cfl must be < 1"),
        ("limiter", "fancy", "expected one of"),
        ("order", "3", "order must be 1 or 2"),
        ("plastic_width", "0.02", "n_cells >= 4000"),
        ("front", "5.0", "inside the left layer"),
        ("4", "12.0", "outside the domain"),
        ("air", "1.4, 0.0", "needs 'gamma, p_inf_Pa, rho_ref'"),
        ("water", "0.9, 3e8, 1000", "gamma"),
        ("lagrangian_in_stiff", "maybe", "not a boolean"),
        ("peak_kpa", "50", "peak must be >= ambient"),
    ],
)
def test_invalid_values_give_line_anchored_errors(key, value, match):
    text = edit(SCHEMA, key, value)
    with pytest.raises(ConfigError, match=match) as info:
        parse_run_config(text, "bad.cfg")
    assert info.value.line == line_of(text, key)
    assert str(info.value).startswith(f"bad.cfg:{info.value.line}: ")


def test_missing_required_key_points_at_section():
    text = edit(SCHEMA, "t_end", None)
    with pytest.raises(ConfigError, match=r"missing required key \[solver\] t_end") as info:
        parse_run_config(text)
    assert text.splitlines()[info.value.line - 1].strip() == "[solver]"


def test_syntax_error_has_line():
    with pytest.raises(ConfigError) as info:
        parse_run_config("[grid]\nn_cells = 10\n[grid]\n")
    assert info.value.line == 3


def test_sweep_width_needing_more_cells_is_rejected():
    text = SCHEMA.replace("widths = 2.6, 1.4, 0.6, 0.2, 0.1, 0.0", "widths = 2.6, 0.01")
    with pytest.raises(ConfigError, match="n_cells >= 8000") as info:
        parse_sweep_config(text)
    assert info.value.line == line_of(text, "widths")


def test_with_width_checks_resolution():
    cfg = parse_run_config(SCHEMA)
    assert cfg.with_width(2.6).plastic_width == 2.6
    with pytest.raises(ConfigError):
        cfg.with_width(0.01)


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config"):
        load_run_config(tmp_path / "nope.cfg")
