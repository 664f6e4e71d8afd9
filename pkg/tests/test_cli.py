import math
import textwrap

import pytest

from adiabatic_search.cli import main
from adiabatic_search.config import parse_config
from adiabatic_search.errors import ConfigError
from adiabatic_search.hamiltonian import HiKind
from adiabatic_search.sweep import COLUMNS, parse_csv, preset_config, read_csv, rows_to_csv, run_failure_demo, run_sweep

MINIMAL = """
dim: 64
hi_kind: hopping
potential: delta
x_min: [10]
T: [5]
dt: 0.05
"""

SMALL = """
dim: 12
hi_kind: hopping
kappa: 1.0
potential: delta
x_min: [9, 2]
T: [3.0, 1.5]
dt: 0.05
stride: 5
"""


def test_minimal_config_accepted():
    cfg = parse_config(MINIMAL)
    assert cfg.dim == 64 and cfg.hi_kind is HiKind.HOPPING
    assert cfg.x_min == (10,) and cfg.T == (5.0,)
    assert cfg.edge_cutoff == 63


def test_x_min_out_of_range_names_field():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("[10]", "[64]"))
    assert any(p.startswith("x_min") for p in err.value.problems)


def test_dt_too_large_names_field():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL.replace("dt: 0.05", "dt: 2.5"))
    assert any(p.startswith("dt") for p in err.value.problems)


def test_every_problem_is_reported():
    bad = """
    dim: 8
    hi_kind: nonsense
    x_min: [8, -1]
    T: [0]
    dt: -1
    stride: 0
    colour: blue
    """
    with pytest.raises(ConfigError) as err:
        parse_config(textwrap.dedent(bad))
    fields = {p.split(":")[0] for p in err.value.problems}
    assert {"hi_kind", "x_min", "T", "dt", "stride", "colour"} <= fields


@pytest.mark.parametrize("text", ["dim: [1, 2", "", "- 1\n- 2\n"])
def test_malformed_documents(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_zero_potential_sweep():
    cfg = parse_config(SMALL.replace("potential: delta", "potential: polynomial\ncoefficients: [0]"))
    rows = run_sweep(cfg)
    assert len(rows) == 2
    for row in rows:
        assert row.deviation <= 1e-9
        assert row.bound == 0.0
        assert row.ok
        assert (row.classical_x_star, row.classical_value) == (0, 0.0)


def test_diagonal_kind_is_a_no_op():
    cfg = parse_config(SMALL.replace("hi_kind: hopping", "hi_kind: diagonal").replace("[9, 2]", "[0, 2, 9]"))
    rows = run_sweep(cfg)
    for row in rows:
        # g_I = |0>, and |<x_min|g_I>|^2 is 1 at x_min = 0 and 0 elsewhere
        assert row.success_probability == pytest.approx(1.0 if row.x_min == 0 else 0.0, abs=1e-12)


def test_polynomial_potential_uses_global_minimizer():
    cfg = parse_config(SMALL.replace("potential: delta", "potential: polynomial\ncoefficients: [9, -6, 1]"))
    rows = run_sweep(cfg)
    assert [r.x_min for r in rows] == [3, 3]
    assert all(r.classical_x_star == 3 and r.classical_value == 0.0 for r in rows)


def test_rows_sorted_and_csv_deterministic(tmp_path):
    cfg = parse_config(SMALL)
    rows = run_sweep(cfg, out=tmp_path / "a.csv")
    assert [(r.x_min, r.T) for r in rows] == [(2, 1.5), (2, 3.0), (9, 1.5), (9, 3.0)]
    run_sweep(cfg, out=tmp_path / "b.csv", workers=2)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    header = (tmp_path / "a.csv").read_text().splitlines()[0]
    assert header.split(",") == COLUMNS
    assert COLUMNS == [
        "x_min", "T", "success_probability", "deviation", "bound", "hp_gi_norm", "min_gap",
        "norm_drift", "classical_x_star", "classical_value", "tail_mass_final", "status",
    ]


def test_csv_round_trip_is_exact(tmp_path):
    rows = run_sweep(parse_config(SMALL), out=tmp_path / "s.csv")
    back = read_csv(tmp_path / "s.csv")
    assert back == rows
    for row in rows:
        assert math.isclose(row.bound, row.T * row.hp_gi_norm, rel_tol=0, abs_tol=1e-12)
        assert 0.0 <= row.success_probability <= 1.0


def test_failed_rows_are_kept_with_status():
    # an absurd per-step unitarity tolerance makes every propagation abort
    cfg = parse_config(SMALL + "tolerance: 1.0e-300\n")
    rows = run_sweep(cfg)
    assert len(rows) == 4
    assert all(r.status.startswith("error:") for r in rows)
    assert all(math.isnan(r.deviation) for r in rows)
    back = parse_csv(rows_to_csv(rows))
    assert [r.status for r in back] == [r.status for r in rows]


def test_unknown_preset_lists_available():
    with pytest.raises(ConfigError, match="tsirelson-s3"):
        preset_config("bogus")


def test_diagonal_noop_demo(tmp_path):
    report, rows, status = run_failure_demo("diagonal-noop", out=tmp_path / "d.csv")
    assert status == 0
    assert "deviation <= bound on every row: yes" in report
    assert all(r.success_probability <= 1e-20 for r in rows)
    assert (tmp_path / "d.csv").exists()


def test_cli_validate(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text(MINIMAL)
    assert main(["validate", "--config", str(good)]) == 0
    bad = tmp_path / "bad.yaml"
    bad.write_text(MINIMAL.replace("[10]", "[64]").replace("dt: 0.05", "dt: 2.5"))
    assert main(["validate", "--config", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "x_min" in err and "dt" in err


def test_cli_sweep_and_demo(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(SMALL)
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(read_csv(out)) == 4
    assert main(["demo", "--preset", "bogus", "--out", str(tmp_path / "x.csv")]) == 2
    assert "available presets" in capsys.readouterr().err
    assert main(["demo", "--preset", "diagonal-noop", "--out", str(tmp_path / "y.csv")]) == 0
    assert "classical scan found (x_min, -1) on every row: yes" in capsys.readouterr().out


def test_cli_sweep_reports_failures(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(SMALL + "tolerance: 1.0e-300\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 1
