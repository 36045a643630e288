import io
import json

import pytest

from commute_frontier.cli import run


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_limits_table_shape():
    code, out, _ = call("limits", "--input", "builtin", "--p", "0.42,0.45",
                        "--income", "30000,40000,50000,60000", "--year", "both")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("Annual Household Income")
    rows = [l for l in lines if l.startswith("Commuting limit")]
    assert len(rows) == 4
    assert rows[1].split()[-4:] == ["*", "*", "*", "*"]


def test_fit_linear_shelter():
    code, out, _ = call("fit", "--input", "builtin", "--response", "shelter_2011", "--degree", "1")
    assert code == 0
    assert "Constant  1353" in out and "-2.962d" in out
    code, out, _ = call("fit", "--response", "shelter_2011", "--degree", "1", "--output", "json")
    m = json.loads(out)["degree_1"]
    assert m["coefficients"][0] == pytest.approx(1353, abs=2)


def test_validate_empty_file(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("name,distance_km,drive_time_min,income_2011,income_2016,shelter_2011,shelter_2016\n")
    code, out, err = call("validate", "--input", str(p))
    assert code == 1
    assert "no records" in err


def test_validate_reports_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("name,distance_km,drive_time_min,income_2011,income_2016,shelter_2011,shelter_2016\n"
                 "A,-5,10,60000,60000,1000,1000\n")
    code, out, _ = call("validate", "--input", str(p), "--output", "json")
    assert code == 1
    assert json.loads(out)["errors"][0]["field"] == "distance_km"
    code, _, err = call("limits", "--input", str(p))
    assert code == 1 and "distance_km" in err


def test_env_var_input(tmp_path, monkeypatch):
    from commute_frontier import builtin_table
    p = tmp_path / "t.csv"
    p.write_text(builtin_table().to_csv())
    monkeypatch.setenv("COMMUTE_FRONTIER_INPUT", str(p))
    assert call("fit", "--response", "income_2016", "--degree", "1")[1] == \
        call("fit", "--input", "builtin", "--response", "income_2016", "--degree", "1")[1]
    monkeypatch.setenv("COMMUTE_FRONTIER_INPUT", str(tmp_path / "missing.csv"))
    assert call("fit", "--response", "income_2016")[0] == 1


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("fit",),
    ("fit", "--response", "shelter_2011", "--degree", "4"),
    ("limits", "--unknown-flag"),
    ("limits", "--output", "svg"),
    ("limits", "--p", "a,b"),
    ("frontier", "--window", "1,2,3"),
    ("calibrate", "--year", "2020"),
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_domain_errors_exit_1():
    assert call("frontier", "--p", "1.5")[0] == 1
    assert call("fit", "--response", "no_such_column")[0] == 1
    assert call("diagnose", "--coords", "/nonexistent.csv")[0] == 1


ALL_JSON = [
    ("validate",),
    ("calibrate",),
    ("drive-cost", "--distance", "10,34.6,35,156", "--year", "both"),
    ("fit", "--response", "pct_2016"),
    ("diagnose",),
    ("frontier", "--p", "0.3,0.42", "--income", "60000"),
    ("limits",),
    ("compare-years",),
    ("plot", "--figure", "5"),
]


@pytest.mark.parametrize("argv", ALL_JSON, ids=lambda a: a[0])
def test_every_subcommand_has_json(argv):
    code, out, _ = call(*argv, "--output", "json")
    assert code == 0
    json.loads(out)


BYTES = ALL_JSON + [
    ("limits", "--output", "csv"),
    ("compare-years", "--output", "csv"),
    ("plot", "--output", "csv"),
    ("plot",),
    ("plot", "--figure", "shares", "--output", "svg"),
    ("drive-cost", "--distance", "1,2,3", "--output", "csv"),
]


@pytest.mark.parametrize("argv", BYTES, ids=lambda a: " ".join(a))
def test_byte_determinism(argv):
    assert call(*argv)[1] == call(*argv)[1]


def test_diagnose_seeded_with_coords(tmp_path):
    from commute_frontier import builtin_table
    t = builtin_table()
    p = tmp_path / "coords.csv"
    p.write_text("name,x_km,y_km\n" + "".join(
        f"{n},{r.distance_km},{(i * 37) % 50}\n" for i, (n, r) in enumerate(zip(t.names, t.records))))
    args = ("diagnose", "--coords", str(p), "--seed", "7", "--permutations", "199", "--output", "json")
    a, b = call(*args)[1], call(*args)[1]
    assert a == b
    assert json.loads(a)[0]["morans_i"]["detail"].endswith("seed=7")


def test_drive_cost_overrides():
    code, out, _ = call("drive-cost", "--distance", "10", "--uncalibrated", "--fuel-price", "2.0",
                        "--output", "json")
    row = json.loads(out)[0]
    assert row["gas"] == pytest.approx(5200 / 100 * 8 * 2.0)
    assert row["tires"] == 0


def test_drive_cost_params_file(tmp_path):
    from commute_frontier.drivecost import PARAMS_2016, dump_params
    p = tmp_path / "params.json"
    p.write_text(dump_params({"2016": PARAMS_2016.with_overrides(insurance=0)}))
    code, out, _ = call("drive-cost", "--distance", "0", "--year", "2016", "--params", str(p),
                        "--output", "json")
    assert code == 0
    assert json.loads(out)[0]["insurance"] == 0
    assert call("drive-cost", "--distance", "0", "--year", "2011", "--params", str(p))[0] == 2


def test_out_file(tmp_path):
    dest = tmp_path / "fig.svg"
    code, out, _ = call("plot", "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().startswith("<?xml")


def test_compare_years_deltas_recompute():
    code, out, _ = call("compare-years", "--output", "json")
    for row in json.loads(out):
        if row["delta"] is not None:
            assert row["delta"] == row["2016"] - row["2011"]
