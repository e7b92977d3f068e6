from __future__ import annotations

import csv
import io
import json

import pytest
from click.testing import CliRunner

from mapenum.cli import main, parse_range


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), catch_exceptions=False, **kw)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("2,4") == [2, 4]
    assert parse_range(None, (2, 3)) == [2, 3]


def test_count_oracle():
    res = run("count", "--route", "oracle", "--valences", "4", "--connected")
    assert res.exit_code == 0
    got = {r["genus"]: r["labeled_count"] for r in rows(res.output)}
    assert got == {"0": "2", "1": "1"}


def test_count_g5():
    res = run("count", "--route", "g5-closed-form", "--j", "1..12")
    vals = [int(r["labeled_count"]) for r in rows(res.output)]
    assert vals[:8] == [0] * 8 and all(v > 0 for v in vals[8:])


def test_count_cross_check_equal():
    res = run("count", "--route", "trivalent", "--route", "oracle", "--genus", "0", "--j", "2", "--nu", "3/2")
    assert res.exit_code == 0
    (row,) = rows(res.output)
    assert row["cross_check"] == "equal" and row["labeled_count"] == "12"


def test_count_seed_routes(tmp_path):
    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps({"genus": 2, "nu": 2, "C": "0", "q0": ["1", "-2/3", "5", "1/7"]}))
    res = run("count", "--route", "hypergeom", "--route", "recurrence", "--route", "band",
              "--seed", str(seed), "--j", "1..6", "--format", "json")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert all(r["cross_check"] == "equal" for r in data)


def test_count_errors():
    res = run("count", "--route", "band", "--j", "3")
    assert res.exit_code == 2 and "--seed" in res.output
    res = run("count", "--route", "oracle", "--valences", "4,4,4,4,4,4,4")
    assert res.exit_code == 4


def test_series_z0():
    res = run("series", "--kind", "z0", "--order", "2")
    assert [r["coefficient"] for r in rows(res.output)] == ["1", "-12", "288"]


def test_orbit_planar():
    res = run("orbit", "--system", "planar-restricted", "--s", "1/3", "--f", "2/3", "--steps", "3")
    r = rows(res.output)
    assert (r[0]["s"], r[0]["f"]) == (r[3]["s"], r[3]["f"])


def test_orbit_pole_reported():
    res = CliRunner().invoke(
        main, ["orbit", "--system", "dp1", "--x", "1", "--y", "1", "--n", "3", "--steps", "4"])
    assert res.exit_code == 0 and "singularity" in res.stderr


def test_orbit_freud_seed():
    res = run("orbit", "--system", "dp1", "--steps", "2", "--precision", "40")
    assert rows(res.output)[0]["x"].startswith("0.4679")
    res = run("orbit", "--system", "mixed", "--t3", "1", "--t4", "1", "--steps", "1", "--precision", "40")
    first = rows(res.output)[0]
    assert [round(float(first[k]), 4) for k in "xyzw"] == [0.3933, 0.3210, -0.0791, -0.0803]


def test_orbit_precision_env():
    res = run("orbit", "--system", "dp1", "--steps", "1", env={"MAPENUM_PRECISION": "30"})
    assert len(rows(res.output)[0]["x"]) < 40
    assert run("orbit", "--system", "dp1", "--precision", "8").exit_code == 2


def test_orbit_with_cm(tmp_path):
    cm_file = tmp_path / "cm.json"
    cm_file.write_text(run("cm", "--system", "dp1", "--order", "6").output)
    res = run("orbit", "--system", "dp1", "--steps", "60", "--precision", "60", "--cm", str(cm_file))
    d = [float(r["cm_distance"]) for r in rows(res.output)]
    assert d[-1] < d[50]


def test_cm_and_invert():
    res = run("cm", "--system", "dp1-sfu", "--order", "4")
    data = json.loads(res.output)
    assert data["series"]["s"][2:] == ["-gamma/6", "-gamma/36", "-gamma**2/72 - gamma/216"]
    res = run("cm", "--system", "dp1", "--invert", "2", "--precision", "20")
    r = rows(res.output)
    assert r[0]["k"] == "-1" and r[0]["c_k"].startswith("0.57735")


@pytest.mark.parametrize("args", [
    ("--suite", "bernoulli", "--gmax", "40"),
    ("--suite", "commutation", "--g", "2..4", "--jmax", "5"),
    ("--suite", "cm-match", "--system", "dp1", "--order", "4"),
    ("--suite", "conjecture1", "--lmax", "3", "--gmax", "3", "--jmax", "3"),
])
def test_verify_pass(args):
    res = run("verify", *args)
    assert res.exit_code == 0 and json.loads(res.output)["passed"]


def test_verify_interlacing_failure_exit(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps([["1", "0"], ["1", "0", "1"]]))
    res = run("verify", "--suite", "interlacing", "--polys", str(f))
    assert res.exit_code == 3


def test_ratios(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("j,count\n1,2\n2,9\n")
    b.write_text("j,count\n1,1\n2,3\n")
    r = rows(run("ratios", "--counts", str(a), "--reference", str(b)).output)
    assert [x["ratio"] for x in r] == ["2", "3"]
