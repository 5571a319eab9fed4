import json
import subprocess
import sys

import pytest

from nilgeo import catalog
from nilgeo.cli import main
from nilgeo.fileformat import dumps


@pytest.fixture
def paper6_file(tmp_path):
    path = tmp_path / "paper6.json"
    path.write_text(dumps(catalog.paper6_e()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_geodesic_unique(capsys, paper6_file):
    code, out, _ = run(capsys, "geodesic", paper6_file, "--vector", "0,1,1,0,1,0",
                       "--presentation", "iso", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["status"] == "unique"
    assert rep["result"]["xi"] == ["0", "0", "-2", "1/2"] and rep["result"]["k"] == "0"
    assert rep["result"]["lemma_check"] is True


def test_expect_turns_negative_into_exit_1(capsys, paper6_file):
    code, _, err = run(capsys, "geodesic", paper6_file, "--vector", "0,1,0,0,1,-1", "--expect", "geodesic")
    assert code == 1 and "expected geodesic" in err
    code, _, _ = run(capsys, "geodesic", paper6_file, "--vector", "0,1,0,0,1,-1", "--expect", "not_geodesic")
    assert code == 0


def test_trivial_presentation(capsys):
    code, out, _ = run(capsys, "geodesic", "catalog:paper6_X", "--vector", "1,0,0,0,0,1",
                       "--presentation", "trivial", "--json")
    assert code == 0 and json.loads(out)["result"]["status"] == "not_geodesic"


def test_classify_expect(capsys, paper6_file):
    code, out, _ = run(capsys, "classify", paper6_file, "--seed", "7", "--samples", "200",
                       "--null-samples", "100", "--expect", "AlmostGO,NotNGO")
    assert code == 0 and "AlmostGO" in out
    code, _, _ = run(capsys, "classify", paper6_file, "--seed", "7", "--samples", "200",
                     "--null-samples", "100", "--expect", "GO")
    assert code == 1


def test_garbage_exits_2(capsys, tmp_path):
    bad = tmp_path / "garbage.json"
    bad.write_text("{ not json")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "line 1" in err


def test_schema_error_names_the_field(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "dim": 2, "basis": ["a", "b"],
                               "brackets": [{"i": 1, "j": 0, "coeffs": {}}], "metric": []}))
    code, _, err = run(capsys, "info", str(bad))
    assert code == 2 and "$.brackets[0]" in err


def test_invalid_algebra_is_a_negative_for_validate(capsys, tmp_path):
    f = tmp_path / "affine.json"
    f.write_text(json.dumps({"name": "aff", "dim": 2, "basis": ["a", "b"],
                             "brackets": [{"i": 0, "j": 1, "coeffs": {"1": "1"}}],
                             "metric": [{"i": 0, "j": 0, "value": "1"}, {"i": 1, "j": 1, "value": "1"}]}))
    assert run(capsys, "validate", str(f))[0] == 1
    assert run(capsys, "info", str(f))[0] == 2


def test_degenerate_center_is_an_input_error(capsys):
    code, _, err = run(capsys, "geodesic", "catalog:heis3_lorentz_degenerate", "--vector", "1,0,0")
    assert code == 2 and "degenerate" in err


def test_bad_vector_length(capsys):
    assert run(capsys, "geodesic", "catalog:paper6", "--vector", "1,2")[0] == 2


def test_info_and_derivations(capsys):
    code, out, _ = run(capsys, "info", "catalog:paper6_X", "--json")
    res = json.loads(out)["result"]
    assert code == 0 and res["pseudo_H_type"] is True and res["nilpotency_class"] == 2
    code, out, _ = run(capsys, "derivations", "catalog:paper6_e", "--json")
    res = json.loads(out)["result"]
    assert res["dera_dim"] == 4 and res["dera_labels"] == ["T", "H", "E", "F"]
    code, out, _ = run(capsys, "info", "catalog:cotangent_h3")
    assert code == 0 and "ad-invariant metric: yes" in out


def test_flow_compare(capsys, tmp_path):
    prefix = str(tmp_path / "w")
    code, out, _ = run(capsys, "flow", "compare", "catalog:paper6_e", "--vector", "1,1,0,0,1,1",
                       "--dt", "1e-3", "--csv", prefix, "--json")
    res = json.loads(out)["result"]
    assert code == 0 and res["k"] == "-1" and res["within_tolerance"]
    assert (tmp_path / "w.orbit.csv").exists() and (tmp_path / "w.geodesic.csv").exists()
    code, _, _ = run(capsys, "flow", "compare", "catalog:paper6_e", "--vector", "1,1,0,0,1,1",
                     "--dt", "0.25", "--tol", "1e-12")
    assert code == 1


def test_limit_scan(capsys):
    code, out, _ = run(capsys, "limit-scan", "catalog:paper6_e", "--vector", "0,1,0,1,1,-1",
                       "--t", "0.01,0.001", "--json")
    scan = json.loads(out)["result"]["scan"]
    assert code == 0 and scan[0]["xi3"] > 1e4 and scan[1]["xi3"] > 1e6
    assert run(capsys, "limit-scan", "catalog:heis3_riem", "--vector", "1,0,0")[0] == 2


def test_catalog_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "paper6_X")
    assert code == 0 and out == dumps(catalog.paper6_X())
    code, out, _ = run(capsys, "catalog", "--json")
    assert [a["name"] for a in json.loads(out)] == catalog.names()
    run(capsys, "catalog", "--out", str(tmp_path / "cat"))
    assert sorted(p.name for p in (tmp_path / "cat").iterdir()) == sorted(f"{n}.json" for n in catalog.names())
    code, out, _ = run(capsys, "catalog", "--automorphisms", "--tau", "2,1,1,1", "--json")
    assert set(json.loads(out)["matrices"]) == {"A_tau", "B1", "B2", "B3", "X_to_e"}
    assert run(capsys, "catalog", "nope")[0] == 2


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "nilgeo", "geodesic"], capture_output=True)
    assert proc.returncode == 2


def test_console_module_runs(paper6_file):
    proc = subprocess.run([sys.executable, "-m", "nilgeo", "geodesic", paper6_file,
                           "--vector", "0,1,1,0,1,0"], capture_output=True, text=True)
    assert proc.returncode == 0 and "unique" in proc.stdout
