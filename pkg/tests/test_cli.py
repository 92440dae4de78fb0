import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cbkdv.cli import run

REF_FLAGS = ["--alpha", "0.05", "--beta", "-0.15", "--mu", "0.5", "--s", "1",
              "--eps1", "1", "--eps2", "-1", "--eps3", "-1"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_solve_json():
    code, out, _ = call("solve", *REF_FLAGS)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    c = doc["coefficients"]
    assert c["B0"] == pytest.approx(0.693713, abs=1e-6)
    assert c["D1"]["re"] == 0 and c["D1"]["im"] == pytest.approx(0.693713, abs=1e-6)
    assert c["v"] == pytest.approx(-0.0615619, abs=1e-6)
    assert "metadata" not in doc


def test_solve_csv_and_stamp():
    code, out, _ = call("solve", *REF_FLAGS, "--format", "csv")
    assert code == 0
    vals = {r["name"]: float(r["value"]) for r in rows_of(out)}
    assert vals["C1"] == pytest.approx(0.219371, abs=1e-6)
    _, out, _ = call("solve", *REF_FLAGS, "--stamp")
    assert "created" in json.loads(out)["metadata"]


def test_solve_is_deterministic():
    assert call("solve", *REF_FLAGS)[1] == call("solve", *REF_FLAGS)[1]


def test_verify_passes():
    code, out, _ = call("verify", *REF_FLAGS)
    rep = json.loads(out)["report"]
    assert code == 0 and rep["passed"]
    assert rep["ode_residual"]["max_relative"] < 1e-10
    assert rep["ode_residual"]["points"] == 201


def test_config_round_trip(tmp_path):
    cfg = {"params": {"alpha": 0.05, "beta": -0.15, "mu": 0.5, "s": 1.0},
           "signs": {"eps1": 1, "eps2": -1, "eps3": -1}, "x0": 0.0}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out_path = tmp_path / "solve.json"
    assert call("solve", "--config", str(path), "--out", str(out_path))[0] == 0
    from_cfg = json.loads(out_path.read_text())
    from_flags = json.loads(call("solve", *REF_FLAGS)[1])
    assert from_cfg == from_flags
    # the emitted header is itself a valid config
    header = {k: from_cfg[k] for k in ("params", "signs", "x0")}
    path.write_text(json.dumps(header))
    code, out, _ = call("verify", "--config", str(path))
    assert code == 0 and json.loads(out)["report"]["passed"]
    # flags override the file
    out = json.loads(call("solve", "--config", str(path), "--mu", "0.4")[1])
    assert out["params"]["mu"] == 0.4


def test_profile_shape():
    code, out, _ = call("profile", *REF_FLAGS, "--times", "0,2.5")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 2 * 241
    v = -0.061561882389356615
    for t in (0.0, 2.5):
        sub = [r for r in rows if float(r["t"]) == t]
        x = np.array([float(r["x"]) for r in sub])
        re = np.array([float(r["re_u"]) for r in sub])
        im = np.array([float(r["im_u"]) for r in sub])
        assert np.all(np.diff(re) < 0)
        assert abs(x[np.argmax(im)] - v * t) <= 0.5


def test_sweep_csv_and_json():
    code, out, _ = call("sweep", *REF_FLAGS, "--vary", "alpha", "--range", "0.01,0.3",
                        "--count", "5", "--format", "csv")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 5 and rows[0]["varying_param"] == "alpha"
    assert set(rows[0]) == {"varying_param", "value", "v", "dv_dalpha", "dv_dmu",
                            "dv_dabsbeta", "dv_ds"}
    code, out, _ = call("sweep", *REF_FLAGS, "--vary", "mu", "--range", "0,1")
    doc = json.loads(out)
    assert code == 0 and doc["monotonicity"]["passed"]
    assert len(doc["rows"]) == 50


def test_simulate_csv_and_metrics(tmp_path):
    out_path = tmp_path / "run.csv"
    code, _, err = call("simulate", *REF_FLAGS, "--grid=-40,40", "--dx", "0.4",
                        "--t-end", "0.2", "--reverse", "--format", "csv", "--out", str(out_path))
    assert code == 0, err
    rows = rows_of(out_path.read_text())
    assert len(rows) == 2 * 201
    metrics = rows_of((tmp_path / "run_metrics.csv").read_text())
    assert [float(m["t"]) for m in metrics] == [0.0, -0.2]
    assert float(metrics[-1]["l_inf"]) < 1e-2


def test_simulate_json():
    code, out, _ = call("simulate", *REF_FLAGS, "--grid=-40,40", "--dx", "0.4",
                        "--t-end", "0.1", "--reverse")
    doc = json.loads(out)
    assert code == 0 and doc["time"]["reverse"] and doc["grid"]["num_points"] == 201


def test_system_output():
    code, out, _ = call("system", *REF_FLAGS, "--multistart", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["system"]["relative"] < 1e-10
    assert doc["comparison"]["scale_factor"] == 3.0
    assert doc["multistart"]["starts"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", *REF_FLAGS[:2], "--beta", "0.15", *REF_FLAGS[4:]],
        ["solve", *REF_FLAGS[:-2], "--eps3", "1"],
        ["solve", "--alpha", "0.05"],
        ["frobnicate"],
        ["sweep", *REF_FLAGS, "--vary", "alpha", "--range", "-1,1"],
        ["sweep", *REF_FLAGS],
        ["simulate", *REF_FLAGS, "--grid=-5,5", "--t-end", "0.1"],
    ],
)
def test_validation_exit_code(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert set(json.loads(err)) == {"error", "message"}


def test_numerical_failure_exit_code():
    code, _, err = call("simulate", *REF_FLAGS, "--grid=-40,40", "--dx", "0.1", "--t-end", "2")
    assert code == 2
    assert json.loads(err)["error"] == "blow_up"


def test_io_exit_code(tmp_path):
    code, _, err = call("solve", *REF_FLAGS, "--out", str(tmp_path / "missing" / "x.json"))
    assert code == 3 and json.loads(err)["error"] == "io"
    code, _, _ = call("solve", "--config", str(tmp_path / "nope.json"))
    assert code == 3


def test_bad_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    assert call("solve", "--config", str(path))[0] == 1
    path.write_text(json.dumps({"params": {"alpha": 1, "beta": -1, "mu": 1, "s": 1, "nu": 2},
                                "signs": {"eps1": 1, "eps2": 1, "eps3": 1}}))
    assert call("solve", "--config", str(path))[0] == 1


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "cbkdv", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("solve", "verify", "simulate", "system", "sweep", "profile"):
        assert cmd in res.stdout
