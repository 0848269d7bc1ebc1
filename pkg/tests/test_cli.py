import csv
import io
import json

import numpy as np
import pytest

from pkmoduli.cli import main, parse_complex
from pkmoduli.config import LabConfig, load_config, tolerance_scale
from pkmoduli.verify import CHECKS, VerificationReport, run_verification

FAST = ["--samples", "5", "--flow-steps", "2000"]
SUBSET = ["kahler.det", "kahler.closedness", "kahler.compatibility", "dynamics.xh2", "quartic.codazzi_holomorphic"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text, value",
    [("0+1i", 1j), ("1-2i", 1 - 2j), ("i", 1j), ("-i", -1j), ("2.5", 2.5), ("3i", 3j), ("1+1j", 1 + 1j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(Exception):
        parse_complex("one")


def test_eval_at_origin(capsys):
    code, out, _ = run(capsys, "eval", "--z", "0+1i", "--w", "0")
    assert code == 0
    d = json.loads(out)
    assert d["metric"] == np.diag([1.0, 1.0, -1.0, -1.0]).tolist()
    assert d["signature"] == [2, 2]
    assert d["H1"] == 0.0 and d["H2"] == 0.0
    assert d["det"] == pytest.approx(d["det_closed_form"])
    assert set(d) >= {"metric", "omega", "complex_structure", "det", "signature", "H1", "H2", "schema_version"}


def test_eval_sqrt_with_parameter(capsys):
    code, out, _ = run(capsys, "eval", "--z", "0.5+2i", "--w", "0.3-0.1i", "--f", "sqrt", "--f-param", "2")
    assert code == 0
    d = json.loads(out)
    assert d["f"] == {"name": "sqrt", "params": [2.0]}
    assert d["det"] == pytest.approx(d["det_closed_form"], rel=1e-10)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--z", "1-2i"],
        ["eval", "--f", "linear", "--f-param", "-1"],
        ["flow", "--steps", "0"],
        ["flow", "--t-end", "-1"],
        ["barbot", "--nx", "0"],
        ["verify", "--only", "no.such.check"],
        ["eval", "--config", "/nonexistent/config.json"],
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize("argv", [["eval", "--perturb", "nothing", "0.1"], ["eval", "--z", "xyz"], ["frobnicate"]])
def test_argparse_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_verify_passes_and_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code_a, _, err = run(capsys, "verify", *FAST, "--seed", "7", "--out", str(a))
    code_b, _, _ = run(capsys, "verify", *FAST, "--seed", "7", "--out", str(b), "--quiet")
    assert code_a == 0 and code_b == 0
    assert a.read_bytes() == b.read_bytes()
    assert f"{len(CHECKS)}/{len(CHECKS)} checks passed" in err
    report = json.loads(a.read_text())
    assert report["pass"] is True
    assert report["schema_version"] == 1
    assert any("e^{-3t}" in n for n in report["notes"])
    assert len(report["records"]) == len(CHECKS)
    rec = report["records"][0]
    assert set(rec) == {"check_id", "anchor", "samples", "max_residual", "tolerance", "comparison", "pass"}


def test_verify_seed_changes_report(capsys):
    _, a, _ = run(capsys, "verify", "--only", *SUBSET, "--seed", "1", "--samples", "3", "--quiet")
    _, b, _ = run(capsys, "verify", "--only", *SUBSET, "--seed", "2", "--samples", "3", "--quiet")
    assert a != b


@pytest.mark.parametrize("eps", ["1e-3", "0.05"])
def test_fault_injection_fails(capsys, eps):
    code, out, _ = run(capsys, "verify", "--samples", "5", "--perturb", "metric", eps, "--quiet")
    assert code == 1
    report = json.loads(out)
    failed = {r["check_id"] for r in report["records"] if not r["pass"]}
    assert {"kahler.det", "kahler.closedness", "dynamics.xh2", "kahler.intrinsic_metric"} <= failed
    assert any("fault injection" in n for n in report["notes"])


def test_tolerance_scale_env(capsys, monkeypatch):
    monkeypatch.setenv("PKMODULI_TOL_SCALE", "1e-12")
    code, out, _ = run(capsys, "verify", "--only", "kahler.closedness", "--samples", "3", "--quiet")
    assert code == 1
    assert json.loads(out)["records"][0]["tolerance"] == pytest.approx(1e-18)
    monkeypatch.setenv("PKMODULI_TOL_SCALE", "10")
    code, out, _ = run(capsys, "verify", "--only", "kahler.closedness", "--samples", "3", "--quiet")
    assert code == 0
    assert json.loads(out)["records"][0]["tolerance"] == pytest.approx(1e-5)


@pytest.mark.parametrize("raw", ["0", "-1", "abc"])
def test_tolerance_scale_rejects(monkeypatch, raw):
    monkeypatch.setenv("PKMODULI_TOL_SCALE", raw)
    with pytest.raises(ValueError):
        tolerance_scale()


def test_config_precedence(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"f_name": "sqrt", "seed": 5, "sample_count": 7, "tolerances": {"kahler.det": 1e-3}}))
    cfg = load_config(str(path))
    assert (cfg.f_name, cfg.seed, cfg.sample_count) == ("sqrt", 5, 7)
    cfg = load_config(str(path), seed=9, f_name=None)
    assert (cfg.f_name, cfg.seed) == ("sqrt", 9)
    assert load_config() == LabConfig()


def test_config_tolerance_override_reaches_report(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"tolerances": {"kahler.det": 1e-30}, "sample_count": 3}))
    report = run_verification(load_config(str(path)), only=["kahler.det"])
    assert report.records[0].tolerance == 1e-30
    assert not report.passed


@pytest.mark.parametrize(
    "data",
    [{"bogus": 1}, {"f_name": "cubic"}, {"sample_count": 0}, {"tolerances": {"x": -1}}, {"perturb": ["omega", 1]}],
)
def test_config_rejects(tmp_path, data):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError):
        load_config(str(path))


def test_cli_config_file(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"f_name": "sqrt", "f_params": [0.5]}))
    _, out, _ = run(capsys, "eval", "--config", str(path))
    assert json.loads(out)["f"] == {"name": "sqrt", "params": [0.5]}
    _, out, _ = run(capsys, "eval", "--config", str(path), "--f", "linear", "--f-param")
    assert json.loads(out)["f"]["name"] == "linear"


def test_report_summary_lists_failures():
    report = VerificationReport(1, {})
    assert report.failed() == []
    assert "0/0" in report.summary()


@pytest.mark.parametrize("which, end", [("H1", (0.0, 1.0, np.cos(1.0), np.sin(1.0))), ("H2", (0.0, np.e**2, np.e**-4, 0.0))])
def test_flow_csv(capsys, which, end):
    code, out, _ = run(capsys, "flow", "--which", which, "--z", "i", "--w", "1", "--t-end", "1", "--steps", "500")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "x", "y", "u", "v", "H1", "H2"]
    assert len(rows) == 502
    last = [float(v) for v in rows[-1]]
    assert last[0] == 1.0
    assert last[1:5] == pytest.approx(end, rel=1e-6, abs=1e-9)
    h = np.array([[float(v) for v in r[5:]] for r in rows[1:]])
    assert np.max(np.abs(h - h[0])) < 1e-8


def test_flow_is_byte_identical(capsys):
    _, a, _ = run(capsys, "flow", "--w", "0.5+0.5i", "--steps", "50")
    _, b, _ = run(capsys, "flow", "--w", "0.5+0.5i", "--steps", "50")
    assert a == b


def test_flow_failure_exit_1(capsys):
    code, _, err = run(capsys, "flow", "--which", "H2", "--z", "i", "--w", "1", "--t-end", "1e100", "--steps", "1")
    assert code == 1
    assert "integration failed" in err


def test_barbot(capsys, tmp_path):
    out_path = tmp_path / "b.json"
    code, _, _ = run(capsys, "barbot", "--out", str(out_path))
    assert code == 0
    d = json.loads(out_path.read_text())
    assert d["grid"] == {"nx": 5, "ny": 5}
    assert len(d["points"]) == 25
    assert d["quartic"]["value"] == pytest.approx([-1.0, 0.0], abs=1e-8)
    assert d["quartic"]["spread"] < 1e-8
    res = d["max_residuals"]
    assert max(res["eta"], res["flatness"], res["maximality"]) < 1e-10
    assert max(res["II_norm"], res["gauss"]) < 1e-8
