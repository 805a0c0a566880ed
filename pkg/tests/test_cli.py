"""CLI subcommands, report schema, and exit codes."""

import csv
import json

import pytest

from multisym.cli import main

REPORT_KEYS = {"command", "example", "seed", "checks", "artifacts"}


def run(tmp_path, *argv):
    code = main(list(argv) + ["--out", str(tmp_path), "--no-plot"])
    report_path = tmp_path / "report.json"
    report = json.loads(report_path.read_text()) if report_path.exists() else None
    return code, report


def test_validate_ok(tmp_path, capsys):
    code, report = run(tmp_path, "validate", "schwarz", "--samples", "8")
    assert code == 0
    assert REPORT_KEYS <= set(report)
    assert report["command"] == "validate"
    assert report["seed"] == 42
    for check in report["checks"]:
        assert {"name", "residual", "tol", "pass"} <= set(check)
        assert check["pass"]
    # the report is echoed on stdout
    assert json.loads(capsys.readouterr().out)["example"] == "schwarz"


def test_validate_corrupt_theta_fails(tmp_path):
    code, report = run(tmp_path, "validate", "schwarz", "--samples", "8",
                       "--corrupt-theta")
    assert code == 1
    assert any(not c["pass"] for c in report["checks"])


def test_validate_corrupt_theta_wrong_example(tmp_path, capsys):
    code, _ = run(tmp_path, "validate", "dqho", "--corrupt-theta")
    assert code == 2


def test_unknown_example_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["validate", "not-an-example"])
    assert err.value.code == 2


def test_custom_seed_echoed(tmp_path):
    code, report = run(tmp_path, "validate", "dbh", "--samples", "5",
                       "--seed", "7")
    assert code == 0
    assert report["seed"] == 7


def test_reduce_ok(tmp_path):
    code, report = run(tmp_path, "reduce", "control5", "--samples", "5")
    assert code == 0
    names = [c["name"] for c in report["checks"]]
    assert any(n.startswith("y45/") for n in names)


def test_reduce_unknown_scheme(tmp_path):
    code, _ = run(tmp_path, "reduce", "schwarz", "--scheme", "nope")
    assert code == 2


def test_reduce_without_schemes(tmp_path):
    code, _ = run(tmp_path, "reduce", "dbh")
    assert code == 2


def test_integrate_writes_csv(tmp_path):
    code, report = run(tmp_path, "integrate", "schwarz",
                       "--x0", "0,1,1", "--tmax", "2", "--dt-out", "0.1",
                       "--invariants")
    assert code == 0
    assert not report["exited"]
    csv_path = tmp_path / "trajectory_schwarz.csv"
    rows = list(csv.reader(open(csv_path)))
    assert rows[0] == ["t", "x1", "x2", "x3", "inv_h"]
    assert len(rows) == 22
    drift = [c for c in report["checks"] if c["name"] == "invariant_drift_h"]
    assert drift and drift[0]["pass"]


def test_integrate_domain_exit(tmp_path):
    coeffs = tmp_path / "coeffs.json"
    coeffs.write_text(json.dumps(
        {"b": [{"type": "constant", "c": 0.0},
               {"type": "constant", "c": 0.0},
               {"type": "constant", "c": -1.0}]}))
    code, report = run(tmp_path, "integrate", "schwarz",
                       "--x0", "0,0.3,2", "--tmax", "5",
                       "--coeffs", str(coeffs))
    assert code == 3
    assert report["exited"]
    assert report["exit_time"] == pytest.approx(4.896, abs=1e-2)
    # partial trajectory still written
    rows = list(csv.reader(open(tmp_path / "trajectory_schwarz.csv")))
    assert len(rows) > 10


def test_integrate_bad_coeffs_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(tmp_path, "integrate", "schwarz", "--coeffs", str(bad))
    assert code == 2


def test_reconstruct_r8(tmp_path):
    code, report = run(tmp_path, "reconstruct", "r8_volume")
    assert code == 0
    names = {c["name"] for c in report["checks"]}
    assert {"single_annihilator_dim", "joint_annihilator_dim",
            "form_reconstruction", "nondegeneracy_order"} <= names


def test_reconstruct_osc_spin(tmp_path):
    code, report = run(tmp_path, "reconstruct", "osc_spin")
    assert code == 0
    names = {c["name"] for c in report["checks"]}
    assert {"kernel_intersection_dim", "field_reconstruction"} <= names


def test_reconstruct_unsupported(tmp_path):
    code, _ = run(tmp_path, "reconstruct", "schwarz")
    assert code == 2


def test_equilibria_schwarz(tmp_path):
    code, report = run(tmp_path, "equilibria", "schwarz")
    assert code == 0
    assert len(report["equilibria"]) == 2
    for entry in report["equilibria"]:
        assert entry["converged"]
    match = [c for c in report["checks"] if c["name"] == "eigenvalue_match"]
    assert match and match[0]["pass"]


def test_equilibria_custom_guess(tmp_path):
    code, report = run(tmp_path, "equilibria", "schwarz", "--guess", "0.7,1.2")
    assert code == 0
    assert len(report["equilibria"]) == 1


def test_equilibria_unsupported(tmp_path):
    code, _ = run(tmp_path, "equilibria", "control5")
    assert code == 2


def test_figures_rendered_by_default(tmp_path):
    code = main(["validate", "dbh", "--samples", "5", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "validate_dbh.png").exists()
