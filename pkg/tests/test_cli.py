import json

import pytest

from latticeprop import cli, kernel


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernel_identity(capsys):
    code, out, _ = run(capsys, "kernel", "--n", "0", "--m", "0", "--t", "0")
    assert code == 0 and out.strip() == "1 0"


def test_kernel_matches_library(capsys):
    code, out, _ = run(capsys, "kernel", "--n", "2", "--m", "0", "--t", "1")
    re, im = map(float, out.split())
    assert complex(re, im) == pytest.approx(kernel.k1d(2, 0, 1.0), abs=1e-14)


def test_kernel_helmholtz_mode(capsys):
    code, out, _ = run(capsys, "kernel", "--n", "1", "--m", "0", "--z", "2", "--E", "9")
    assert code == 0 and len(out.split()) == 2


def test_kernel_missing_time_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["kernel", "--n", "0", "--m", "0"])
    assert info.value.code == 2


def test_helmholtz_forms(capsys):
    values = []
    for form in ("closed", "quadrature"):
        code, out, _ = run(capsys, "helmholtz", "--dx", "0.7", "--z", "2", "--E", "1", "--form", form)
        assert code == 0
        values.append(complex(*map(float, out.split())))
    assert abs(values[0] - values[1]) < 1e-10
    code, _, err = run(capsys, "helmholtz", "--dx", "0", "--z", "0.5", "--E", "1", "--form", "paraxial")
    assert code == 3 and "compute error" in err


def test_run_bundled_and_config_error(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "kernel_offset_source", "--out", str(tmp_path))
    assert code == 0 and (tmp_path / "kernel_offset_source.csv").exists()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "point_source", "grid": {"n_range": [], "t_range": [0, 1], "resolution": 2}}))
    code, _, err = run(capsys, "run", str(bad))
    assert code == 2 and "grid.n_range" in err
    code, _, _ = run(capsys, "run", "no_such_scenario")
    assert code == 2


def test_verify_report(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "kernel", "--seed", "7", "--out", str(report_path))
    assert code == 0 and "checks passed" in out
    report = json.loads(report_path.read_text())
    assert report["seed"] == 7 and report["passed"] and report["n_checks"] >= 5


def test_verify_detects_fault(capsys):
    code, out, _ = run(capsys, "verify", "specfun", "--inject-fault")
    assert code == 1 and "FAIL" in out


def test_scenarios_listing(capsys):
    code, out, _ = run(capsys, "scenarios")
    assert code == 0 and "point_source_density" in out.split()
