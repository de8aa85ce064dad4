import json

import pytest

from twdirac.cli import run


def test_algebra_selftest(capsys):
    assert run(["algebra-selftest", "--tol", "1e-12"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True


def test_verify_exact(tmp_path):
    out = tmp_path / "r.json"
    code = run(["verify", "--equation", "traveling-dirac", "--family", "planewave",
                "--beta", "0,0,0.1", "--p", "0,0,0.05", "--m", "1", "--mode", "exact",
                "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["relative"] <= 1e-10


def test_verify_first_order_fails_tolerance(tmp_path):
    code = run(["verify", "--equation", "traveling-dirac", "--beta", "0,0,0.1",
                "--mode", "first-order", "--out", str(tmp_path / "r.json")])
    assert code == 1


def test_beta_validation_message(capsys):
    assert run(["verify", "--beta", "0,0,1.5"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and "beta magnitude must be < 1" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--bogus"],
    ["verify", "--beta", "1,2"],
    ["verify", "--m", "-1"],
    ["verify", "--equation", "nonsense"],
    ["frobnicate"],
    ["sweep", "--equation", "traveling_dirac", "--points", "2"],
    ["evolve", "--n", "1000", "--out", "x.csv"],
    ["report", "--in", "/nonexistent/dir"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_sweep_pass_and_fail(tmp_path):
    assert run(["sweep", "--equation", "nr_dirac", "--out", str(tmp_path / "s.json")]) == 0
    assert run(["sweep", "--equation", "weyl_traveling_l", "--out", str(tmp_path / "w.json")]) == 1


def test_evolve_writes_csv(tmp_path):
    out = tmp_path / "e.csv"
    assert run(["evolve", "--n", "256", "--box", "100", "--steps", "10", "--out", str(out)]) == 0
    assert out.read_text().startswith("t,norm_traveling,")


def test_evolve_guard(tmp_path):
    code = run(["evolve", "--n", "1024", "--box", "20", "--beta", "0,0,0.3",
                "--out", str(tmp_path / "e.csv")])
    assert code == 2


def test_em_check(tmp_path):
    assert run(["em-check", "--potential", "plane", "--out", str(tmp_path / "a.json")]) == 0
    assert run(["em-check", "--potential", "linear", "--out", str(tmp_path / "b.json")]) == 1


def test_bw_verify(capsys):
    assert run(["bw-verify", "--spin", "1", "--beta", "0.1,0,0.1"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True
    assert run(["bw-verify", "--spin", "0.5"]) == 0


def test_report_roundtrip(tmp_path):
    d = tmp_path / "reports"
    d.mkdir()
    run(["verify", "--out", str(d / "a.json")])
    run(["em-check", "--potential", "linear", "--out", str(d / "b.json")])
    assert run(["report", "--in", str(d), "--out", str(tmp_path / "s.json")]) == 1
    assert json.loads((tmp_path / "s.json").read_text())["count"] == 2


def test_outputs_are_deterministic(tmp_path):
    for name in ("a", "b"):
        run(["sweep", "--equation", "small_component", "--out", str(tmp_path / f"{name}.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
