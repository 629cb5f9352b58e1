import json
from fractions import Fraction as F
from types import SimpleNamespace

import pytest

import rigasym.mellin
from rigasym import cli
from rigasym.case_study.exact import SweepReport


def test_verify_small_ok(tmp_path, capsys):
    path = tmp_path / "s.csv"
    assert cli.main(["verify-small", "--n-min", "5", "--n-max", "400", "--csv", str(path)]) == cli.EX_OK
    out = capsys.readouterr().out
    assert "0 violations" in out and "monotonicity to 200: ok" in out
    lines = path.read_text().splitlines()
    assert lines[0] == "n,upper_bound,method" and len(lines) == 397


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-small", "--n-max", "ten"])
    assert exc.value.code == cli.EX_USAGE
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == cli.EX_USAGE
    assert cli.main(["verify-small", "--n-min", "3", "--n-max", "10"]) == cli.EX_USAGE
    assert cli.main(["asymptotic-report", "--cutoff-R", "8"]) == cli.EX_USAGE
    assert cli.main(["asymptotic-report", "--alpha", "half"]) == cli.EX_USAGE


def _fake_sweep(failures=(), inconclusive=()):
    def sweep(n_min, n_max, exact_fallback=True):
        return SweepReport(rows=[(n_min, "-1.0", "interval")], failures=list(failures), inconclusive=list(inconclusive))

    return sweep


def test_violation_and_inconclusive_codes(monkeypatch):
    monkeypatch.setattr(cli, "F_sign_sweep", _fake_sweep(failures=[7]))
    assert cli.main(["verify-small", "--n-max", "20"]) == cli.EX_VIOLATION
    monkeypatch.setattr(cli, "F_sign_sweep", _fake_sweep(inconclusive=[7]))
    assert cli.main(["verify-small", "--n-max", "20", "--no-exact-fallback"]) == cli.EX_INCONCLUSIVE


@pytest.fixture
def stub_mellin(monkeypatch):
    def fake(summands, N=10000, threads=None):
        return SimpleNamespace(C=F(3800), per_summand=[])

    monkeypatch.setattr(rigasym.mellin, "shifted_integral_bound", fake)


def test_asymptotic_report(tmp_path, capsys, stub_mellin):
    path = tmp_path / "r.json"
    code = cli.main(["asymptotic-report", "--skip-small", "--json", str(path)])
    assert code == cli.EX_OK
    rep = json.loads(path.read_text())
    assert rep["schema"] == 1 and rep["verdict"] == "settled"
    assert rep["main_term"] == {"n^2": "-1/8", "n": "1/24"}
    assert rep["summand_count"] == 141
    assert 4900 < float(rep["C_total"]["decimal"]) < 5000
    assert rep["ratio_at_N"] < 0.7
    assert "sweep" not in rep["stages"]
    assert "verdict=settled" in capsys.readouterr().out
    # reports carry no timings, so reruns are byte-identical
    path2 = tmp_path / "r2.json"
    cli.main(["asymptotic-report", "--skip-small", "--json", str(path2)])
    assert path.read_bytes() == path2.read_bytes()


def test_asymptotic_report_unsettled(tmp_path, monkeypatch):
    def huge(summands, N=10000, threads=None):
        return SimpleNamespace(C=F(10**6), per_summand=[])

    monkeypatch.setattr(rigasym.mellin, "shifted_integral_bound", huge)
    path = tmp_path / "r.json"
    assert cli.main(["asymptotic-report", "--skip-small", "--json", str(path)]) == cli.EX_VIOLATION
    rep = json.loads(path.read_text())
    assert rep["verdict"] == "unsettled" and rep["stages"]["theorem"]["status"] == "failed"
