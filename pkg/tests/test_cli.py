"""End-to-end runs of the command line through ``run(argv)``."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from modules.rfde.cli import EXIT_ERROR, EXIT_ESCAPE, EXIT_OK, escape_report_path, sup_difference
from modules.rfde.main import run


def _csv(path: Path, rows: list[str], header: str = "t,x0,dx0") -> Path:
    path.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
    return path


def test_escape_report_path():
    assert escape_report_path("out/traj.csv") == Path("out/traj.escape.json")


def test_solve_matches_the_stored_oracle(config_dir, tmp_path):
    out = tmp_path / "lag.csv"
    assert run(["solve", str(config_dir / "constant_lag.json"), "-o", str(out)]) == EXIT_OK
    report = json.loads(escape_report_path(out).read_text(encoding="utf-8"))
    assert report["report"]["cause"] == "HorizonReached"
    assert report["report"]["t_escape"] is None
    assert report["problem"]["past_interval"] == "compact(1)"
    assert "segments" not in report["report"]
    assert sup_difference(out, config_dir / "constant_lag_oracle.csv") <= 1e-9
    assert run(["compare", str(out), str(config_dir / "constant_lag_oracle.csv")]) == EXIT_OK


def test_step_oracle_agrees_with_solve(config_dir, tmp_path):
    solved, oracle = tmp_path / "solve.csv", tmp_path / "step.csv"
    config = str(config_dir / "constant_lag.json")
    assert run(["solve", config, "-o", str(solved), "--segments"]) == EXIT_OK
    assert "segments" in json.loads(escape_report_path(solved).read_text(encoding="utf-8"))["report"]
    assert run(["oracle", config, "step", "-o", str(oracle)]) == EXIT_OK
    assert run(["compare", str(solved), str(oracle), "--tol", "1e-6"]) == EXIT_OK


def test_inapplicable_oracle_is_an_error(config_dir, tmp_path, capsys):
    code = run(["oracle", str(config_dir / "constant_lag.json"), "series", "-o", str(tmp_path / "x.csv")])
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_series_oracle(config_dir, tmp_path):
    out = tmp_path / "series.csv"
    assert run(["oracle", str(config_dir / "pantograph.json"), "series", "-o", str(out), "--terms", "50"]) == EXIT_OK
    assert out.exists()


def test_probe_writes_a_report(config_dir, tmp_path):
    out = tmp_path / "semiflow.json"
    assert run(["probe", str(config_dir / "trivial.json"), "semiflow", "-o", str(out)]) == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["schema"] == 1
    assert report["passed"] is True
    assert report["samples"] == 1000


def test_probe_prints_to_stdout(config_dir, capsys):
    assert run(["probe", str(config_dir / "constant_lag.json"), "cocycle"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["probe"] == "cocycle"
    assert report["measured"]["error"] <= 1e-7
    assert report["measured"]["tau1"] == 0.7


def test_lipschitz_estimate(config_dir, capsys):
    code = run(["lipschitz", str(config_dir / "constant_lag.json"), "memories", "--R", "0.5", "--samples", "50"])
    assert code == EXIT_OK
    first, payload = capsys.readouterr().out.split("\n", 1)
    assert first == "AboutMemories(R=0.5): 0"
    assert json.loads(payload)["value"] == 0.0


def test_compare_exit_codes(tmp_path, capsys):
    a = _csv(tmp_path / "a.csv", ["0,0,0", "1,1,1"])
    b = _csv(tmp_path / "b.csv", ["0,0,0", "0.5,1,1", "1,2,1"])
    assert sup_difference(a, b) == pytest.approx(1.0)
    assert run(["compare", str(a), str(b)]) == EXIT_ERROR
    out, err = capsys.readouterr()
    assert float(out) == pytest.approx(1.0)
    assert "error:" not in err
    assert run(["compare", str(a), str(b), "--tol", "1.5"]) == EXIT_OK
    other = _csv(tmp_path / "c.csv", ["0,0,0,0,0", "1,1,1,1,1"], header="t,x0,x1,dx0,dx1")
    assert run(["compare", str(a), str(other)]) == EXIT_ERROR


def test_missing_config_is_an_error(tmp_path, capsys):
    assert run(["solve", str(tmp_path / "nope.json"), "-o", str(tmp_path / "out.csv")]) == EXIT_ERROR
    assert "cannot read config" in capsys.readouterr().err


def test_run_log_records_the_command(tmp_path):
    a = _csv(tmp_path / "a.csv", ["0,0,0", "1,1,1"])
    log = tmp_path / "runs.jsonl"
    assert run(["--run-log", str(log), "compare", str(a), str(a)]) == EXIT_OK
    rows = [json.loads(line) for line in log.read_text(encoding="utf-8").splitlines()]
    assert rows[-1]["command"] == "compare"
    assert rows[-1]["exit_code"] == EXIT_OK
    assert rows[-1]["result"]["sup_difference"] == 0.0


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        run(["integrate", "config.json"])


@pytest.mark.slow
def test_blow_up_exits_with_escape_code(config_dir, tmp_path):
    out = tmp_path / "blowup.csv"
    assert run(["solve", str(config_dir / "ode_blowup.toml"), "-o", str(out)]) == EXIT_ESCAPE
    report = json.loads(escape_report_path(out).read_text(encoding="utf-8"))["report"]
    assert report["cause"] in ("BlowUp", "StepCollapse")
    assert 0.99 <= report["t_escape"] <= 1.0
