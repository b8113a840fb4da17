from __future__ import annotations

import json
import logging

import pytest

from modules.rfde.utils import run_logger
from modules.rfde.utils.devtools import init_logging, recent_exceptions, record_exception
from modules.rfde.utils.worker_pool import current_context, map_ordered, worker_context


@pytest.mark.parametrize("threads", [1, 4])
def test_map_ordered_keeps_input_order(threads):
    assert map_ordered(lambda x: x * x, range(10), threads) == [x * x for x in range(10)]


def test_worker_context_reaches_the_workers():
    with worker_context(probe="uniqueness"):
        with worker_context(seed=3):
            seen = map_ordered(lambda _: current_context(), range(3), 2)
    assert seen == [{"probe": "uniqueness", "seed": 3}] * 3
    assert current_context() == {}


def test_worker_errors_propagate(caplog):
    def boom(x):
        raise ValueError(f"bad {x}")

    with caplog.at_level(logging.ERROR, logger="modules.rfde.utils.worker_pool"):
        with pytest.raises(ValueError):
            map_ordered(boom, [1, 2], 2)
    assert "[worker]" in caplog.text


def test_run_logger_appends_json_lines(tmp_path, monkeypatch):
    monkeypatch.delenv(run_logger.ENV_RUN_LOG, raising=False)
    assert run_logger.configure(None) is None
    run_logger.log_event("command", command="noop")
    run_logger.flush_events()

    path = tmp_path / "log" / "runs.jsonl"
    assert run_logger.configure(path) == path
    run_logger.log_event("command", command="solve", exit_code=0, result={"cause": "HorizonReached"})
    run_logger.flush_events()
    row = json.loads(path.read_text(encoding="utf-8").strip())
    assert row["command"] == "solve"
    assert row["result"] == {"cause": "HorizonReached"}
    run_logger.configure(None)


def test_recorded_exceptions_keep_tracebacks():
    init_logging(False)
    try:
        raise RuntimeError("kaboom")
    except RuntimeError as exc:
        record_exception("unit", exc)
    assert "kaboom" in recent_exceptions()[-1]
