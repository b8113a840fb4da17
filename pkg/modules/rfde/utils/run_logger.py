"""JSON-lines run log for CLI invocations.

실행 기록(명령, 설정 파일, 종료 코드, 소요 시간 등)을 한 줄짜리 JSON으로
남깁니다. 대상 경로는 ``--run-log`` 또는 환경 변수 ``RFDE_RUN_LOG``에서
정해지며, 둘 다 없으면 아무것도 쓰지 않습니다.

Public functions never raise.
The append runs on a background thread so it never blocks the solver.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import uuid
from datetime import datetime, timezone
from pathlib import Path

ENV_RUN_LOG = "RFDE_RUN_LOG"

logger = logging.getLogger(__name__)

_destination: Path | None = None
_run_id = uuid.uuid4().hex[:16]
_pending: list[threading.Thread] = []
_write_lock = threading.Lock()


def configure(path: str | os.PathLike | None) -> Path | None:
    """Set the destination; ``None`` falls back to the environment variable."""
    global _destination
    raw = path if path is not None else os.environ.get(ENV_RUN_LOG)
    _destination = Path(raw) if raw else None
    return _destination


def _append_line(path: Path, row: dict) -> None:
    """Append a single row. Runs on a background thread."""
    try:
        line = json.dumps(row, ensure_ascii=False, default=str)
        with _write_lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8", newline="\n") as fh:
                fh.write(line + "\n")
    except Exception as e:
        logger.warning("[run_logger] append failed: %s", e)


def log_event(
    event_type: str,
    *,
    command: str | None = None,
    config_path: str | None = None,
    exit_code: int | None = None,
    elapsed_sec: float | None = None,
    error_message: str | None = None,
    result: dict | None = None,
) -> None:
    """Queue one event. Never raises."""
    try:
        if _destination is None:
            return
        row = {
            "event_id": uuid.uuid4().hex,
            "run_id": _run_id,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "event_type": event_type,
            "command": command,
            "config_path": config_path,
            "exit_code": exit_code,
            "elapsed_sec": elapsed_sec,
            "error_message": error_message[:2000] if error_message else None,
            "result": result,
        }
        worker = threading.Thread(target=_append_line, args=(_destination, row), daemon=True)
        worker.start()
        _pending.append(worker)
    except Exception as e:
        logger.warning("[run_logger] log_event failed: %s", e)


def flush_events(timeout: float = 5.0) -> None:
    """Join pending writes before the process exits."""
    while _pending:
        worker = _pending.pop()
        try:
            worker.join(timeout)
        except Exception:
            pass
