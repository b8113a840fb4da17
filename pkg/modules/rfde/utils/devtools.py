from __future__ import annotations

import logging
import sys
import threading
import traceback
from collections import deque
from typing import Deque

LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"

_lock = threading.Lock()
_handler: logging.Handler | None = None
_tracebacks: Deque[str] = deque(maxlen=30)


def init_logging(verbose: bool = False) -> None:
    """Idempotently install one stderr handler on the ``modules.rfde`` logger tree."""
    global _handler
    level = logging.DEBUG if verbose else logging.WARNING
    root = logging.getLogger("modules.rfde")
    with _lock:
        if _handler is None:
            _handler = logging.StreamHandler(sys.stderr)
            _handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(_handler)
        _handler.setLevel(level)
        root.setLevel(level)


def record_exception(context: str, exc: BaseException) -> None:
    """Log with traceback and keep it for ``--verbose`` dumps."""
    logging.getLogger(__name__).error("%s: %s", context, exc, exc_info=exc)
    tb = "".join(traceback.format_exception(type(exc), exc, exc.__traceback__))
    with _lock:
        _tracebacks.append(f"{context}\n{tb}")


def recent_exceptions(limit: int = 5) -> list[str]:
    with _lock:
        return list(_tracebacks)[-limit:]
