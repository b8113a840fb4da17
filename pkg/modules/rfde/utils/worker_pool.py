"""ThreadPoolExecutor that logs uncaught worker exceptions with submit-time context.

- `submit` 시점에 ContextVar 메타(프로브 이름, 시드, 샘플 번호 등)를 스냅샷해 워커에 전달합니다.
- 워커 스레드는 호출 스레드의 컨텍스트를 읽지 않아도 같은 맥락을 로그에 남길 수 있습니다.

    from modules.rfde.utils.worker_pool import worker_context

    with worker_context(probe="dependence", seed=7):
        ...  # 이 구간에서 submit되는 작업에 메타가 합쳐짐
"""
from __future__ import annotations

import contextlib
import contextvars
import functools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, Iterator, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# submit 시점에 merge되어 스냅샷에 포함됨 (중첩 with 지원)
_worker_extras: contextvars.ContextVar[Dict[str, Any] | None] = contextvars.ContextVar(
    "rfde_worker_extras", default=None
)


@contextlib.contextmanager
def worker_context(**kwargs: Any) -> Iterator[None]:
    """워커 예외 로그에 포함할 추가 컨텍스트. 중첩 시 shallow merge."""
    prev = _worker_extras.get()
    merged: Dict[str, Any] = {**(prev or {}), **kwargs}
    token = _worker_extras.set(merged)
    try:
        yield
    finally:
        _worker_extras.reset(token)


def current_context() -> Dict[str, Any]:
    return dict(_worker_extras.get() or {})


def _wrap_worker(fn: Callable[..., Any], snapshot: Dict[str, Any]) -> Callable[..., Any]:
    @functools.wraps(fn)
    def wrapped(*args: Any, **kwargs: Any) -> Any:
        token = _worker_extras.set(snapshot)
        try:
            return fn(*args, **kwargs)
        except BaseException as exc:
            logger.error(
                "[worker] %s.%s raised %s: %s (context=%s)",
                getattr(fn, "__module__", "?"),
                getattr(fn, "__qualname__", repr(fn)),
                type(exc).__name__,
                exc,
                snapshot,
            )
            raise
        finally:
            _worker_extras.reset(token)

    return wrapped


class ContextThreadPoolExecutor(ThreadPoolExecutor):
    def submit(self, fn: Callable[..., Any], /, *args: Any, **kwargs: Any):  # type: ignore[override]
        return super().submit(_wrap_worker(fn, current_context()), *args, **kwargs)


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int | None = 1) -> list[R]:
    """Apply ``fn`` to every item, results in input order; serial when threads <= 1."""
    items = list(items)
    workers = default_threads() if threads is None else int(threads)
    if workers <= 1 or len(items) <= 1:
        snapshot = current_context()
        return [_wrap_worker(fn, snapshot)(item) for item in items]
    with ContextThreadPoolExecutor(max_workers=min(workers, len(items)), thread_name_prefix="rfde") as pool:
        futures = [pool.submit(fn, item) for item in items]
        return [f.result() for f in futures]
