from .devtools import LOG_FORMAT, init_logging, record_exception, recent_exceptions
from .run_logger import configure as configure_run_log
from .run_logger import flush_events, log_event
from .worker_pool import ContextThreadPoolExecutor, default_threads, map_ordered, worker_context

__all__ = [
    "ContextThreadPoolExecutor",
    "LOG_FORMAT",
    "configure_run_log",
    "default_threads",
    "flush_events",
    "init_logging",
    "log_event",
    "map_ordered",
    "recent_exceptions",
    "record_exception",
    "worker_context",
]
