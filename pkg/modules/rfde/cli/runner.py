from __future__ import annotations

import json
import logging
import sys
import time
from typing import Sequence

from modules.rfde.cli.commands import COMMANDS, EXIT_ERROR
from modules.rfde.cli.parser import build_parser
from modules.rfde.errors import RfdeError
from modules.rfde.utils.devtools import init_logging, recent_exceptions, record_exception
from modules.rfde.utils.run_logger import configure, flush_events, log_event

logger = logging.getLogger(__name__)

# 사용자 입력 문제로 보는 예외: 한 줄 메시지 + 종료 코드 1
_USER_ERRORS = (RfdeError, OSError, ValueError, UnicodeDecodeError, json.JSONDecodeError)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    init_logging(args.verbose)
    configure(args.run_log)

    started = time.perf_counter()
    config_path = getattr(args, "config", None)
    code, result, error = EXIT_ERROR, None, None
    try:
        code, result = COMMANDS[args.command](args)
    except _USER_ERRORS as exc:
        error = f"{type(exc).__name__}: {exc}"
        if args.verbose:
            record_exception(f"rfde {args.command}", exc)
        print(f"error: {exc}", file=sys.stderr)
    except Exception as exc:  # noqa: BLE001
        error = f"{type(exc).__name__}: {exc}"
        record_exception(f"rfde {args.command}", exc)
        print(f"internal error: {error}", file=sys.stderr)
    if error and args.verbose:
        for tb in recent_exceptions():
            print(tb, file=sys.stderr)

    log_event(
        "command",
        command=args.command,
        config_path=config_path,
        exit_code=code,
        elapsed_sec=round(time.perf_counter() - started, 3),
        error_message=error,
        result=result,
    )
    flush_events()
    return code
