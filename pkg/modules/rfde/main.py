"""호환용 진입점: 명령줄 구현은 `cli`에 있습니다."""

from modules.rfde.cli import build_parser, run

__all__ = ["build_parser", "run"]
