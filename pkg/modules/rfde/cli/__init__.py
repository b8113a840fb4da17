"""Command-line front end: ``python app.py <command> ...``."""

from .commands import COMMANDS, EXIT_ERROR, EXIT_ESCAPE, EXIT_OK, escape_report_path, sup_difference
from .parser import build_parser
from .runner import run

__all__ = [
    "COMMANDS",
    "EXIT_ERROR",
    "EXIT_ESCAPE",
    "EXIT_OK",
    "build_parser",
    "escape_report_path",
    "run",
    "sup_difference",
]
