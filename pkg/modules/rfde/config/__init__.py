"""Problem configs: schema keys, raw validation and the loader."""

from .problem_config import ProblemConfig, build_problem, load_problem, load_raw
from .validation import validate_problem

__all__ = [
    "ProblemConfig",
    "build_problem",
    "load_problem",
    "load_raw",
    "validate_problem",
]
