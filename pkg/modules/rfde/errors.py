"""Error types shared by every rfde sub-package.

모든 예외는 `RfdeError` 하나를 뿌리로 두고, 진단에 필요한 값은
키워드 전용 필드로 싣습니다 (CLI가 메시지와 필드를 그대로 보고서에 씁니다).
"""

from __future__ import annotations

from typing import Any, Sequence


class RfdeError(RuntimeError):
    """Base error for the solver library."""

    def fields(self) -> dict[str, Any]:
        """Structured fields for JSON reports (message excluded)."""
        return {k: v for k, v in vars(self).items() if not k.startswith("_")}


class OutOfDomainError(RfdeError):
    """A history or trajectory was evaluated outside the time range it covers."""

    def __init__(self, *, t: float, lower: float, upper: float, message: str | None = None):
        super().__init__(message or f"time {t!r} outside [{lower!r}, {upper!r}]")
        self.t = t
        self.lower = lower
        self.upper = upper


class SpanMismatchError(RfdeError):
    def __init__(self, *, span_a: tuple[float, float], span_b: tuple[float, float]):
        super().__init__(f"segment spans differ: {span_a} vs {span_b}")
        self.span_a = span_a
        self.span_b = span_b


class AnchorMismatchError(RfdeError):
    """A prolongation does not start where the transform or join expects it to."""

    def __init__(self, *, expected: float, actual: float, message: str | None = None):
        super().__init__(message or f"anchor mismatch: expected {expected!r}, got {actual!r}")
        self.expected = expected
        self.actual = actual


class DelayExceedsIntervalError(RfdeError):
    def __init__(self, *, delay: float, limit: float):
        super().__init__(f"delay {delay!r} exceeds past interval length {limit!r}")
        self.delay = delay
        self.limit = limit


class IntervalMismatchError(RfdeError):
    def __init__(self, *, expected: str, actual: str):
        super().__init__(f"past interval {actual!r} where {expected!r} is required")
        self.expected = expected
        self.actual = actual


class NoValidPairsError(RfdeError):
    def __init__(self, *, mode: str, samples: int):
        super().__init__(f"no admissible sample pair for mode {mode!r} out of {samples} draws")
        self.mode = mode
        self.samples = samples


class DomainExitError(RfdeError):
    """The integrand left dom F at time ``t``."""

    def __init__(self, *, t: float, reason: str = ""):
        super().__init__(f"left dom F at t={t!r}" + (f" ({reason})" if reason else ""))
        self.t = t
        self.reason = reason


class StepCollapseError(RfdeError):
    def __init__(self, *, t: float, span: float, last_cause: str = ""):
        super().__init__(f"step span collapsed to {span!r} at t={t!r} ({last_cause or 'no cause'})")
        self.t = t
        self.span = span
        self.last_cause = last_cause


class PicardDivergedError(RfdeError):
    def __init__(self, *, t: float, ratios: Sequence[float]):
        super().__init__(f"Picard iteration diverged at t={t!r}")
        self.t = t
        self.ratios = list(ratios)


class EscapeBeforeTauError(RfdeError):
    def __init__(self, *, tau: float, report: Any):
        super().__init__(f"solution escaped before tau={tau!r}: {getattr(report, 'cause', report)}")
        self.tau = tau
        self.report = report


class MethodInapplicableError(RfdeError):
    def __init__(self, *, method: str, kind: str):
        super().__init__(f"oracle method {method!r} does not apply to model kind {kind!r}")
        self.method = method
        self.kind = kind


class ParseError(RfdeError):
    """DSL syntax error; ``position`` is a 0-based character offset."""

    def __init__(self, *, position: int, message: str, source: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.detail = message
        self.source = source


class EvalError(RfdeError):
    def __init__(self, *, kind: str, message: str | None = None):
        super().__init__(message or f"evaluation error: {kind}")
        self.kind = kind


class ConfigError(RfdeError):
    def __init__(
        self,
        *,
        message: str,
        path: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        where = ""
        if path:
            where = path
            if line is not None:
                where += f":{line}"
                if column is not None:
                    where += f":{column}"
            where += ": "
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line
        self.column = column
