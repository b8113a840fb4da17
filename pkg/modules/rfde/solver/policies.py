from __future__ import annotations

from modules.rfde.solver.dto import StepPolicyDTO


def _halve(span: float, attempt: int) -> float:
    return 0.5 * span


def build_halving_policy(*, max_retries: int = 64) -> StepPolicyDTO:
    return StepPolicyDTO(max_retries=max_retries, shrink_strategy=_halve)


def build_no_retry_policy() -> StepPolicyDTO:
    """Fixed span: used when several solves must share one grid."""
    return StepPolicyDTO(max_retries=0, shrink_strategy=lambda span, _: span)
