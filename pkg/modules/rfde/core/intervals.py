from __future__ import annotations

import math
from dataclasses import dataclass

COMPACT = "compact"
WHOLE = "whole"
POINT = "point"

# θ에 대한 허용 오차: 격자 계산 반올림으로 -r 바로 바깥을 찍는 경우를 흡수
THETA_TOL = 1e-12


@dataclass(frozen=True)
class PastInterval:
    """I = [-r, 0], (-inf, 0] or {0}."""

    kind: str
    r: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (COMPACT, WHOLE, POINT):
            raise ValueError(f"unknown past interval kind {self.kind!r}")
        if self.kind == COMPACT and not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"compact past interval needs finite r > 0, got {self.r!r}")

    @classmethod
    def compact(cls, r: float) -> "PastInterval":
        return cls(COMPACT, float(r))

    @classmethod
    def whole(cls) -> "PastInterval":
        return cls(WHOLE, math.inf)

    @classmethod
    def point(cls) -> "PastInterval":
        return cls(POINT, 0.0)

    @property
    def lower(self) -> float:
        if self.kind == COMPACT:
            return -self.r
        if self.kind == WHOLE:
            return -math.inf
        return 0.0

    @property
    def length(self) -> float:
        return -self.lower

    @property
    def is_point(self) -> bool:
        return self.kind == POINT

    def contains(self, theta: float, tol: float = THETA_TOL) -> bool:
        return self.lower - tol <= theta <= tol

    def window(self, R: float | None) -> tuple[float, float]:
        """[-R, 0] clipped to I. ``R=None`` means the whole interval (finite ones only)."""
        if self.kind == POINT:
            return 0.0, 0.0
        if R is None:
            if self.kind == WHOLE:
                raise ValueError("a finite window is required on the whole past interval")
            return self.lower, 0.0
        return max(self.lower, -abs(float(R))), 0.0

    def label(self) -> str:
        if self.kind == COMPACT:
            return f"compact({self.r:g})"
        return self.kind
