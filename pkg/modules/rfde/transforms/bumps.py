"""C¹ bump histories used as perturbations and memory-window differences.

Two shapes, both C¹ on the whole past:

- ``ramp`` on [a, b]: 0 left of a, smoothstep s²(3 − 2s) inside, 1 right of b.
  With b = 0 it touches θ = 0 with value 1 and zero slope.
- ``bump`` on [a, b]: sin²(π s) inside, 0 outside (interior support).

Both vanish identically (exact zeros) left of ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.intervals import PastInterval

RAMP = "ramp"
BUMP = "bump"


@dataclass(frozen=True)
class BumpTerm:
    kind: str
    a: float
    b: float
    weight: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in (RAMP, BUMP):
            raise ValueError(f"unknown bump kind {self.kind!r}")
        if not self.a < self.b:
            raise ValueError(f"bump needs a < b, got [{self.a}, {self.b}]")


def _shape(kind: str, a: float, b: float, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = b - a
    s = np.clip((theta - a) / w, 0.0, 1.0)
    inside = (theta > a) & (theta < b)
    if kind == RAMP:
        value = s * s * (3.0 - 2.0 * s)
        slope = np.where(inside, 6.0 * s * (1.0 - s) / w, 0.0)
        return value, slope
    value = np.where(inside, np.sin(math.pi * s) ** 2, 0.0)
    slope = np.where(inside, math.pi * np.sin(2.0 * math.pi * s) / w, 0.0)
    return value, slope


@dataclass(frozen=True, eq=False)
class BumpHistory(History):
    interval: PastInterval
    n: int
    terms: tuple[BumpTerm, ...]

    def _values(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(theta), self.n))
        for term in self.terms:
            value, _ = _shape(term.kind, term.a, term.b, theta)
            out += value[:, None] * np.asarray(term.weight)[None, :]
        return out

    def _derivatives(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(theta), self.n))
        if self.interval.is_point:
            return out
        for term in self.terms:
            _, slope = _shape(term.kind, term.a, term.b, theta)
            out += slope[:, None] * np.asarray(term.weight)[None, :]
        return out

    @property
    def support_lower(self) -> float:
        return min(term.a for term in self.terms)

    def scaled(self, c: float) -> "BumpHistory":
        terms = tuple(
            BumpTerm(t.kind, t.a, t.b, tuple(c * w for w in t.weight)) for t in self.terms
        )
        return BumpHistory(self.interval, self.n, terms)


def _unit_direction(n: int, rng: np.random.Generator) -> tuple[float, ...]:
    """Random ±1 vector, so the sup-norm of weight·shape equals the shape's sup."""
    return tuple(float(s) for s in rng.choice((-1.0, 1.0), size=n))


def touching_ramp(interval: PastInterval, n: int, width: float, rng: np.random.Generator) -> BumpHistory:
    """η with ‖η‖∞ = 1 attained at θ = 0, supported on [−width, 0] ∩ I."""
    width = _clip_width(interval, width)
    return BumpHistory(interval, n, (BumpTerm(RAMP, -width, 0.0, _unit_direction(n, rng)),))


def interior_bump(interval: PastInterval, n: int, width: float, rng: np.random.Generator) -> BumpHistory:
    """η with ‖η‖∞ = 1 and η(0) = 0, supported on [−width, 0] ∩ I."""
    if interval.is_point:
        raise ValueError("an interior bump needs a nondegenerate past interval")
    width = _clip_width(interval, width)
    return BumpHistory(interval, n, (BumpTerm(BUMP, -width, 0.0, _unit_direction(n, rng)),))


def random_memory_bump(
    interval: PastInterval,
    n: int,
    R: float,
    amplitude: float,
    rng: np.random.Generator,
    max_terms: int = 3,
) -> BumpHistory:
    """Random C¹ history supported in [−R, 0], nonzero at θ = 0, with sup-norm ≤ amplitude."""
    R = _clip_width(interval, R)
    terms = [BumpTerm(RAMP, -R * float(rng.uniform(0.2, 1.0)), 0.0, tuple(rng.uniform(-1.0, 1.0, size=n)))]
    for _ in range(int(rng.integers(0, max_terms))):
        lo = -R * float(rng.uniform(0.3, 1.0))
        hi = lo + (-lo) * float(rng.uniform(0.2, 1.0))
        terms.append(BumpTerm(BUMP, lo, hi, tuple(rng.uniform(-1.0, 1.0, size=n))))
    bump = BumpHistory(interval, n, tuple(terms))
    # ramp ≤ 1, bump ≤ 1: the weight sum bounds the sup-norm
    bound = sum(max(abs(w) for w in t.weight) for t in terms)
    return bump.scaled(amplitude / bound if bound > 0 else 0.0)


def _clip_width(interval: PastInterval, width: float) -> float:
    if interval.is_point:
        return 1.0
    return float(min(width, interval.length))
