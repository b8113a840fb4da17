"""Seeded generators of same-time history pairs for the Lipschitz estimators.

Each mode draws pairs from the constraint set of its Lipschitz condition:

- ``prolongations`` / ``c1``: histories I_t γᵢ of two members of Γ_{σ,ψ}(τ, δ)
  (resp. Γ¹_{σ,ψ}(τ, δ, v)) over the same random span τ ∈ (0, T].
- ``memories``: φ₁ from a C0 prolongation, φ₂ = φ₁ + a C¹ bump supported in [−R, 0].
- ``lip_memories``: Lipschitz-bounded pair (lip ≤ M) whose difference lives in [−R, 0].
- ``almost_local``: Lipschitz-bounded pair with compactly supported difference,
  windows [−k, 0] on the whole past with budgets M_k (default M·k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from modules.rfde.core.history import History, InitialHistory, history_sum
from modules.rfde.transforms.bumps import BumpHistory, random_memory_bump
from modules.rfde.transforms.prolongation import DEFAULT_SAMPLER_CELLS, prolongation_history, random_prolongation
from modules.rfde.transforms.rectangle import C0, C1, RectangleSpec

PROLONGATIONS = "prolongations"
C1_PROLONGATIONS = "c1"
MEMORIES = "memories"
LIP_MEMORIES = "lip_memories"
ALMOST_LOCAL = "almost_local"

MODE_KINDS = (PROLONGATIONS, C1_PROLONGATIONS, MEMORIES, LIP_MEMORIES, ALMOST_LOCAL)

_SEED_SPACE = 2**63 - 1
_MAX_SINES = 5
_WHOLE_WINDOWS = 3


@dataclass(frozen=True)
class LipschitzMode:
    kind: str
    R: float | None = None
    M: float | None = None
    schedule: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODE_KINDS:
            raise ValueError(f"unknown Lipschitz mode {self.kind!r}; expected one of {MODE_KINDS}")
        if self.kind in (MEMORIES, LIP_MEMORIES) and not (self.R and self.R > 0):
            raise ValueError(f"mode {self.kind!r} needs R > 0")
        if self.kind in (LIP_MEMORIES, ALMOST_LOCAL) and not (self.M and self.M > 0):
            raise ValueError(f"mode {self.kind!r} needs M > 0")

    @classmethod
    def about_prolongations(cls) -> "LipschitzMode":
        return cls(PROLONGATIONS)

    @classmethod
    def about_c1_prolongations(cls) -> "LipschitzMode":
        return cls(C1_PROLONGATIONS)

    @classmethod
    def about_memories(cls, R: float) -> "LipschitzMode":
        return cls(MEMORIES, R=float(R))

    @classmethod
    def about_lip_memories(cls, R: float, M: float) -> "LipschitzMode":
        return cls(LIP_MEMORIES, R=float(R), M=float(M))

    @classmethod
    def almost_local(cls, M: float, schedule: Sequence[float] | None = None) -> "LipschitzMode":
        return cls(ALMOST_LOCAL, M=float(M), schedule=tuple(float(m) for m in schedule) if schedule else None)

    @property
    def needs_slope(self) -> bool:
        return self.kind == C1_PROLONGATIONS

    def label(self) -> str:
        names = {
            PROLONGATIONS: "AboutProlongations",
            C1_PROLONGATIONS: "AboutC1Prolongations",
            MEMORIES: "AboutMemories",
            LIP_MEMORIES: "AboutLipMemories",
            ALMOST_LOCAL: "AlmostLocal",
        }
        args = [f"{k}={v:g}" for k, v in (("R", self.R), ("M", self.M)) if v is not None]
        return names[self.kind] + (f"({', '.join(args)})" if args else "")

    def params(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.R is not None:
            out["R"] = self.R
        if self.M is not None:
            out["M"] = self.M
        if self.schedule:
            out["schedule"] = list(self.schedule)
        return out


@dataclass
class PairSample:
    t: float
    phi1: History
    phi2: History
    window: tuple[float, float]
    info: dict[str, float] = field(default_factory=dict)


def _span(T: float, rng: np.random.Generator) -> float:
    return T * (1.0 - float(rng.random()))


def _seed(rng: np.random.Generator) -> int:
    return int(rng.integers(_SEED_SPACE))


def _prolongation_view(rect: RectangleSpec, tau: float, rng: np.random.Generator, n_cells: int) -> History:
    gamma = random_prolongation(rect, tau, _seed(rng), n_cells)
    return prolongation_history(rect.base_time, rect.base_history, gamma)


def sinusoid_history(psi: History, budget: float, rng: np.random.Generator) -> InitialHistory:
    """ψ(0) + Σ aⱼ(sin(ωⱼθ + pⱼ) − sin pⱼ) with Σ|aⱼ ωⱼ| ≤ budget (componentwise)."""
    n = psi.n
    count = int(rng.integers(1, _MAX_SINES + 1))
    omega = rng.uniform(0.5, 6.0, size=count)
    phase = rng.uniform(0.0, 2.0 * math.pi, size=count)
    amp = rng.uniform(-1.0, 1.0, size=(count, n))
    total = np.sum(np.abs(amp) * omega[:, None], axis=0)
    amp = amp * (budget * float(rng.uniform(0.1, 1.0)) / np.maximum(total, 1e-300))[None, :]
    x0 = psi.at_zero().copy()

    def func(theta: np.ndarray) -> np.ndarray:
        waves = np.sin(np.outer(theta, omega) + phase[None, :]) - np.sin(phase)[None, :]
        return x0[None, :] + waves @ amp

    def dfunc(theta: np.ndarray) -> np.ndarray:
        return (np.cos(np.outer(theta, omega) + phase[None, :]) * omega[None, :]) @ amp

    return InitialHistory.closed_form(func, psi.interval, n, dfunc=dfunc)


def _bump_lip(bump: BumpHistory) -> float:
    slope = {"ramp": 1.5, "bump": math.pi}
    return sum(slope[t.kind] * max(abs(w) for w in t.weight) / (t.b - t.a) for t in bump.terms)


def _lip_bounded_pair(
    base: tuple[float, History],
    width: float,
    lip_budget: float,
    delta: float,
    rng: np.random.Generator,
) -> tuple[History, History]:
    _, psi = base
    phi1 = sinusoid_history(psi, 0.5 * lip_budget, rng)
    bump = random_memory_bump(psi.interval, psi.n, width, delta * float(rng.uniform(0.05, 1.0)), rng)
    lip = _bump_lip(bump)
    if lip > 0.5 * lip_budget:
        bump = bump.scaled(0.5 * lip_budget / lip)
    return phi1, history_sum(phi1, bump)


def draw_pair(
    mode: LipschitzMode,
    base: tuple[float, History],
    T: float,
    delta: float,
    rng: np.random.Generator,
    *,
    slope: np.ndarray | None = None,
    n_cells: int = DEFAULT_SAMPLER_CELLS,
) -> PairSample:
    sigma, psi = base
    interval = psi.interval

    if mode.kind in (PROLONGATIONS, C1_PROLONGATIONS):
        order = C1 if mode.kind == C1_PROLONGATIONS else C0
        rect = RectangleSpec(sigma, psi, T, delta, order, slope if order == C1 else None)
        tau = _span(T, rng)
        phi1 = _prolongation_view(rect, tau, rng, n_cells)
        phi2 = _prolongation_view(rect, tau, rng, n_cells)
        window = interval.window(tau)
        return PairSample(sigma + tau, phi1, phi2, window, {"tau": tau})

    if mode.kind == MEMORIES:
        rect = RectangleSpec(sigma, psi, T, delta, C0)
        tau = _span(T, rng)
        phi1 = _prolongation_view(rect, tau, rng, n_cells)
        width = float(mode.R) if interval.kind == "whole" else min(float(mode.R), interval.length)
        bump = random_memory_bump(interval, psi.n, width, delta * float(rng.uniform(0.05, 1.0)), rng)
        return PairSample(sigma + tau, phi1, history_sum(phi1, bump), interval.window(width), {"tau": tau})

    if mode.kind == LIP_MEMORIES:
        width = float(mode.R) if interval.kind == "whole" else min(float(mode.R), interval.length)
        phi1, phi2 = _lip_bounded_pair(base, width, float(mode.M), delta, rng)
        return PairSample(sigma, phi1, phi2, interval.window(width), {"width": width})

    # almost_local
    if interval.kind == "whole":
        k = int(rng.integers(1, _WHOLE_WINDOWS + 1))
        budgets = mode.schedule or tuple(float(mode.M) * j for j in range(1, _WHOLE_WINDOWS + 1))
        width = float(k)
        lip_budget = min(budgets[: max(k, 1)])
    else:
        width = interval.length if not interval.is_point else 1.0
        lip_budget = float(mode.M)
    phi1, phi2 = _lip_bounded_pair(base, width, lip_budget, delta, rng)
    return PairSample(sigma, phi1, phi2, interval.window(width), {"width": width, "lip_budget": lip_budget})
