from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Callable

HORIZON_REACHED = "HorizonReached"
BLOW_UP = "BlowUp"
DOMAIN_EXIT = "DomainExit"
STEP_COLLAPSE = "StepCollapse"
PICARD_DIVERGED = "PicardDiverged"

ESCAPE_CAUSES = (HORIZON_REACHED, BLOW_UP, DOMAIN_EXIT, STEP_COLLAPSE, PICARD_DIVERGED)

BOUND_SAMPLED = "sampled"
BOUND_FROM_LIPSCHITZ = "lipschitz_bound"

ShrinkStrategy = Callable[[float, int], float]


@dataclass(frozen=True)
class LipschitzSource:
    """Where solve_local takes L from: a user constant or the C¹-prolongation estimator."""

    kind: str = "estimated"
    L: float | None = None
    samples: int = 32
    seed: int = 0

    @classmethod
    def user_provided(cls, L: float) -> "LipschitzSource":
        if L < 0:
            raise ValueError(f"Lipschitz constant must be >= 0, got {L!r}")
        return cls("user", L=float(L))

    @classmethod
    def estimated(cls, samples: int = 32, seed: int = 0) -> "LipschitzSource":
        if samples < 1:
            raise ValueError(f"samples must be >= 1, got {samples}")
        return cls("estimated", samples=int(samples), seed=int(seed))

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "user":
            return {"kind": "user", "L": self.L}
        return {"kind": "estimated", "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class SolveOptions:
    grid_nodes_per_unit: int = 64
    fixed_point_tol: float = 1e-10
    max_picard_iters: int = 60
    delta: float = 1.0
    T_cap: float = 0.25
    T_min: float = 1e-6
    blow_threshold: float = 1e8
    lipschitz_source: LipschitzSource = field(default_factory=LipschitzSource.estimated)
    bound_samples: int = 16
    bound_mode: str = BOUND_SAMPLED

    def __post_init__(self) -> None:
        positives = {
            "grid_nodes_per_unit": self.grid_nodes_per_unit,
            "fixed_point_tol": self.fixed_point_tol,
            "max_picard_iters": self.max_picard_iters,
            "delta": self.delta,
            "T_cap": self.T_cap,
            "T_min": self.T_min,
            "blow_threshold": self.blow_threshold,
            "bound_samples": self.bound_samples,
        }
        bad = [k for k, v in positives.items() if not v > 0]
        if bad:
            raise ValueError(f"solve options must be positive: {bad}")
        if not self.T_min < self.T_cap:
            raise ValueError(f"T_min ({self.T_min}) must be below T_cap ({self.T_cap})")
        if self.bound_mode not in (BOUND_SAMPLED, BOUND_FROM_LIPSCHITZ):
            raise ValueError(f"unknown bound_mode {self.bound_mode!r}")

    @property
    def grid_h(self) -> float:
        return 1.0 / self.grid_nodes_per_unit

    def with_overrides(self, **overrides: Any) -> "SolveOptions":
        return dataclasses.replace(self, **overrides)

    def to_dict(self) -> dict[str, Any]:
        out = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        out["lipschitz_source"] = self.lipschitz_source.to_dict()
        return out


@dataclass
class SolveDiagnostics:
    t_start: float
    chosen_T: float
    estimated_M: float
    estimated_L: float
    picard_iterations: int = 0
    contraction_ratios: list[float] = field(default_factory=list)
    residual: float = float("nan")
    ball_excursion: float = 0.0
    segment_span: float = 0.0
    n_cells: int = 0
    halvings: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def max_ratio(self) -> float:
        return max(self.contraction_ratios, default=0.0)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class EscapeReport:
    cause: str
    t_escape: float | None
    t_reached: float
    message: str = ""
    diagnostics: list[SolveDiagnostics] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.cause not in ESCAPE_CAUSES:
            raise ValueError(f"unknown escape cause {self.cause!r}")

    @property
    def escaped(self) -> bool:
        return self.cause != HORIZON_REACHED

    def summary(self) -> dict[str, Any]:
        ratios = [r for d in self.diagnostics for r in d.contraction_ratios]
        return {
            "segments": len(self.diagnostics),
            "picard_iterations": sum(d.picard_iterations for d in self.diagnostics),
            "max_contraction_ratio": max(ratios, default=0.0),
            "max_residual": max((d.residual for d in self.diagnostics), default=0.0),
            "max_ball_excursion": max((d.ball_excursion for d in self.diagnostics), default=0.0),
            "min_span": min((d.segment_span for d in self.diagnostics), default=0.0),
            "max_estimated_L": max((d.estimated_L for d in self.diagnostics), default=0.0),
            "max_estimated_M": max((d.estimated_M for d in self.diagnostics), default=0.0),
            "halvings": sum(d.halvings for d in self.diagnostics),
        }

    def to_dict(self, *, with_segments: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": 1,
            "cause": self.cause,
            "t_escape": self.t_escape,
            "t_reached": self.t_reached,
            "message": self.message,
            "summary": self.summary(),
        }
        if with_segments:
            out["segments"] = [d.to_dict() for d in self.diagnostics]
        return out


@dataclass
class StepPolicyDTO:
    """How solve_local retries a failed step: span shrink rule and retry budget."""

    max_retries: int = 64
    shrink_strategy: ShrinkStrategy | None = None
