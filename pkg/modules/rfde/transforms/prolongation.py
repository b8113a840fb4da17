"""Prolongations: the A/N transforms and the seeded sampler for Γ and Γ¹."""

from __future__ import annotations

import logging

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import HistoryView, Trajectory
from modules.rfde.errors import AnchorMismatchError
from modules.rfde.transforms.rectangle import C0, C1, RectangleSpec

logger = logging.getLogger(__name__)

ANCHOR_TOL = 1e-12
DEFAULT_SAMPLER_CELLS = 8
_MAX_TERMS = 5
_NORM_CELL_SAMPLES = 16
# 저장 격자와 탐침 격자의 차이를 흡수할 여유
_NORM_MARGIN = 1e-3


def add_A(sigma: float, psi: History, v: np.ndarray, beta: Segment) -> Segment:
    """β ↦ ψ^{∧v}(· − σ) + β(· − σ) on [σ, σ + T]."""
    if abs(beta.t_start) > ANCHOR_TOL:
        raise AnchorMismatchError(expected=0.0, actual=beta.t_start)
    if np.max(np.abs(beta.values[0])) > ANCHOR_TOL:
        raise AnchorMismatchError(expected=0.0, actual=0.0, message="β(0) must vanish (I₀β = 0)")
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    x0 = psi.at_zero()
    s = beta.nodes - beta.t_start
    values = x0[None, :] + s[:, None] * v[None, :] + beta.values
    return Segment(sigma + beta.t_start, sigma + beta.t_end, values, beta.derivatives + v[None, :])


def normalize_N(sigma: float, psi: History, v: np.ndarray, gamma: Segment) -> Segment:
    """Inverse of :func:`add_A`."""
    if abs(gamma.t_start - sigma) > ANCHOR_TOL * max(1.0, abs(sigma)):
        raise AnchorMismatchError(expected=sigma, actual=gamma.t_start)
    x0 = psi.at_zero()
    if np.max(np.abs(gamma.values[0] - x0)) > 1e-9:
        raise AnchorMismatchError(expected=sigma, actual=gamma.t_start, message="γ(σ) differs from ψ(0)")
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    s = gamma.nodes - gamma.t_start
    values = gamma.values - x0[None, :] - s[:, None] * v[None, :]
    return Segment(0.0, gamma.t_end - sigma, values, gamma.derivatives - v[None, :])


def prolongation_history(sigma: float, psi: History, gamma: Segment, t: float | None = None) -> HistoryView:
    """I_t γ for the prolongation ψ ∪ γ (t defaults to the segment's right end)."""
    source = Trajectory(psi, sigma, (gamma,))
    return HistoryView(source, gamma.t_end if t is None else float(t))


def _hermite_shape(kind: str, u: np.ndarray, inside: np.ndarray, width: float) -> tuple[np.ndarray, np.ndarray]:
    """Cubic Hermite pieces on [0, 1]: ramp 0 → 1, or bump 0 → 1 → 0 with its peak at u = 1/2."""
    if kind == "ramp":
        return u * u * (3.0 - 2.0 * u), np.where(inside, 6.0 * u * (1.0 - u) / width, 0.0)
    w = np.where(u <= 0.5, 2.0 * u, 2.0 - 2.0 * u)
    dw = np.where(u <= 0.5, 2.0, -2.0)
    return w * w * (3.0 - 2.0 * w), np.where(inside, 6.0 * w * (1.0 - w) * dw / width, 0.0)


def _perturbation(tau: float, n: int, rng: np.random.Generator, order: str):
    """Sum of ≤ 5 Hermite ramps/bumps with p(0) = 0 = p'(0); C0 adds a free linear term."""
    count = int(rng.integers(1, _MAX_TERMS + 1))
    shapes = []
    for _ in range(count):
        a = tau * float(rng.uniform(0.0, 0.8))
        b = a + (tau - a) * float(rng.uniform(0.2, 1.0))
        kind = "ramp" if rng.random() < 0.5 else "bump"
        shapes.append((kind, a, b, rng.uniform(-1.0, 1.0, size=n)))
    slope = rng.uniform(-1.0, 1.0, size=n) / max(tau, 1e-12) if order == C0 and rng.random() < 0.5 else None

    def value(s: np.ndarray) -> np.ndarray:
        out = np.zeros((len(s), n))
        for kind, a, b, w in shapes:
            u = np.clip((s - a) / (b - a), 0.0, 1.0)
            base, _ = _hermite_shape(kind, u, (s > a) & (s < b), b - a)
            out += base[:, None] * w[None, :]
        if slope is not None:
            out += s[:, None] * slope[None, :]
        return out

    def deriv(s: np.ndarray) -> np.ndarray:
        out = np.zeros((len(s), n))
        for kind, a, b, w in shapes:
            u = np.clip((s - a) / (b - a), 0.0, 1.0)
            _, base = _hermite_shape(kind, u, (s > a) & (s < b), b - a)
            out += base[:, None] * w[None, :]
        if slope is not None:
            out += slope[None, :]
        return out

    return value, deriv


def _segment_norm(seg: Segment, order: str) -> float:
    fine = np.linspace(seg.t_start, seg.t_end, seg.n_cells * _NORM_CELL_SAMPLES + 1)
    norm = float(np.max(np.abs(seg.value_at(fine))))
    if order == C1:
        norm += float(np.max(np.abs(seg.derivative_at(fine))))
    return norm


def random_prolongation(
    rect: RectangleSpec,
    tau: float,
    seed: int,
    n_cells: int = DEFAULT_SAMPLER_CELLS,
) -> Segment:
    """Seeded member of Γ_{σ,ψ}(τ, δ) (C0) or Γ¹_{σ,ψ}(τ, δ, v) (C1) on [σ, σ + τ]."""
    if not 0.0 < tau <= rect.horizon * (1.0 + 1e-12):
        raise ValueError(f"span must lie in (0, {rect.horizon}], got {tau!r}")
    rng = np.random.default_rng(seed)
    n = rect.base_history.n
    value, deriv = _perturbation(tau, n, rng, rect.order)
    p = Segment.from_function(0.0, tau, n_cells, value, deriv)
    norm = _segment_norm(p, rect.order)
    target = rect.radius * float(rng.uniform(0.0, 1.0)) * (1.0 - _NORM_MARGIN)
    scale = target / norm if norm > 0 else 0.0
    p = p.with_data(p.values * scale, p.derivatives * scale)
    return add_A(rect.base_time, rect.base_history, rect.slope_or_zero, p)
