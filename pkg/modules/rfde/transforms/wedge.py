"""ψ^{∧v}, the trivial flow S(t)(v, φ) and the translations τ^v_{σ,ψ}."""

from __future__ import annotations

import numpy as np

from modules.rfde.core.history import History, history_difference, history_sum
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import HistoryView, Trajectory

DEFAULT_WEDGE_SPAN = 1.0


def wedge_extend(psi: History, v: np.ndarray | list | float, span: float = DEFAULT_WEDGE_SPAN) -> Trajectory:
    """ψ on I, ψ(0) + t·v on [0, span], stored as one exact line segment."""
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    if v.shape != (psi.n,):
        raise ValueError(f"slope has shape {v.shape}, expected ({psi.n},)")
    return Trajectory(psi, 0.0, (Segment.line(0.0, max(float(span), 1e-12), psi.at_zero(), v),))


def constant_extend(psi: History, span: float = DEFAULT_WEDGE_SPAN) -> Trajectory:
    """ψ̄ = ψ^{∧0}."""
    return wedge_extend(psi, np.zeros(psi.n), span)


def trivial_flow(t: float, v: np.ndarray | list | float, phi: History) -> HistoryView:
    """S(t)(v, φ) = I_t[φ^{∧v}]."""
    if t < 0:
        raise ValueError(f"trivial flow needs t >= 0, got {t!r}")
    return HistoryView(wedge_extend(phi, v, span=max(float(t), DEFAULT_WEDGE_SPAN)), float(t))


def translate(
    sigma: float, psi: History, v: np.ndarray | list | float, t: float, phi: History
) -> tuple[float, History]:
    """τ^v_{σ,ψ}(t, φ) = (σ + t, I_t[ψ^{∧v}] + φ)."""
    return sigma + t, history_sum(trivial_flow(t, v, psi), phi)


def translate_inv(
    sigma: float, psi: History, v: np.ndarray | list | float, t_tilde: float, phi_tilde: History
) -> tuple[float, History]:
    """(t̃ − σ, φ̃ − I_{t̃−σ}[ψ^{∧v}])."""
    t = t_tilde - sigma
    return t, history_difference(phi_tilde, trivial_flow(t, v, psi))
