"""The integral operator 𝒯_{σ,ψ} and its normalized form 𝒮¹ = N ∘ 𝒯 ∘ A.

Each cell [u_j, u_{j+1}] is integrated by Simpson's rule with the integrand
evaluated at both nodes and the cell midpoint, i.e. two panels per cell, so
the composite rule never needs an odd-panel correction. Node derivatives are
the integrand values themselves: (𝒯γ)′(u) = F(u, I_uγ).
"""

from __future__ import annotations

import numpy as np

from modules.rfde.core.history import History
from modules.rfde.core.segment import Segment
from modules.rfde.core.trajectory import HistoryView, Trajectory
from modules.rfde.errors import DelayExceedsIntervalError, DomainExitError, EvalError, OutOfDomainError
from modules.rfde.functional.dto import HistoryFunctional
from modules.rfde.transforms.prolongation import add_A, normalize_N


def integrand(F: HistoryFunctional, prolongation: Trajectory, times: np.ndarray) -> np.ndarray:
    """u ↦ F(u, I_u γ) at each time; DomainExit names the first failing time."""
    out = np.empty((len(times), F.n))
    for k, u in enumerate(times):
        u = float(u)
        view = HistoryView(prolongation, u)
        try:
            if not F.in_domain(u, view):
                raise DomainExitError(t=u, reason="outside dom F")
            out[k] = F(u, view)
        except EvalError as exc:
            raise DomainExitError(t=u, reason=f"evaluation failed: {exc.kind}") from exc
        except (DelayExceedsIntervalError, OutOfDomainError) as exc:
            raise DomainExitError(t=u, reason=str(exc)) from exc
        if not np.all(np.isfinite(out[k])):
            raise DomainExitError(t=u, reason="non-finite value")
    return out


def picard_apply(F: HistoryFunctional, sigma: float, psi: History, gamma: Segment) -> Segment:
    """(𝒯γ)(t) = ψ(0) + ∫_σ^t F(u, I_uγ) du on γ's grid."""
    prolongation = Trajectory(psi, sigma, (gamma,))
    d_nodes = integrand(F, prolongation, gamma.nodes)
    d_mids = integrand(F, prolongation, gamma.midpoints)
    increments = (gamma.h / 6.0) * (d_nodes[:-1] + 4.0 * d_mids + d_nodes[1:])
    values = np.empty_like(d_nodes)
    values[0] = psi.at_zero()
    values[1:] = values[0][None, :] + np.cumsum(increments, axis=0)
    return gamma.with_data(values, d_nodes)


def normalized_picard_apply(
    F: HistoryFunctional,
    sigma: float,
    psi: History,
    beta: Segment,
    v: np.ndarray | None = None,
) -> Segment:
    """𝒮¹β = N(𝒯(Aβ)) for β on [0, T] with β(0) = 0."""
    if v is None:
        v = F(sigma, psi)
    return normalize_N(sigma, psi, v, picard_apply(F, sigma, psi, add_A(sigma, psi, v, beta)))
