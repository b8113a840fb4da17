from __future__ import annotations

import logging

import numpy as np

from modules.rfde.core.history import InitialHistory
from modules.rfde.core.intervals import PastInterval
from modules.rfde.core.metrics import probe_grid, sup_norm, window_of
from modules.rfde.functional.sampling import sinusoid_history
from modules.rfde.transforms.wedge import trivial_flow
from modules.rfde.utils.worker_pool import map_ordered, worker_context
from modules.rfde.wellposedness.dto import ProbeReport

logger = logging.getLogger(__name__)

SEMIFLOW_SLACK = 1e-9
TIGHT_TOL = 1e-12
_V_RANGE = 2.0


def _sample(interval: PastInterval, n: int, T: float, seed: int) -> tuple[float, np.ndarray, InitialHistory]:
    rng = np.random.default_rng(seed)
    t = T * float(rng.random())
    v = rng.uniform(-_V_RANGE, _V_RANGE, size=n)
    constant = InitialHistory.constant(rng.uniform(-1.0, 1.0, size=n), interval)
    if interval.is_point or rng.random() < 0.25:
        return t, v, constant
    return t, v, sinusoid_history(constant, float(rng.uniform(0.0, 3.0)), rng)


def probe_semiflow(
    interval: PastInterval,
    k: float,
    T: float,
    samples: int = 1000,
    seed: int = 0,
    *,
    n: int = 1,
    threads: int = 1,
) -> ProbeReport:
    """‖S(t)(v, φ)‖_{C[−k,0]} ≤ ‖φ‖_{C[−k,0]} + T‖v‖ for sampled t ∈ [0, T], v and φ.

    A constant history moving along its own direction makes the bound tight at t = T;
    that deterministic case is checked for equality alongside the random samples.
    """
    if T <= 0 or k <= 0:
        raise ValueError(f"semiflow probe needs T > 0 and k > 0, got T={T!r}, k={k!r}")
    window = (-k, 0.0)
    seeds = np.random.default_rng(seed).integers(2**63 - 1, size=samples)

    def excess(sample_seed: int) -> float:
        t, v, phi = _sample(interval, n, T, int(sample_seed))
        flowed = trivial_flow(t, v, phi)
        lower, upper = window_of(flowed, window)
        grid = probe_grid((flowed,), lower, upper)
        lhs = float(np.max(np.abs(flowed(grid))))
        # φ is read on its own grid and on every point the flowed view looked back to
        shifted = grid[grid + t <= 0.0] + t
        reference = np.unique(np.concatenate([probe_grid((phi,), lower, upper), shifted]))
        rhs = float(np.max(np.abs(phi(reference)))) + T * float(np.max(np.abs(v)))
        return lhs - rhs

    with worker_context(probe="semiflow", seed=seed):
        excesses = map_ordered(excess, list(seeds), threads)

    c, v = np.ones(n), np.ones(n)
    tight = trivial_flow(T, v, InitialHistory.constant(c, interval))
    tight_gap = abs(sup_norm(tight, window) - (1.0 + T))

    worst = max(excesses, default=-np.inf)
    passed = worst <= SEMIFLOW_SLACK and tight_gap <= TIGHT_TOL
    logger.info("[probe] semiflow worst excess %.3g over %d samples", worst, samples)
    return ProbeReport(
        "semiflow",
        passed,
        {
            "max_excess": float(worst) if excesses else 0.0,
            "slack": SEMIFLOW_SLACK,
            "tight_gap": tight_gap,
            "k": k,
            "T": T,
        },
        samples=samples,
        seed=seed,
    )
