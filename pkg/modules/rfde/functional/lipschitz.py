"""Sampled estimators for the Lipschitz conditions on F and constancy of delays.

All values are maxima over finitely many admissible pairs, i.e. lower bounds
on the true local constants.
"""

from __future__ import annotations

import logging

import numpy as np

from modules.rfde.core.history import History, history_sum
from modules.rfde.core.metrics import sup_norm_diff
from modules.rfde.errors import DelayExceedsIntervalError, EvalError, NoValidPairsError, OutOfDomainError
from modules.rfde.functional.dto import DelayFunctional, HistoryFunctional, LipschitzEstimate
from modules.rfde.functional.sampling import LipschitzMode, PairSample, draw_pair
from modules.rfde.transforms.bumps import touching_ramp
from modules.rfde.utils.worker_pool import map_ordered, worker_context

logger = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-12
_SKIPPABLE = (EvalError, DelayExceedsIntervalError, OutOfDomainError, FloatingPointError)


def _pair_ratio(F: HistoryFunctional, pair: PairSample) -> tuple[float, float, float] | None:
    try:
        if not (F.in_domain(pair.t, pair.phi1) and F.in_domain(pair.t, pair.phi2)):
            return None
        f1 = F(pair.t, pair.phi1)
        f2 = F(pair.t, pair.phi2)
    except _SKIPPABLE:
        return None
    den = sup_norm_diff(pair.phi1, pair.phi2, pair.window)
    if not den > DENOMINATOR_FLOOR:
        return None
    num = float(np.max(np.abs(f1 - f2)))
    if not np.isfinite(num):
        return None
    return num / den, num, den


def draw_pairs(
    mode: LipschitzMode,
    base: tuple[float, History],
    T: float,
    delta: float,
    samples: int,
    seed: int,
    slope: np.ndarray | None = None,
) -> list[PairSample]:
    rng = np.random.default_rng(seed)
    return [draw_pair(mode, base, T, delta, rng, slope=slope) for _ in range(samples)]


def _reduce(
    mode: LipschitzMode,
    pairs: list[PairSample],
    scored: list[tuple[float, float, float] | None],
    samples: int,
) -> LipschitzEstimate:
    best: tuple[float, float, float] | None = None
    best_pair: PairSample | None = None
    valid = 0
    for pair, score in zip(pairs, scored):
        if score is None:
            continue
        valid += 1
        if best is None or score[0] > best[0]:
            best, best_pair = score, pair
    if best is None or best_pair is None:
        raise NoValidPairsError(mode=mode.label(), samples=samples)
    return LipschitzEstimate(
        mode=mode.label(),
        value=best[0],
        samples=valid,
        drawn=samples,
        params=mode.params(),
        max_pair={"t": best_pair.t, "numerator": best[1], "denominator": best[2], **best_pair.info},
    )


def score_pairs(
    F: HistoryFunctional,
    mode: LipschitzMode,
    pairs: list[PairSample],
    *,
    threads: int | None = 1,
) -> LipschitzEstimate:
    """Estimate over a given pair set, e.g. the union of two modes' samples."""
    scored = map_ordered(lambda pair: _pair_ratio(F, pair), pairs, threads)
    return _reduce(mode, pairs, scored, len(pairs))


def estimate_lipschitz(
    F: HistoryFunctional,
    base: tuple[float, History],
    mode: LipschitzMode,
    T: float,
    delta: float,
    samples: int,
    seed: int,
    *,
    threads: int | None = 1,
) -> LipschitzEstimate:
    """max ‖F(t,φ₁) − F(t,φ₂)‖∞ / ‖φ₁ − φ₂‖∞ over ``samples`` pairs of the mode."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    sigma, psi = base
    slope = F(sigma, psi) if mode.needs_slope else None
    pairs = draw_pairs(mode, base, T, delta, samples, seed, slope)
    with worker_context(estimator=mode.label(), seed=seed):
        estimate = score_pairs(F, mode, pairs, threads=threads)
    logger.debug(
        "[lipschitz] %s at σ=%.6g: L̂=%.6g from %d/%d pairs",
        estimate.mode,
        sigma,
        estimate.value,
        estimate.samples,
        samples,
    )
    return estimate


def estimate_uniform_lipschitz(
    F: HistoryFunctional,
    base: tuple[float, History],
    mode: LipschitzMode,
    T: float,
    delta: float,
    base_radius: float,
    n_bases: int,
    samples: int,
    seed: int,
    *,
    threads: int | None = 1,
) -> LipschitzEstimate:
    """Max of :func:`estimate_lipschitz` over the base and ``n_bases`` points of a ball around it."""
    sigma, psi = base
    rng = np.random.default_rng(seed)
    bases: list[tuple[float, History]] = [base]
    for _ in range(n_bases):
        shift = float(rng.uniform(-base_radius, base_radius))
        ramp = touching_ramp(psi.interval, psi.n, 1.0, rng).scaled(base_radius * float(rng.uniform(0.0, 1.0)))
        bases.append((sigma + shift, history_sum(psi, ramp)))

    best: LipschitzEstimate | None = None
    best_index = -1
    total = 0
    for k, (s, p) in enumerate(bases):
        try:
            if not F.in_domain(s, p):
                continue
            est = estimate_lipschitz(F, (s, p), mode, T, delta, samples, seed + k + 1, threads=threads)
        except (NoValidPairsError, *_SKIPPABLE) as exc:
            logger.debug("[lipschitz] base %d skipped: %s", k, exc)
            continue
        total += est.samples
        if best is None or est.value > best.value:
            best, best_index = est, k
    if best is None:
        raise NoValidPairsError(mode=mode.label(), samples=samples * len(bases))
    return LipschitzEstimate(
        mode=f"Uniform[{mode.label()}]",
        value=best.value,
        samples=total,
        drawn=samples * len(bases),
        params={**mode.params(), "base_radius": base_radius, "n_bases": n_bases},
        max_pair={**best.max_pair, "base_index": best_index, "base_time": bases[best_index][0]},
    )


def check_constancy_about_memories(
    tau: DelayFunctional,
    base: tuple[float, History],
    R: float,
    samples: int,
    seed: int,
    *,
    T: float = 0.25,
    delta: float = 1.0,
    threads: int | None = 1,
) -> float:
    """max |τ(t, φ₁) − τ(t, φ₂)| over pairs whose difference is supported in [−R, 0]."""
    if R <= 0:
        raise ValueError(f"R must be positive, got {R!r}")
    _, psi = base
    if not psi.interval.is_point and R > psi.interval.length + 1e-12:
        raise ValueError(f"window [-{R:g}, 0] is not inside {psi.interval.label()}")
    mode = LipschitzMode.about_memories(R)
    pairs = draw_pairs(mode, base, T, delta, samples, seed)

    def deviation(pair: PairSample) -> float | None:
        try:
            if not (tau.in_domain(pair.t, pair.phi1) and tau.in_domain(pair.t, pair.phi2)):
                return None
            return abs(tau(pair.t, pair.phi1) - tau(pair.t, pair.phi2))
        except _SKIPPABLE:
            return None

    with worker_context(estimator="constancy_about_memories", seed=seed):
        values = [v for v in map_ordered(deviation, pairs, threads) if v is not None]
    if not values:
        raise NoValidPairsError(mode=mode.label(), samples=samples)
    return float(max(values))

