from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from modules.rfde.core import InitialHistory, PastInterval, Segment, history_sum, sup_norm, zero_history
from modules.rfde.errors import AnchorMismatchError
from modules.rfde.transforms import (
    C0,
    C1,
    constant_extend,
    HORIZON_EXCEEDED,
    NORM_TOO_LARGE,
    SUPPORT_TOO_WIDE,
    WHOLE_SCAN_WINDOW,
    BumpHistory,
    BumpTerm,
    RectangleSpec,
    add_A,
    in_rectangle,
    interior_bump,
    normalize_N,
    prolongation_history,
    random_memory_bump,
    random_prolongation,
    touching_ramp,
    translate,
    translate_inv,
    trivial_flow,
    wedge_extend,
)

INTERVAL = PastInterval.compact(1.0)


@pytest.fixture
def psi():
    return InitialHistory.closed_form(
        lambda th: np.column_stack([np.cos(th), 1.0 + th]),
        INTERVAL,
        2,
        dfunc=lambda th: np.column_stack([-np.sin(th), np.ones_like(th)]),
    )


def test_wedge_extension_is_affine_after_zero(psi):
    traj = wedge_extend(psi, [1.0, -2.0], span=2.0)
    assert_allclose(traj.value_at(1.5), [1.0 + 1.5, 1.0 - 3.0])
    assert_allclose(traj.value_at(-0.5), psi(-0.5))
    with pytest.raises(ValueError):
        wedge_extend(psi, [1.0])


def test_constant_extension_is_flat(psi):
    traj = constant_extend(psi, span=1.0)
    assert_allclose(traj.value_at(0.8), psi.at_zero())
    assert_allclose(traj.derivative_at(0.8), [0.0, 0.0])


def test_trivial_flow_shifts_the_history(psi):
    v = np.array([0.5, -1.0])
    t = 0.4
    flowed = trivial_flow(t, v, psi)
    assert_allclose(flowed(-0.8), psi(-0.4), atol=1e-15)
    assert_allclose(flowed(-t), psi(0.0), atol=1e-15)
    assert_allclose(flowed(0.0), psi(0.0) + t * v, atol=1e-13)
    with pytest.raises(ValueError):
        trivial_flow(-0.1, v, psi)


def test_translation_round_trip(psi):
    v = np.array([1.0, 0.0])
    phi = touching_ramp(INTERVAL, 2, 0.3, np.random.default_rng(3)).scaled(0.2)
    t_tilde, phi_tilde = translate(0.5, psi, v, 0.2, phi)
    assert t_tilde == pytest.approx(0.7)
    t_back, phi_back = translate_inv(0.5, psi, v, t_tilde, phi_tilde)
    assert t_back == pytest.approx(0.2)
    theta = np.linspace(-1.0, 0.0, 21)
    assert_allclose(phi_back(theta), phi(theta), atol=1e-14)


def test_normalization_inverts_the_affine_shift(psi):
    v = np.array([0.3, -0.7])
    beta = Segment.from_function(
        0.0, 0.25, 4, lambda s: np.column_stack([s * s, -s**3]), lambda s: np.column_stack([2 * s, -3 * s * s])
    )
    gamma = add_A(1.0, psi, v, beta)
    assert gamma.t_start == 1.0
    assert_allclose(gamma.values[0], psi.at_zero())
    back = normalize_N(1.0, psi, v, gamma)
    assert_allclose(back.values, beta.values, atol=1e-14)
    assert_allclose(back.derivatives, beta.derivatives, atol=1e-14)


def test_add_A_requires_vanishing_start(psi):
    beta = Segment.line(0.0, 0.25, [0.1, 0.0], [0.0, 0.0])
    with pytest.raises(AnchorMismatchError):
        add_A(0.0, psi, np.zeros(2), beta)


@pytest.mark.parametrize("seed", range(10))
def test_sampled_c1_prolongations_stay_in_the_rectangle(psi, seed):
    v = np.array([-1.0, 0.5])
    rect = RectangleSpec(0.0, psi, 0.25, 1.0, C1, v)
    gamma = random_prolongation(rect, 0.2, seed)
    assert gamma.t_start == 0.0 and gamma.t_end == pytest.approx(0.2)
    assert_allclose(gamma.values[0], psi.at_zero())
    assert_allclose(gamma.derivatives[0], v, atol=1e-12)
    phi = prolongation_history(0.0, psi, gamma)
    verdict = in_rectangle(rect, 0.2, phi)
    assert verdict, verdict.reason


def test_rectangle_rejections():
    psi = InitialHistory.constant(1.0, INTERVAL)
    rect = RectangleSpec(0.0, psi, 0.25, 0.1, C0)
    base = trivial_flow(0.1, [0.0], psi)
    rng = np.random.default_rng(0)

    assert in_rectangle(rect, 0.5, base).reason == HORIZON_EXCEEDED
    assert in_rectangle(rect, 0.1, base)

    tall = history_sum(base, touching_ramp(INTERVAL, 1, 0.1, rng).scaled(0.5))
    assert in_rectangle(rect, 0.1, tall).reason == NORM_TOO_LARGE

    wide = history_sum(base, touching_ramp(INTERVAL, 1, 0.8, rng).scaled(0.01))
    assert in_rectangle(rect, 0.1, wide).reason == SUPPORT_TOO_WIDE


@pytest.mark.parametrize("interval", [PastInterval.compact(10.0), PastInterval.whole()], ids=["compact", "whole"])
def test_far_back_difference_is_outside_the_rectangle(interval):
    psi = zero_history(interval, 1)
    rect = RectangleSpec(0.0, psi, 0.25, 1.0, C0)
    far = BumpHistory(interval, 1, (BumpTerm("bump", -5.0, -4.0, (0.05,)),))
    phi = history_sum(trivial_flow(0.2, [0.0], psi), far)

    verdict = in_rectangle(rect, 0.2, phi)
    assert verdict.reason == SUPPORT_TOO_WIDE
    assert verdict.measured["support_lower"] < -4.0
    expected = 10.0 if interval.kind == "compact" else WHOLE_SCAN_WINDOW
    assert verdict.measured["scan_window"] == expected
    # a window that stops short of the bump does not see it
    assert in_rectangle(rect, 0.2, phi, scan_window=3.0)


@pytest.mark.parametrize("seed", range(10))
def test_c1_members_are_c0_members(psi, seed):
    rect = RectangleSpec(0.0, psi, 0.25, 0.5, C1, np.zeros(2))
    phi = prolongation_history(0.0, psi, random_prolongation(rect, 0.2, seed))
    assert in_rectangle(rect, 0.2, phi)
    verdict = in_rectangle(RectangleSpec(0.0, psi, 0.25, 0.5, C0), 0.2, phi)
    assert verdict, verdict.reason


@pytest.mark.parametrize("seed", range(10))
def test_translation_moves_members_to_the_new_base(psi, seed):
    zero = zero_history(INTERVAL, 2)
    origin = RectangleSpec(0.0, zero, 0.25, 0.5, C0)
    phi = prolongation_history(0.0, zero, random_prolongation(origin, 0.2, seed))
    assert in_rectangle(origin, 0.2, phi)

    t_tilde, phi_tilde = translate(0.7, psi, np.zeros(2), 0.2, phi)
    verdict = in_rectangle(RectangleSpec(0.7, psi, 0.25, 0.5, C0), t_tilde, phi_tilde)
    assert verdict, verdict.reason


@pytest.mark.parametrize("order", [C0, C1])
def test_rectangles_grow_with_horizon_and_radius(psi, order):
    v = np.array([-1.0, 0.5]) if order == C1 else None
    rect = RectangleSpec(0.0, psi, 0.25, 0.5, order, v)
    for seed in range(5):
        phi = prolongation_history(0.0, psi, random_prolongation(rect, 0.2, seed))
        assert in_rectangle(rect, 0.2, phi)
        assert in_rectangle(rect.widened(horizon=0.5), 0.2, phi)
        assert in_rectangle(rect.widened(radius=1.0), 0.2, phi)
        assert in_rectangle(rect.widened(horizon=0.5, radius=1.0), 0.2, phi)


def test_touching_ramp_and_interior_bump():
    rng = np.random.default_rng(1)
    ramp = touching_ramp(INTERVAL, 3, 0.5, rng)
    assert_allclose(np.abs(ramp(0.0)), 1.0)
    assert_allclose(ramp.derivative(0.0), 0.0)
    assert_array_equal(ramp(-0.75), np.zeros(3))

    bump = interior_bump(INTERVAL, 1, 0.5, rng)
    assert_allclose(bump(0.0), [0.0], atol=1e-15)
    assert sup_norm(bump) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        interior_bump(PastInterval.point(), 1, 0.5, rng)


def test_random_memory_bump_respects_window_and_amplitude():
    rng = np.random.default_rng(7)
    for _ in range(20):
        bump = random_memory_bump(INTERVAL, 2, 0.4, 0.3, rng)
        theta = np.linspace(-1.0, -0.4, 13)
        assert_array_equal(bump(theta), np.zeros((13, 2)))
        assert sup_norm(bump) <= 0.3 + 1e-12
        assert bump.support_lower >= -0.4


def test_point_interval_ramp_is_a_vector():
    ramp = touching_ramp(PastInterval.point(), 2, 1.0, np.random.default_rng(0)).scaled(0.1)
    assert_allclose(np.abs(ramp.at_zero()), 0.1)
    assert sup_norm(history_sum(zero_history(PastInterval.point(), 2), ramp)) == pytest.approx(0.1)
