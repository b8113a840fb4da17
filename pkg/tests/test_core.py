"""History core: intervals, Hermite segments, histories, trajectories, metrics, CSV export."""
from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from modules.rfde.core import (
    InitialHistory,
    PastInterval,
    Segment,
    Trajectory,
    dense_samples,
    derivative_at,
    eval_history,
    eval_trajectory,
    extends,
    history_at,
    history_difference,
    history_scale,
    history_sum,
    join,
    lip_const,
    read_trajectory_csv,
    restrict,
    rho0,
    rho1,
    sup_norm,
    sup_norm_diff,
    support_of_difference,
    write_trajectory_csv,
    zero_history,
)
from modules.rfde.core.history import Sampled
from modules.rfde.errors import AnchorMismatchError, OutOfDomainError, SpanMismatchError
from modules.rfde.transforms import touching_ramp


def _line_trajectory() -> Trajectory:
    # x ≡ 1 before 0, x(t) = 1 + 2t on [0, 1]
    return Trajectory(InitialHistory.constant(1.0, PastInterval.compact(1.0)), 0.0, (Segment.line(0.0, 1.0, [1.0], [2.0], 4),))


# ---- intervals ----

def test_past_interval_kinds():
    assert PastInterval.compact(2.0).lower == -2.0
    assert PastInterval.whole().lower == -np.inf
    assert PastInterval.point().is_point
    assert PastInterval.compact(1.0).window(0.5) == (-0.5, 0.0)
    assert PastInterval.compact(1.0).window(5.0) == (-1.0, 0.0)
    assert PastInterval.point().window(1.0) == (0.0, 0.0)
    assert PastInterval.compact(1.5).label() == "compact(1.5)"


def test_past_interval_rejects_bad_radius():
    with pytest.raises(ValueError):
        PastInterval.compact(0.0)
    with pytest.raises(ValueError):
        PastInterval.whole().window(None)


# ---- segments ----

def test_hermite_segment_reproduces_cubics():
    seg = Segment.from_function(0.0, 1.0, 4, lambda s: (s**3)[:, None], lambda s: (3 * s**2)[:, None])
    ts = np.linspace(0.0, 1.0, 37)
    assert_allclose(seg.value_at(ts)[:, 0], ts**3, atol=1e-14)
    assert_allclose(seg.derivative_at(ts)[:, 0], 3 * ts**2, atol=1e-13)


def test_segment_returns_stored_node_data():
    values = np.array([[0.0], [0.3], [-1.0]])
    derivs = np.array([[1.0], [2.0], [3.0]])
    seg = Segment(0.0, 1.0, values, derivs)
    assert_array_equal(seg.value_at(seg.nodes), values)
    assert_array_equal(seg.derivative_at(seg.nodes), derivs)


def test_segment_out_of_range_raises():
    seg = Segment.line(0.0, 1.0, [0.0], [1.0])
    with pytest.raises(OutOfDomainError):
        seg.value_at(1.5)
    with pytest.raises(ValueError):
        Segment(1.0, 1.0, [[0.0], [0.0]], [[0.0], [0.0]])


# ---- histories ----

def test_constant_history_and_domain():
    phi = InitialHistory.constant([1.0, -2.0], PastInterval.compact(1.0))
    assert_array_equal(phi(-0.5), [1.0, -2.0])
    assert_array_equal(phi.derivative(-0.5), [0.0, 0.0])
    with pytest.raises(OutOfDomainError):
        phi(-1.5)
    with pytest.raises(OutOfDomainError):
        phi(0.1)


def test_closed_form_derivative_falls_back_to_differences():
    phi = InitialHistory.closed_form(lambda th: np.sin(th)[:, None], PastInterval.compact(1.0), 1)
    theta = np.array([-1.0, -0.5, 0.0])
    assert_allclose(phi.derivative(theta)[:, 0], np.cos(theta), atol=1e-7)
    assert_allclose(phi.derivative_at_zero_minus, [1.0], atol=1e-7)


def test_sampled_history_must_span_the_interval():
    seg = Segment.line(-1.0, 0.0, [0.0], [1.0], 8)
    phi = InitialHistory.sampled(seg)
    assert phi.interval == PastInterval.compact(1.0)
    assert_allclose(phi(-0.25), [0.75])
    short = Segment.line(-0.5, 0.0, [0.0], [1.0], 4)
    with pytest.raises(ValueError):
        InitialHistory(interval=PastInterval.compact(1.0), body=Sampled(short), n=1)


def test_linear_combinations_of_histories():
    interval = PastInterval.compact(1.0)
    a = InitialHistory.closed_form(lambda th: th[:, None], interval, 1, dfunc=lambda th: np.ones((len(th), 1)))
    b = InitialHistory.constant(2.0, interval)
    theta = np.linspace(-1.0, 0.0, 5)
    assert_allclose(history_sum(a, b)(theta)[:, 0], theta + 2.0)
    assert_allclose(history_difference(a, b)(theta)[:, 0], theta - 2.0)
    assert_allclose(history_scale(3.0, a).derivative(theta)[:, 0], 3.0)
    assert sup_norm(zero_history(interval, 2)) == 0.0


# ---- trajectories ----

def test_trajectory_dispatches_past_and_segments():
    traj = _line_trajectory()
    assert traj.t_end == 1.0
    assert_allclose(traj.value_at(-0.5), [1.0])
    assert_allclose(traj.value_at(0.5), [2.0])
    assert_allclose(traj.derivative_at(0.5), [2.0])
    with pytest.raises(OutOfDomainError):
        traj.value_at(1.5)


def test_trajectory_rejects_gaps():
    phi = InitialHistory.constant(1.0, PastInterval.compact(1.0))
    with pytest.raises(ValueError):
        Trajectory(phi, 0.0, (Segment.line(0.5, 1.0, [1.0], [0.0]),))


def test_history_view_reads_back_in_time():
    view = history_at(_line_trajectory(), 1.0)
    assert_allclose(view(0.0), [3.0])
    assert_allclose(view(-0.5), [2.0])
    assert_allclose(view(-1.0), [1.0])
    with pytest.raises(OutOfDomainError):
        history_at(_line_trajectory(), 2.0)


def test_restrict_and_extension_order():
    traj = _line_trajectory()
    short = restrict(traj, 0.6)
    assert short.t_end == pytest.approx(0.6)
    assert_allclose(short.value_at(0.6), [2.2])
    assert extends(short, traj)
    assert not extends(traj, short)


def test_join_checks_history_and_derivative():
    first = _line_trajectory()
    restart = Trajectory(history_at(first, 1.0), 1.0, (Segment.line(1.0, 2.0, [3.0], [2.0], 4),))
    joined = join(first, restart)
    assert joined.t_end == 2.0
    assert_allclose(joined.value_at(1.5), [4.0])

    kinked = Trajectory(history_at(first, 1.0), 1.0, (Segment.line(1.0, 2.0, [3.0], [0.0], 4),))
    with pytest.raises(AnchorMismatchError):
        join(first, kinked)
    unrelated = Trajectory(InitialHistory.constant(0.0, PastInterval.compact(1.0)), 1.0)
    with pytest.raises(AnchorMismatchError):
        join(first, unrelated)


# ---- metrics ----

def test_sup_norms_and_lipschitz_constant():
    interval = PastInterval.compact(1.0)
    sine = InitialHistory.closed_form(lambda th: np.sin(th)[:, None], interval, 1, dfunc=lambda th: np.cos(th)[:, None])
    assert sup_norm(InitialHistory.constant(-2.0, interval)) == 2.0
    assert sup_norm_diff(sine, zero_history(interval, 1)) == pytest.approx(np.sin(1.0))
    ramp = InitialHistory.closed_form(lambda th: 3.0 * th[:, None], interval, 1)
    assert lip_const(ramp) == pytest.approx(3.0)


def test_rho_metrics_need_matching_grids():
    a = Segment.line(0.0, 1.0, [0.0], [1.0], 2)
    b = Segment.line(0.0, 1.0, [0.0], [0.0], 2)
    assert rho0(a, b) == pytest.approx(1.0)
    assert rho1(a, b) == pytest.approx(2.0)
    with pytest.raises(SpanMismatchError):
        rho1(a, Segment.line(0.0, 1.0, [0.0], [0.0], 4))


def test_support_of_difference_finds_ramp_support():
    interval = PastInterval.compact(1.0)
    ramp = touching_ramp(interval, 1, 0.5, np.random.default_rng(0))
    lower, upper = support_of_difference(ramp, zero_history(interval, 1))
    assert upper == 0.0
    assert -0.5 < lower <= -0.46
    assert support_of_difference(ramp, ramp) is None


# ---- export ----

def test_trajectory_csv_export(tmp_path):
    path = write_trajectory_csv(_line_trajectory(), tmp_path / "line.csv", dense=4)
    frame = read_trajectory_csv(path)
    assert list(frame.columns) == ["t", "x0", "dx0"]
    assert_allclose(frame["t"], [0.0, 0.25, 0.5, 0.75, 1.0])
    assert_allclose(frame["x0"], [1.0, 1.5, 2.0, 2.5, 3.0])
    assert_allclose(frame["dx0"], 2.0)


def test_functional_accessors():
    traj = _line_trajectory()
    assert_allclose(eval_trajectory(traj, 0.25), [1.5])
    assert_allclose(derivative_at(traj, 0.25), [2.0])
    assert_allclose(eval_history(history_at(traj, 0.5), -0.25), [1.5])
    times, values, derivs = dense_samples(traj, 2)
    assert_allclose(times, [0.0, 0.5, 1.0])
    assert_allclose(values[:, 0], [1.0, 2.0, 3.0])
    assert_allclose(derivs[:, 0], 2.0)
