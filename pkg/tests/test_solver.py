"""Picard steps, maximal continuation and the reference oracles."""
from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import constant_lag_exact
from modules.rfde.core import InitialHistory, PastInterval, Segment, history_at
from modules.rfde.errors import EscapeBeforeTauError, MethodInapplicableError
from modules.rfde.functional import HistoryFunctional, build_ode, build_state_delay, build_state_dependent, build_trivial
from modules.rfde.solver import (
    BLOW_UP,
    DOMAIN_EXIT,
    HORIZON_REACHED,
    STEP_COLLAPSE,
    EscapeReport,
    SolveOptions,
    choose_horizon,
    closed_form_trajectory,
    continue_maximal,
    lattice_step,
    pantograph_series,
    pantograph_trajectory,
    picard_apply,
    reachable_span,
    solution_process,
    solve_local,
    step_method_solve,
)

H = 1.0 / 64


# ---- horizon rule and grid ----

def test_choose_horizon_takes_the_smallest_bound():
    assert choose_horizon(1.0, 0.0, 1.0, 0.25) == 0.25
    assert choose_horizon(10.0, 0.0, 1.0, 0.25) == pytest.approx(0.025)
    assert choose_horizon(1.0, 100.0, 1.0, 0.25) == pytest.approx(0.0025)
    # zero bounds are floored rather than divided by
    assert choose_horizon(0.0, 0.0, 1.0, 0.5) == 0.5


def test_reachable_span():
    assert reachable_span(np.array([2.0]), 1.0, 0.25) == pytest.approx(0.125)
    assert reachable_span(np.array([0.0, -0.5]), 1.0, 0.25) == 0.25


@pytest.mark.parametrize(
    "sigma, span, t_limit, expected",
    [
        (0.0, 0.25, None, (0.25, 16)),
        (0.25, 0.2, None, (28 * H, 12)),
        (0.7, 0.25, None, (45 * H, 1)),
        (0.0, 0.001, None, (0.001, 1)),
        (0.5, 0.25, 0.7, (0.7, 13)),
    ],
)
def test_lattice_step(sigma, span, t_limit, expected):
    t_end, cells = lattice_step(sigma, span, H, t_limit)
    assert t_end == pytest.approx(expected[0], abs=1e-15)
    assert cells == expected[1]


# ---- one step ----

def test_picard_apply_integrates_a_constant_field():
    F = build_trivial([1.0, -0.5])
    psi = InitialHistory.constant([0.0, 1.0], PastInterval.compact(1.0))
    gamma = Segment.line(0.0, 0.5, [0.0, 1.0], [0.0, 0.0], 8)
    out = picard_apply(F, 0.0, psi, gamma)
    assert_allclose(out.values, np.column_stack([out.nodes, 1.0 - 0.5 * out.nodes]), atol=1e-15)
    assert_allclose(out.derivatives, np.tile([1.0, -0.5], (9, 1)))


def test_solve_local_first_lag_interval(constant_lag, opts):
    F, phi0, _ = constant_lag
    segment, diag = solve_local(F, 0.0, phi0, opts)
    assert segment.t_end == pytest.approx(0.25)
    assert segment.n_cells == 16
    assert_allclose(segment.values[:, 0], 1.0 - segment.nodes, atol=1e-15)
    assert diag.picard_iterations <= 3
    assert diag.residual <= opts.fixed_point_tol

    pinned, pinned_diag = solve_local(F, 0.0, phi0, opts, fixed_grid=(0.5, 8))
    assert pinned.t_end == 0.5 and pinned.n_cells == 8
    assert pinned_diag.halvings == 0


# ---- maximal continuation against the oracles ----

def test_constant_lag_matches_step_method_and_closed_form(constant_lag, opts):
    F, phi0, _ = constant_lag
    traj, report = continue_maximal(F, phi0, 0.0, 3.0, opts)
    assert report.cause == HORIZON_REACHED and report.t_escape is None
    assert traj.t_end == pytest.approx(3.0)

    oracle = step_method_solve(lambda t, x, y: -y, 1.0, phi0, 0.0, 3.0, H)
    ts = np.linspace(0.0, 3.0, 193)
    assert np.max(np.abs(traj.value_at(ts) - oracle.value_at(ts))) <= 1e-6
    assert_allclose(traj.value_at(ts)[:, 0], constant_lag_exact(ts), atol=1e-9)
    assert traj.value_at(1.0)[0] == pytest.approx(0.0, abs=1e-7)
    assert traj.value_at(2.0)[0] == pytest.approx(-0.5, abs=1e-7)
    assert report.summary()["max_contraction_ratio"] <= 0.55
    assert traj.junction_mismatch() <= 1e-9


def test_pantograph_matches_its_series(pantograph, opts):
    F, phi0, _ = pantograph
    traj, report = continue_maximal(F, phi0, 0.0, 2.0, opts)
    assert not report.escaped
    ts = np.linspace(0.0, 2.0, 129)
    series = pantograph_series(1.0, 0.0, 0.5, 1.0, ts, n_terms=50)
    assert np.max(np.abs(traj.value_at(ts)[:, 0] - series) / np.abs(series)) <= 1e-6
    assert report.summary()["max_contraction_ratio"] <= 0.55


def test_restart_from_an_intermediate_history(pantograph, opts):
    F, phi0, _ = pantograph
    one_shot, _ = continue_maximal(F, phi0, 0.0, 1.5, opts)
    short, _ = continue_maximal(F, phi0, 0.0, 0.7, opts)
    restart, report = continue_maximal(F, history_at(short, 0.7), 0.7, 1.5, opts)
    assert report.cause == HORIZON_REACHED

    before, after = np.linspace(0.0, 0.7, 57), np.linspace(0.7, 1.5, 65)
    assert np.max(np.abs(short.value_at(before) - one_shot.value_at(before))) <= 1e-7
    assert np.max(np.abs(restart.value_at(after) - one_shot.value_at(after))) <= 1e-7


def test_pantograph_error_is_fourth_order_in_the_grid(pantograph):
    F, phi0, _ = pantograph
    ts = np.linspace(0.0, 1.0, 9)
    exact = pantograph_series(1.0, 0.0, 0.5, 1.0, ts, n_terms=50)
    errors = []
    for per_unit in (8, 16, 32):
        traj, report = continue_maximal(F, phi0, 0.0, 1.0, SolveOptions(grid_nodes_per_unit=per_unit))
        assert report.cause == HORIZON_REACHED
        errors.append(float(np.max(np.abs(traj.value_at(ts)[:, 0] - exact))))
    # h⁴ gives a factor 16 per halving
    assert errors[0] / errors[1] >= 10.0
    assert errors[1] / errors[2] >= 10.0


def test_trivial_functional_is_exact_on_nodes(opts):
    v = np.array([1.0, -0.5])
    phi0 = InitialHistory.constant([0.0, 1.0], PastInterval.compact(1.0))
    traj, report = continue_maximal(build_trivial(v), phi0, 0.0, 2.0, opts)
    assert report.cause == HORIZON_REACHED
    for seg in traj.segments:
        assert_allclose(seg.values, phi0.at_zero() + seg.nodes[:, None] * v, atol=1e-13)


@pytest.mark.slow
def test_quadratic_ode_escapes_before_its_pole(quadratic_ode):
    F, phi0, opts = quadratic_ode
    traj, report = continue_maximal(F, phi0, 0.0, 1.5, opts)
    assert report.escaped
    assert report.cause in (BLOW_UP, STEP_COLLAPSE)
    assert 0.99 <= report.t_escape <= 1.0
    assert traj.value_at(0.5)[0] == pytest.approx(2.0, rel=1e-6)


@pytest.mark.slow
def test_quadratic_ode_escapes_with_default_options():
    # sampled L and M only, no user constant; takes minutes
    point = PastInterval.point()
    F = build_ode(lambda t, x: x * x, 1, point)
    _, report = continue_maximal(F, InitialHistory.constant(1.0, point), 0.0, 1.5, SolveOptions())
    assert report.escaped
    assert report.cause in (BLOW_UP, STEP_COLLAPSE)
    assert 0.99 <= report.t_escape <= 1.0


@pytest.mark.slow
def test_state_dependent_delay_converges_under_refinement():
    interval = PastInterval.compact(1.25)
    tau = build_state_delay(lambda t, x: 1.0 + 0.25 * math.tanh(x[0]), interval)
    F = build_state_dependent(lambda t, x, y: -y, tau, 1)
    phi0 = InitialHistory.constant(1.0, interval)

    runs = {}
    for per_unit in (128, 256):
        opts = SolveOptions(grid_nodes_per_unit=per_unit)
        traj, report = continue_maximal(F, phi0, 0.0, 2.0, opts)
        assert report.cause == HORIZON_REACHED
        assert report.summary()["max_residual"] <= 1e-8
        runs[per_unit] = traj
    ts = np.linspace(0.0, 2.0, 257)
    assert np.max(np.abs(runs[128].value_at(ts) - runs[256].value_at(ts))) <= 1e-5


def test_domain_exit_stops_the_continuation(opts):
    F = HistoryFunctional(n=1, eval=lambda t, phi: np.ones(1), in_domain=lambda t, phi: t <= 0.5)
    phi0 = InitialHistory.constant(0.0, PastInterval.point())
    traj, report = continue_maximal(F, phi0, 0.0, 2.0, opts)
    assert report.cause == DOMAIN_EXIT
    assert report.t_escape == pytest.approx(0.5)
    assert traj.value_at(0.5)[0] == pytest.approx(0.5)
    with pytest.raises(EscapeBeforeTauError):
        solution_process(F, 1.0, 0.0, phi0, opts)


def test_solution_process(constant_lag, opts):
    F, phi0, _ = constant_lag
    same = solution_process(F, 0.0, 0.0, phi0, opts)
    assert_allclose(same(-0.5), [1.0])
    after = solution_process(F, 1.0, 0.0, phi0, opts)
    assert_allclose(after(0.0), [0.0], atol=1e-12)
    assert_allclose(after(-1.0), [1.0])
    with pytest.raises(ValueError):
        solution_process(F, -1.0, 0.0, phi0, opts)


def test_horizon_before_start_is_rejected(constant_lag, opts):
    F, phi0, _ = constant_lag
    with pytest.raises(ValueError):
        continue_maximal(F, phi0, 1.0, 0.5, opts)


def test_escape_report_serialization():
    report = EscapeReport(STEP_COLLAPSE, 0.4, 0.4, "collapsed")
    data = report.to_dict()
    assert data["schema"] == 1
    assert data["cause"] == STEP_COLLAPSE
    assert data["summary"]["segments"] == 0
    with pytest.raises(ValueError):
        EscapeReport("Vanished", None, 0.0)


# ---- oracles ----

def test_pantograph_series_value():
    assert pantograph_series(1.0, 0.0, 0.5, 1.0, 1.0, n_terms=50) == pytest.approx(2.2714925555, rel=1e-9)
    # λ = 1 turns the equation into ẋ = x
    assert pantograph_series(1.0, 0.0, 1.0, 1.0, 1.0, n_terms=30) == pytest.approx(math.e)
    with pytest.raises(ValueError):
        pantograph_series(1.0, 0.0, 0.5, 1.0, -1.0)


def test_pantograph_trajectory_needs_zero_start():
    traj = pantograph_trajectory(1.0, 0.0, 0.5, 1.0, 0.0, 1.0, 16, n_terms=50)
    assert traj.value_at(1.0)[0] == pytest.approx(2.2714925555, rel=1e-9)
    with pytest.raises(MethodInapplicableError):
        pantograph_trajectory(1.0, 0.0, 0.5, 1.0, 0.5, 1.0, 16)


def test_closed_forms():
    point = PastInterval.point()
    phi0 = InitialHistory.constant(1.0, point)
    linear = closed_form_trajectory("linear", {"a": 1.0}, phi0, 0.0, 1.0, 8)
    assert linear.value_at(1.0)[0] == pytest.approx(math.e)
    quadratic = closed_form_trajectory("quadratic", {}, phi0, 0.0, 0.5, 8)
    assert quadratic.value_at(0.5)[0] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        closed_form_trajectory("quadratic", {}, phi0, 0.0, 1.5, 8)
    with pytest.raises(MethodInapplicableError):
        closed_form_trajectory("cubic", {}, phi0, 0.0, 1.0, 8)


def test_step_method_checks_arguments(constant_lag):
    _, phi0, _ = constant_lag
    with pytest.raises(ValueError):
        step_method_solve(lambda t, x, y: -y, 0.0, phi0, 0.0, 1.0, H)
    with pytest.raises(ValueError):
        step_method_solve(lambda t, x, y: -y, 1.0, phi0, 0.0, 1.0, 0.0)
    # history at the horizon matches the first interval exactly
    traj = step_method_solve(lambda t, x, y: -y, 1.0, phi0, 0.0, 1.0, H)
    assert_allclose(history_at(traj, 1.0)(-0.5), [0.5], atol=1e-14)
