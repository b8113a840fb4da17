from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from modules.rfde.core import InitialHistory, PastInterval
from modules.rfde.functional import build_builtin, build_constant_lag, build_ode
from modules.rfde.solver import LipschitzSource, SolveOptions

ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = ROOT / "configs"


def constant_lag_exact(t: np.ndarray) -> np.ndarray:
    """x'(t) = -x(t - 1), x ≡ 1 on [-1, 0], solved by hand on [0, 3]."""
    t = np.asarray(t, dtype=np.float64)
    s = t - 1.0
    return np.where(
        t <= 1.0,
        1.0 - t,
        np.where(t <= 2.0, t * t / 2.0 - 2.0 * t + 1.5, 1.0 / 6.0 - s**3 / 6.0 + s * s - 1.5 * s),
    )


@pytest.fixture
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture
def opts() -> SolveOptions:
    return SolveOptions()


@pytest.fixture
def constant_lag():
    """(F, φ0, interval) for x'(t) = -x(t - 1) with φ ≡ 1 on [-1, 0]."""
    interval = PastInterval.compact(1.0)
    F = build_constant_lag(lambda t, x, y: -y, 1.0, 1, interval)
    return F, InitialHistory.constant(1.0, interval), interval


@pytest.fixture
def pantograph():
    interval = PastInterval.whole()
    model = build_builtin("pantograph", {"a": 1.0, "b": 0.0, "lambda": 0.5}, interval, 1)
    return model.functional, InitialHistory.constant(1.0, interval), interval


@pytest.fixture
def quadratic_ode():
    """x' = x², x(0) = 1 with a user Lipschitz constant so the run stays fast."""
    interval = PastInterval.point()
    F = build_ode(lambda t, x: x * x, 1, interval)
    opts = SolveOptions(
        fixed_point_tol=1e-8,
        lipschitz_source=LipschitzSource.user_provided(2.0),
        bound_mode="lipschitz_bound",
    )
    return F, InitialHistory.constant(1.0, interval), opts
