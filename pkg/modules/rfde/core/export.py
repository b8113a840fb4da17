"""Trajectory CSV export/import (UTF-8, LF, %.17g)."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from modules.rfde.core.trajectory import Trajectory

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def csv_columns(n: int) -> list[str]:
    return ["t"] + [f"x{i}" for i in range(n)] + [f"dx{i}" for i in range(n)]


def dense_times(t_start: float, t_end: float, dense: int) -> np.ndarray:
    if dense < 1:
        raise ValueError(f"dense must be >= 1, got {dense}")
    if t_end <= t_start:
        return np.array([t_start])
    count = int(np.floor((t_end - t_start) * dense + 1e-9))
    times = t_start + np.arange(count + 1, dtype=np.float64) / dense
    if t_end - times[-1] > 1e-12:
        times = np.append(times, t_end)
    times[-1] = min(times[-1], t_end)
    return times


def dense_samples(traj: Trajectory, dense: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    times = dense_times(traj.t0, traj.t_end, dense)
    return times, traj.value_at(times), traj.derivative_at(times)


def samples_frame(times: np.ndarray, values: np.ndarray, derivatives: np.ndarray) -> pd.DataFrame:
    n = values.shape[1]
    data = np.column_stack([times, values, derivatives])
    return pd.DataFrame(data, columns=csv_columns(n))


def write_samples_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    logger.info("[export] wrote %d rows to %s", len(frame), path)
    return path


def write_trajectory_csv(traj: Trajectory, path: str | Path, dense: int) -> Path:
    return write_samples_csv(samples_frame(*dense_samples(traj, dense)), path)


def read_trajectory_csv(path: str | Path) -> pd.DataFrame:
    frame = pd.read_csv(path, dtype=np.float64)
    if list(frame.columns[:1]) != ["t"]:
        raise ValueError(f"{path}: first column must be 't'")
    return frame


def state_columns(frame: pd.DataFrame) -> list[str]:
    return [c for c in frame.columns if c.startswith("x")]
