"""History core: past intervals, segments, histories, trajectories and their metrics."""

from .export import (
    csv_columns,
    dense_samples,
    read_trajectory_csv,
    samples_frame,
    write_samples_csv,
    write_trajectory_csv,
)
from .history import (
    ClosedForm,
    History,
    InitialHistory,
    LinearHistory,
    Sampled,
    history_difference,
    history_scale,
    history_sum,
    zero_history,
)
from .intervals import PastInterval
from .metrics import (
    DEFAULT_PROBE_DENSITY,
    lip_const,
    probe_grid,
    rho0,
    rho1,
    sup_norm,
    sup_norm_diff,
    support_of_difference,
)
from .segment import Segment
from .trajectory import (
    JUNCTION_TOL,
    HistoryView,
    Trajectory,
    derivative_at,
    eval_history,
    eval_trajectory,
    extends,
    history_at,
    join,
    restrict,
)

__all__ = [
    "ClosedForm",
    "DEFAULT_PROBE_DENSITY",
    "History",
    "HistoryView",
    "InitialHistory",
    "JUNCTION_TOL",
    "LinearHistory",
    "PastInterval",
    "Sampled",
    "Segment",
    "Trajectory",
    "csv_columns",
    "dense_samples",
    "derivative_at",
    "eval_history",
    "eval_trajectory",
    "extends",
    "history_at",
    "history_difference",
    "history_scale",
    "history_sum",
    "join",
    "lip_const",
    "probe_grid",
    "read_trajectory_csv",
    "restrict",
    "rho0",
    "rho1",
    "samples_frame",
    "sup_norm",
    "sup_norm_diff",
    "support_of_difference",
    "write_samples_csv",
    "write_trajectory_csv",
    "zero_history",
]
