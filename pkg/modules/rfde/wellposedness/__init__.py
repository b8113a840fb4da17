"""Numerical probes of well-posedness: uniqueness, dependence, semiflow bounds, process axioms."""

from .dependence import default_schedule, probe_dependence, probe_escape_lsc
from .dto import PROBE_NAMES, ProbeReport
from .semiflow import probe_semiflow
from .solutions import probe_cocycle, probe_extension_order, probe_identity, probe_uniqueness

__all__ = [
    "PROBE_NAMES",
    "ProbeReport",
    "default_schedule",
    "probe_cocycle",
    "probe_dependence",
    "probe_escape_lsc",
    "probe_extension_order",
    "probe_identity",
    "probe_semiflow",
    "probe_uniqueness",
]
