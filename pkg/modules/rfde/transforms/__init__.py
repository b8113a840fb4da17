"""Structural maps on histories and prolongations."""

from .bumps import BumpHistory, BumpTerm, interior_bump, random_memory_bump, touching_ramp
from .prolongation import add_A, normalize_N, prolongation_history, random_prolongation
from .rectangle import (
    C0,
    C1,
    HORIZON_EXCEEDED,
    NORM_TOO_LARGE,
    SLOPE_MISMATCH,
    SUPPORT_TOO_WIDE,
    WHOLE_SCAN_WINDOW,
    RectangleSpec,
    RectangleVerdict,
    in_rectangle,
)
from .wedge import constant_extend, translate, translate_inv, trivial_flow, wedge_extend

__all__ = [
    "BumpHistory",
    "BumpTerm",
    "C0",
    "C1",
    "HORIZON_EXCEEDED",
    "NORM_TOO_LARGE",
    "RectangleSpec",
    "RectangleVerdict",
    "SLOPE_MISMATCH",
    "SUPPORT_TOO_WIDE",
    "WHOLE_SCAN_WINDOW",
    "add_A",
    "constant_extend",
    "in_rectangle",
    "interior_bump",
    "normalize_N",
    "prolongation_history",
    "random_memory_bump",
    "random_prolongation",
    "touching_ramp",
    "translate",
    "translate_inv",
    "trivial_flow",
    "wedge_extend",
]
