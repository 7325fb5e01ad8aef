"""Lattice links in the cubic lattice: validation, leveling, diagrams,
Jones-polynomial classification and exhaustive stick-number censuses."""

__version__ = "0.1.0"

from .core import (
    Axis,
    AxisCounts,
    LatticeLink,
    canonicalize,
    parse_link,
    serialize_link,
    stick_counts,
    validate,
)
from .invariants import classify
from .leveling import level_all, level_axis

__all__ = [
    "Axis",
    "AxisCounts",
    "LatticeLink",
    "__version__",
    "canonicalize",
    "classify",
    "level_all",
    "level_axis",
    "parse_link",
    "serialize_link",
    "stick_counts",
    "validate",
]
