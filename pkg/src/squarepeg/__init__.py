"""Counting squares inscribed on algebraic plane curves.

The package builds the corner system of a curve, derives the mixed-volume
bound ``(m^4 - 5m^2 + 4m) / 4`` on isolated inscribed squares, and counts the
actual squares with homotopy continuation.
"""

from .poly import CurveF, MultiPoly, format_curve, parse_curve
from .polytope import inscribed_bound, mixed_volume
from .solver import SquareReport, count_inscribed_squares
from .squares import SquareParam, rewritten_generators

__all__ = [
    "CurveF", "MultiPoly", "SquareParam", "SquareReport", "count_inscribed_squares",
    "format_curve", "inscribed_bound", "mixed_volume", "parse_curve", "rewritten_generators",
]
