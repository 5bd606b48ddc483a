"""Range emptiness and rank queries over uniformly random points in the unit square.

Rectangles are tuples ``(x_lo, x_hi, y_lo, y_hi)`` and contain a point when
``x_lo <= x < x_hi`` and ``y_lo <= y < y_hi``.
"""

from ._core import (
    GridForest,
    QuadrantStore,
    RangeTree,
    Rank1D,
    SlabTree,
    oracle_empty,
    oracle_rank,
    rect_contains,
    sample_points,
    to_rank_space,
    validate_net,
    verify,
)

__all__ = [
    "GridForest",
    "QuadrantStore",
    "RangeTree",
    "Rank1D",
    "SlabTree",
    "oracle_empty",
    "oracle_rank",
    "rect_contains",
    "sample_points",
    "to_rank_space",
    "validate_net",
    "verify",
]
