"""Chromatic k-nearest-neighbor queries over colored points.

An Index1D or Index2D answers "which color appears most often among the k
points nearest q", exactly, by finding the k-th distance first and the mode
of the resulting ball second.
"""

try:
    from ._chromaknn import Answer, Index1D, Index2D, oracle_1d, oracle_2d
except ImportError:  # extension placed next to the package during builds
    from _chromaknn import Answer, Index1D, Index2D, oracle_1d, oracle_2d

__all__ = ["Answer", "Index1D", "Index2D", "oracle_1d", "oracle_2d"]
