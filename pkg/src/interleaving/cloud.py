"""Point clouds, their scale jumps and degree-zero barcodes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from scipy.cluster.hierarchy import DisjointSet

from .poset import to_fraction
from .refinement import ContinuousBar

__all__ = ["PointCloud", "METRICS", "jump_discontinuities", "union_jump_sets", "h0_barcode"]


def _linf(p, q):
    return max(abs(a - b) for a, b in zip(p, q))


def _l1(p, q):
    return sum(abs(a - b) for a, b in zip(p, q))


def _sqeuclidean(p, q):
    # monotone in the Euclidean distance, so merge order is unchanged but
    # the scale axis is squared
    return sum((a - b) ** 2 for a, b in zip(p, q))


METRICS = {"linf": _linf, "l1": _l1, "sqeuclidean": _sqeuclidean}


@dataclass(frozen=True)
class PointCloud:
    points: tuple[tuple[Fraction, ...], ...]
    metric: str = "linf"

    def __post_init__(self):
        pts = tuple(tuple(to_fraction(c) for c in p) for p in self.points)
        if not pts:
            raise ValueError("point cloud is empty")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points have different dimensions")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; choose from {sorted(METRICS)}")
        object.__setattr__(self, "points", pts)

    def distance(self, i: int, j: int) -> Fraction:
        return METRICS[self.metric](self.points[i], self.points[j])

    def edges(self) -> list[tuple[Fraction, int, int]]:
        """All pairs, sorted by length then indices."""
        return sorted((self.distance(i, j), i, j) for i, j in combinations(range(len(self.points)), 2))


def jump_discontinuities(cloud: PointCloud) -> list[Fraction]:
    return sorted({d for d, _, _ in cloud.edges()})


def union_jump_sets(*sets: Iterable) -> list[Fraction]:
    out: set[Fraction] = set()
    for s in sets:
        out.update(to_fraction(x) for x in s)
    return sorted(out)


def h0_barcode(cloud: PointCloud) -> list[ContinuousBar]:
    """Single-linkage barcode: every merge kills one component born at 0.

    Zero-length bars from coincident points are dropped.
    """
    ds = DisjointSet(range(len(cloud.points)))
    bars = []
    for d, i, j in cloud.edges():
        if ds.merge(i, j) and d > 0:
            bars.append(ContinuousBar(0, d))
    bars.append(ContinuousBar(0, None))
    return bars
