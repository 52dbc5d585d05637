"""Geometry primitives shared by every structure in the package.

Points live on a non-negative integer grid.  Most structures work on the
rank-space image of their input, where every axis holds a permutation of
``0..n-1``; duplicates are ordered by point id so the reduction is always a
strict permutation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

COORD_MAX = 2**32 - 1


class ContractError(ValueError):
    """Raised when a caller breaks an operation's precondition."""


@dataclass(frozen=True)
class PointD:
    coords: tuple
    id: int = 0

    def __post_init__(self):
        c = tuple(int(v) for v in self.coords)
        # d in {2,3,4} is the common case; larger d only feeds the
        # higher-dimensional dominance reduction
        if not 1 <= len(c) <= 8:
            raise ContractError(f"unsupported dimension {len(c)}")
        for v in c:
            if v < 0 or v > COORD_MAX:
                raise ContractError(f"coordinate {v} outside [0, 2^32)")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, axis):
        return self.coords[axis]

    def __iter__(self):
        return iter(self.coords)


def dominates(p: PointD, q: PointD) -> bool:
    """True iff every coordinate of ``p`` is <= the matching one of ``q``.

    Note the direction: ``dominates(p, q)`` asks whether ``p`` sits in the
    lower orthant of ``q``.
    """
    if len(p.coords) != len(q.coords):
        raise ContractError("dimension mismatch")
    return all(a <= b for a, b in zip(p.coords, q.coords))


def points_to_array(points: Sequence[PointD]):
    """Stack points into an ``(n, d)`` int64 array plus an id vector."""
    if len(points) == 0:
        return np.zeros((0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64)
    d = len(points[0].coords)
    arr = np.array([p.coords for p in points], dtype=np.int64).reshape(len(points), d)
    ids = np.array([p.id for p in points], dtype=np.int64)
    return arr, ids


def array_to_points(arr, ids=None) -> list:
    arr = np.asarray(arr)
    if ids is None:
        ids = range(len(arr))
    return [PointD(tuple(int(v) for v in row), int(i)) for row, i in zip(arr, ids)]


def make_points(rows: Iterable[Sequence[int]]) -> list:
    """Convenience: points from coordinate rows, ids assigned 0,1,2,..."""
    return [PointD(tuple(r), i) for i, r in enumerate(rows)]


def axis_order(values, ids) -> np.ndarray:
    """Indices sorting ``values`` ascending with ties broken by id."""
    values = np.asarray(values, dtype=np.int64)
    ids = np.asarray(ids, dtype=np.int64)
    return np.lexsort((ids, values)).astype(np.int64)


def ranks_from_order(order) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    ranks = np.empty(len(order), dtype=np.int64)
    ranks[order] = np.arange(len(order), dtype=np.int64)
    return ranks


@dataclass
class RankSpaceMap:
    """Per-axis sorted values and the rank permutations of one point set.

    ``sorted_values[a][r]`` is the original coordinate of the point with
    rank ``r`` on axis ``a``; ``to_rank[a][i]`` is the rank of input point
    ``i`` and ``from_rank[a]`` is its inverse.
    """

    sorted_values: list = field(default_factory=list)
    to_rank: list = field(default_factory=list)
    from_rank: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.sorted_values)

    def __len__(self):
        return 0 if not self.sorted_values else len(self.sorted_values[0])

    def unrank(self, axis: int, r: int) -> int:
        return int(self.sorted_values[axis][r])

    def invert(self, rank_points: Sequence[PointD]) -> list:
        return [
            PointD(tuple(self.unrank(a, r) for a, r in enumerate(p.coords)), p.id)
            for p in rank_points
        ]

    def lower_rank(self, axis: int, value: int) -> int:
        """Smallest rank whose coordinate is >= value (successor rounding)."""
        return int(np.searchsorted(self.sorted_values[axis], value, side="left"))

    def upper_rank(self, axis: int, value: int) -> int:
        """Largest rank whose coordinate is <= value, or -1."""
        return int(np.searchsorted(self.sorted_values[axis], value, side="right")) - 1


def rank_space_reduce_array(arr, ids):
    """Array form of :func:`rank_space_reduce`: returns (rank array, map)."""
    arr = np.asarray(arr, dtype=np.int64)
    n = len(arr)
    if n == 0:
        return arr.copy(), RankSpaceMap()
    d = arr.shape[1]
    out = np.empty_like(arr)
    rmap = RankSpaceMap()
    for a in range(d):
        order = axis_order(arr[:, a], ids)
        ranks = ranks_from_order(order)
        out[:, a] = ranks
        rmap.sorted_values.append(arr[order, a].copy())
        rmap.to_rank.append(ranks)
        rmap.from_rank.append(order)
    return out, rmap


def rank_space_reduce(points: Sequence[PointD]):
    """Replace each coordinate by its rank on that axis (ties by id)."""
    if len(points) == 0:
        return [], RankSpaceMap()
    arr, ids = points_to_array(points)
    ranked, rmap = rank_space_reduce_array(arr, ids)
    return array_to_points(ranked, ids), rmap


def presort(points: Sequence[PointD]) -> list:
    """Per-axis index permutations sorted by (coordinate, id)."""
    if len(points) == 0:
        return []
    arr, ids = points_to_array(points)
    return [axis_order(arr[:, a], ids) for a in range(arr.shape[1])]


@dataclass(frozen=True)
class QueryBox:
    """Axis-aligned box with closed intervals.

    ``lo``/``hi`` hold a coordinate or ``None`` for an unbounded side.  The
    sentinel view replaces an open low side by 0 and an open high side by
    ``universe``.
    """

    lo: tuple
    hi: tuple
    universe: int = COORD_MAX + 1

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ContractError("lo/hi dimension mismatch")
        lo, hi = self.bounds()
        for a, b in zip(lo, hi):
            if a > b:
                raise ContractError(f"inverted interval [{a}, {b}]")

    @classmethod
    def closed(cls, lo, hi, universe: int = COORD_MAX + 1) -> "QueryBox":
        return cls(tuple(int(v) for v in lo), tuple(int(v) for v in hi), universe)

    @classmethod
    def orthant(cls, corner, universe: int = COORD_MAX + 1) -> "QueryBox":
        """The lower orthant (-inf, c_1] x ... x (-inf, c_d]."""
        return cls(tuple(None for _ in corner), tuple(int(v) for v in corner), universe)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def sidedness(self) -> int:
        return sum(v is not None for v in self.lo) + sum(v is not None for v in self.hi)

    def bounds(self):
        lo = tuple(0 if v is None else int(v) for v in self.lo)
        hi = tuple(self.universe if v is None else int(v) for v in self.hi)
        return lo, hi

    def contains(self, p: PointD) -> bool:
        if p.dim != self.dim:
            raise ContractError("dimension mismatch")
        lo, hi = self.bounds()
        return all(a <= c <= b for a, c, b in zip(lo, p.coords, hi))

    def contains_array(self, arr) -> np.ndarray:
        arr = np.asarray(arr)
        lo, hi = self.bounds()
        mask = np.ones(len(arr), dtype=bool)
        for a in range(self.dim):
            mask &= (arr[:, a] >= lo[a]) & (arr[:, a] <= hi[a])
        return mask


def reflect(arr, universe: int):
    """Coordinate reflection v -> universe-1-v, turning <= into >=."""
    return (universe - 1) - np.asarray(arr, dtype=np.int64)


def universe_of(arr) -> int:
    arr = np.asarray(arr)
    return int(arr.max()) + 1 if arr.size else 1
