"""Randomized shallow cuttings for 3-d dominance.

A random sample R of the input is lifted to the union of upward orthants
[x, inf) x [y, inf) x [z, inf).  Its lower surface is a staircase whose
horizontal faces, cut into rectangles and extended down to -inf, form the
cells of a vertical decomposition.  A cell's conflict list holds the input
points dominated by its top-upper-right corner.

Everything lives on the integer grid inside the clip cube [0, U]^3.  A cell
is the half-open box [x1, x2) x [y1, y2) x (-inf, top) and its corner is the
largest grid point inside it, (x2 - 1, y2 - 1, top - 1).  Cells whose
column is covered by no sample get ``top = U``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import ContractError, PointD, points_to_array


def _as_array(points, dim=3):
    if len(points) and isinstance(points[0], PointD):
        arr, _ = points_to_array(points)
        return arr
    return np.asarray(points, dtype=np.int64).reshape(-1, dim)


def _rng(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample(S, K, rng=None) -> np.ndarray:
    """Indices of a Bernoulli(1/K) sample of ``S``."""
    if K < 1:
        raise ContractError("K must be at least 1")
    n = len(S)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    keep = _rng(rng).random(n) < 1.0 / K
    return np.nonzero(keep)[0].astype(np.int64)


@dataclass
class StaircasePolyhedron:
    """Lower surface of the orthants of a sample, as horizontal faces.

    Samples are processed by ascending (z, y, x, index); ``order[p]`` is the
    sample processed p-th.  A sample's face is the part of its xy-quadrant
    not covered by earlier quadrants, split at the staircase breakpoints into
    rectangles ``face_*[fstart[p] : fstart[p] + fcount[p]]``.  The final
    block (``fstart[-1]``) is the uncovered region, at height ``U``.
    """

    points: np.ndarray
    U: int
    order: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    z: np.ndarray
    owner: np.ndarray  # sample index, -1 for the uncovered region
    fstart: np.ndarray
    fcount: np.ndarray
    _vertices: object = field(default=None, repr=False)

    @property
    def n_faces(self) -> int:
        return int(self.fstart[-1])

    def minima(self) -> np.ndarray:
        """Sample indices that own a face: the minimal points of R.

        Duplicated sample points keep only the first in processing order.
        """
        own = self.owner[: self.n_faces]
        return np.unique(own).astype(np.int64)

    def height(self, xy) -> np.ndarray:
        """Surface height above each xy position (U where uncovered)."""
        xy = np.asarray(xy, dtype=np.int64).reshape(-1, 2)
        face = _locate_faces(self, xy[:, 0], xy[:, 1])
        return self.z[face]

    def above(self, q) -> np.ndarray:
        """True where q is on or above the surface, i.e. dominates a sample."""
        q = _as_array(q)
        return q[:, 2] >= self.height(q[:, :2])

    def vertices(self) -> np.ndarray:
        """Corners of the horizontal face polygons, lifted to their height.

        A point is a corner of a face polygon iff it is the corner of an odd
        number of that face's rectangles.
        """
        if self._vertices is None:
            nf = self.n_faces
            if nf == 0:
                self._vertices = np.zeros((0, 3), dtype=np.int64)
            else:
                own = np.repeat(self.owner[:nf], 4)
                xs = np.stack([self.x1[:nf], self.x2[:nf], self.x1[:nf], self.x2[:nf]], 1).ravel()
                ys = np.stack([self.y1[:nf], self.y1[:nf], self.y2[:nf], self.y2[:nf]], 1).ravel()
                zs = np.repeat(self.z[:nf], 4)
                keys = np.stack([own, xs, ys, zs], 1)
                uniq, counts = np.unique(keys, axis=0, return_counts=True)
                odd = uniq[counts % 2 == 1]
                self._vertices = odd
        return self._vertices[:, 1:4]

    def skeleton(self):
        """Adjacency of the surface vertices.

        Edges are the boundary edges of each face polygon plus vertical
        segments between consecutive vertices over the same xy-position.
        Returns ``(vertices, adjacency list, max degree, vertices of degree
        above 3)``.
        """
        verts = self.vertices()
        keyed = self._vertices
        index = {tuple(v): i for i, v in enumerate(map(tuple, verts))}
        adj = defaultdict(set)

        def link(a, b):
            ia, ib = index[a], index[b]
            if ia != ib:
                adj[ia].add(ib)
                adj[ib].add(ia)

        by_face = defaultdict(list)
        for own, x, y, z in keyed.tolist():
            by_face[own].append((x, y, z))
        for pts in by_face.values():
            # a rectilinear polygon's corners pair up along each line
            for key in ((1, 0), (0, 1)):
                srt = sorted(pts, key=lambda p: (p[key[0]], p[key[1]]))
                for a, b in zip(srt[0::2], srt[1::2]):
                    link(a, b)
        column = defaultdict(list)
        for v in map(tuple, verts.tolist()):
            column[(v[0], v[1])].append(v)
        for vs in column.values():
            vs.sort(key=lambda v: v[2])
            for a, b in zip(vs, vs[1:]):
                link(a, b)
        adjacency = [sorted(adj[i]) for i in range(len(verts))]
        degrees = [len(a) for a in adjacency]
        max_deg = max(degrees) if degrees else 0
        return verts, adjacency, max_deg, sum(d > 3 for d in degrees)


def build_staircase(R, U=None) -> StaircasePolyhedron:
    R = _as_array(R)
    r = len(R)
    if U is None:
        U = int(R.max()) + 1 if r else 1
    U = int(U)
    if r and (R.min() < 0 or R.max() >= U):
        raise ContractError("sample outside the clip cube")
    order = np.lexsort((np.arange(r), R[:, 0], R[:, 1], R[:, 2])).astype(np.int64)
    k = kernels.get()
    sx = np.ascontiguousarray(R[order, 0])
    sy = np.ascontiguousarray(R[order, 1])
    x1, x2, y1, y2, own, fstart, fcount = k.stair_sweep(sx, sy, U)
    owner = np.where(own >= 0, order[np.maximum(own, 0)] if r else -1, -1)
    z = np.where(own >= 0, R[order[np.maximum(own, 0)], 2] if r else U, U)
    return StaircasePolyhedron(R, U, order, x1, x2, y1, y2, z.astype(np.int64),
                               owner.astype(np.int64), fstart, fcount)


def _locate_faces(stair: StaircasePolyhedron, qx, qy, qorder=None) -> np.ndarray:
    """Face index holding each xy position (emit order of the sweep)."""
    qx = np.ascontiguousarray(qx, dtype=np.int64)
    qy = np.ascontiguousarray(qy, dtype=np.int64)
    m = len(qx)
    k = kernels.get()
    R = stair.points
    r = len(R)
    if qorder is None:
        qorder = np.argsort(qx, kind="stable")
    qorder = np.asarray(qorder, dtype=np.int64)
    if r:
        proc = stair.order
        sx_proc = R[proc, 0]
        sy_proc = R[proc, 1]
        by_x = np.argsort(sx_proc, kind="stable")
        ys_sorted = np.sort(sy_proc)
        syr = np.searchsorted(ys_sorted, sy_proc[by_x], side="right").astype(np.int64)
        qyr = np.searchsorted(ys_sorted, qy[qorder], side="right").astype(np.int64)
        owner_sorted = k.owner_sweep(np.ascontiguousarray(sx_proc[by_x]), syr,
                                     by_x.astype(np.int64),
                                     np.ascontiguousarray(qx[qorder]), qyr)
        owner = np.empty(m, dtype=np.int64)
        owner[qorder] = owner_sorted
    else:
        owner = np.full(m, -1, dtype=np.int64)
    return k.face_bisect(stair.x1, stair.fstart, stair.fcount, owner, qx)


@dataclass
class VerticalDecomposition:
    """Cells of the staircase decomposition, indexed in (x1, y1) order."""

    stair: StaircasePolyhedron
    x1: np.ndarray
    x2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    top: np.ndarray
    owner: np.ndarray
    face_to_cell: np.ndarray
    rstart: np.ndarray
    rend: np.ndarray
    by_y: np.ndarray
    ustart: np.ndarray
    uend: np.ndarray

    @property
    def U(self) -> int:
        return self.stair.U

    def __len__(self):
        return len(self.x1)

    @property
    def corners(self) -> np.ndarray:
        """Top-upper-right grid corner of every cell."""
        return np.stack([self.x2 - 1, self.y2 - 1, self.top - 1], 1)

    def cell_of_xy(self, qx, qy, qorder=None) -> np.ndarray:
        face = _locate_faces(self.stair, qx, qy, qorder)
        return self.face_to_cell[face]


def build_vd(stair: StaircasePolyhedron) -> VerticalDecomposition:
    nf = len(stair.x1)
    perm = np.lexsort((stair.y1, stair.x1)).astype(np.int64)
    x1, x2 = stair.x1[perm], stair.x2[perm]
    y1, y2 = stair.y1[perm], stair.y2[perm]
    top, owner = stair.z[perm], stair.owner[perm]
    face_to_cell = np.empty(nf, dtype=np.int64)
    face_to_cell[perm] = np.arange(nf, dtype=np.int64)
    rstart = np.searchsorted(x1, x2, side="left").astype(np.int64)
    rend = np.searchsorted(x1, x2, side="right").astype(np.int64)
    by_y = np.lexsort((x1, y1)).astype(np.int64)
    y1_by = y1[by_y]
    ustart = np.searchsorted(y1_by, y2, side="left").astype(np.int64)
    uend = np.searchsorted(y1_by, y2, side="right").astype(np.int64)
    return VerticalDecomposition(stair, x1, x2, y1, y2, top, owner, face_to_cell,
                                 rstart, rend, by_y, ustart, uend)


def locate(vd: VerticalDecomposition, queries, qorder=None) -> np.ndarray:
    """Cell holding each query, or -1 when the query is on or above the
    staircase (it dominates a sample point).

    ``qorder`` is the queries' x-order when already known.
    """
    q = _as_array(queries)
    if len(q) == 0:
        return np.zeros(0, dtype=np.int64)
    if q.min() < 0 or q.max() >= vd.U:
        raise ContractError("query outside the clip cube")
    cell = vd.cell_of_xy(q[:, 0], q[:, 1], qorder)
    return np.where(q[:, 2] < vd.top[cell], cell, -1)


@dataclass
class ConflictLists:
    """Per-cell lists of input indices, stored as offsets into ``items``."""

    offsets: np.ndarray
    items: np.ndarray
    tests: int = 0

    def __getitem__(self, cell: int) -> np.ndarray:
        return self.items[self.offsets[cell]: self.offsets[cell + 1]]

    def __len__(self):
        return len(self.offsets) - 1

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def total(self) -> int:
        return int(self.offsets[-1])

    @property
    def max_size(self) -> int:
        return int(self.sizes.max()) if len(self) else 0


def conflict_lists(vd: VerticalDecomposition, S, seeds=None, qorder=None) -> ConflictLists:
    """Exact conflict lists of ``S`` by walking right/up from each point.

    ``seeds`` is the cell holding each point's xy-projection (computed when
    omitted).  Points on or above the staircase are in no list: a corner
    dominating such a point would dominate a sample point too.
    """
    S = _as_array(S)
    nc = len(vd)
    if len(S) == 0:
        return ConflictLists(np.zeros(nc + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))
    if seeds is None:
        seeds = vd.cell_of_xy(S[:, 0], S[:, 1], qorder)
    k = kernels.get()
    cells, pts, tests = k.conflict_bfs(
        np.ascontiguousarray(S[:, 0]), np.ascontiguousarray(S[:, 1]),
        np.ascontiguousarray(S[:, 2]), np.asarray(seeds, dtype=np.int64),
        vd.x1, vd.x2, vd.y1, vd.y2, vd.top, vd.rstart, vd.rend,
        vd.by_y, vd.ustart, vd.uend, vd.U)
    srt = np.argsort(cells, kind="stable")
    counts = np.bincount(cells, minlength=nc)
    offsets = np.zeros(nc + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return ConflictLists(offsets, pts[srt], int(tests))


class StaircaseCutting:
    """Sample, staircase, decomposition and conflict lists in one object."""

    def __init__(self, S, K, rng=None, U=None):
        S = _as_array(S)
        self.S = S
        self.K = K
        self.U = int(U) if U is not None else (int(S.max()) + 1 if len(S) else 1)
        self.sample_idx = sample(S, K, rng)
        self.stair = build_staircase(S[self.sample_idx], self.U)
        self.vd = build_vd(self.stair)
        self.seeds = self.vd.cell_of_xy(S[:, 0], S[:, 1]) if len(S) else np.zeros(0, np.int64)
        self.lists = conflict_lists(self.vd, S, self.seeds)

    def locate(self, queries, qorder=None) -> np.ndarray:
        return locate(self.vd, queries, qorder)

    def stats(self) -> dict:
        n = max(1, len(self.S))
        return {"samples": len(self.sample_idx), "cells": len(self.vd),
                "total": self.lists.total, "total_per_n": self.lists.total / n,
                "max": self.lists.max_size, "tests": self.lists.tests}
