"""3-d orthogonal range reporting by grid recursion.

A node with n points cuts x into t columns of n/t points and y into rows of
C*t points.  A 4-sided query [x1, x2] x (-inf, y0] x (-inf, z0] falls apart
into the part inside y0's row (row structure), the parts in the two
boundary columns below that row (column dominance structures), and the
whole cells strictly between them.  For the whole cells only the z-lowest
point of each cell is indexed (the set G, itself a recursive structure);
every G hit opens its cell's z-sorted list.  Queries inside one column
descend into that column's child.

Rows are built with the structure of the previous bootstrap round; round 0
is the merge tree :class:`SlabTree`.  Each structure works in its own rank
space, so sub-structures see small contiguous coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ContractError, PointD, QueryBox, points_to_array
from .succinct import ceil_log2, lg

NEG = -(1 << 62)
POS = 1 << 62
_INT32_INF = np.iinfo(np.int32).max
LEAF6 = 16  # the z-tree of the 6-sided structure scans nodes this small


def _ranks(v, ids):
    """Ranks of ``v`` with ties broken by ``ids``; also the sorted values."""
    order = np.lexsort((ids, v))
    r = np.empty(len(v), dtype=np.int64)
    r[order] = np.arange(len(v))
    return r, np.asarray(v)[order]


def _lo_rank(sorted_vals, v):
    return 0 if v <= NEG else int(np.searchsorted(sorted_vals, v, side="left"))


def _hi_rank(sorted_vals, v):
    return len(sorted_vals) - 1 if v >= POS else int(np.searchsorted(sorted_vals, v, side="right")) - 1


@dataclass
class QueryStats3:
    base_queries: int = 0
    column_queries: int = 0
    g_queries: int = 0
    cell_scans: int = 0
    cell_hits: int = 0
    child_descents: int = 0
    depth: int = 0


class SlabTree:
    """Merge tree over x positions with y-sorted node lists.

    ``x`` must be a permutation of 0..m-1; ``y`` and ``z`` are any
    integers.  Reports [x1, x2] x [y1, y2] x (-inf, z0] in O(lg^2 m + k lg m)
    and range minima of z in O(lg^2 m).  Space is O(m lg m) words.
    """

    def __init__(self, x, y, z):
        k = kernels.get()
        x = np.asarray(x, dtype=np.int64)
        m = len(x)
        self.m = m
        self.L = max(0, ceil_log2(max(m, 1)))
        size = 1 << self.L
        self.size = size
        at = np.full(size, -1, dtype=np.int64)
        at[x] = np.arange(m)
        y = np.asarray(y, dtype=np.int64)
        zz = np.asarray(z, dtype=np.int64)
        for v in (y, zz):
            if m and (v.max() >= _INT32_INF or v.min() <= -_INT32_INF):
                raise ContractError("slab tree coordinates must fit in 32 bits")
        self.yv = y.astype(np.int32)
        self.zv = zz.astype(np.int32)
        real = at >= 0
        safe = np.maximum(at, 0)
        ykey = np.where(real, self.yv[safe], _INT32_INF) if m else np.full(size, _INT32_INF)
        zleaf_all = np.where(real, self.zv[safe], _INT32_INF) if m else np.full(size, _INT32_INF)
        yorder = np.argsort(ykey, kind="stable").astype(np.int64)
        ids = np.empty((self.L + 1) * size, dtype=np.int32)
        zmin = np.empty((self.L + 1) * 2 * size, dtype=np.int32)
        for lev in range(self.L + 1):
            block = (yorder >> lev).astype(np.int64)
            order, _ = k.bucket(block, size >> lev)
            lvl = yorder[order]  # x positions, blocks of 2^lev sorted by y
            ids[lev * size:(lev + 1) * size] = at[lvl]
            tree = zmin[lev * 2 * size:(lev + 1) * 2 * size]
            tree[size:] = zleaf_all[lvl]
            h = size
            while h > 1:
                h >>= 1
                tree[h:2 * h] = np.minimum(tree[2 * h:4 * h:2], tree[2 * h + 1:4 * h:2])
            tree[0] = _INT32_INF
        self.ids = ids
        self.zmin = zmin

    def query(self, x1, x2, y1, y2, z0, limit=0) -> np.ndarray:
        x1, x2 = max(int(x1), 0), min(int(x2), self.m - 1)
        if self.m == 0 or x1 > x2 or y1 > y2:
            return np.zeros(0, dtype=np.int64)
        y1 = max(int(y1), -_INT32_INF)
        y2 = min(int(y2), _INT32_INF - 1)
        z0 = min(int(z0), _INT32_INF - 1)
        if z0 < -_INT32_INF:
            return np.zeros(0, dtype=np.int64)
        return kernels.get().slab_query(self.ids, self.zmin, self.yv, self.L, self.size,
                                        x1, x2, y1, y2, z0, int(limit))

    def space_words(self) -> int:
        # ids and zmin are 32-bit
        return (self.ids.size + self.zmin.size + self.yv.size + self.zv.size) // 2


class _Ranked:
    """Points with their own rank space and the ids to report."""

    def __init__(self, x, y, z, ids):
        self.ids = np.asarray(ids, dtype=np.int64)
        self.m = len(self.ids)
        tie = np.arange(self.m)
        self.xr, self.xs = _ranks(np.asarray(x, dtype=np.int64), tie)
        self.yr, self.ys = _ranks(np.asarray(y, dtype=np.int64), tie)
        self.zr, self.zs = _ranks(np.asarray(z, dtype=np.int64), tie)

    def to_ranks(self, x1, x2, y1, y2, z0):
        return (_lo_rank(self.xs, x1), _hi_rank(self.xs, x2),
                _lo_rank(self.ys, y1), _hi_rank(self.ys, y2), _hi_rank(self.zs, z0))

    def drop_ranks(self):
        for a in ("xr", "yr", "zr"):
            setattr(self, a, None)

    def rank_words(self) -> int:
        return 4 * self.m


class _Base(_Ranked):
    """Round-0 structure: a slab tree over the points' own ranks."""

    kind = "base"

    def __init__(self, x, y, z, ids):
        super().__init__(x, y, z, ids)
        self.slab = SlabTree(self.xr, self.yr, self.zr)
        self.drop_ranks()

    def report(self, x1, x2, y1, y2, z0, out, stats, depth=0, limit=0):
        X1, X2, Y1, Y2, Z0 = self.to_ranks(x1, x2, y1, y2, z0)
        stats.base_queries += 1
        stats.depth = max(stats.depth, depth)
        if X1 > X2 or Y1 > Y2 or Z0 < 0:
            return
        hit = self.slab.query(X1, X2, Y1, Y2, Z0, limit)
        out.append(self.ids[hit])

    def space_words(self) -> int:
        return self.rank_words() + self.slab.space_words()

    def depth(self) -> int:
        return 0


def _grid_params(m, level, c_exp):
    lgm = lg(m)
    C = max(16, math.ceil(lgm ** c_exp))
    t = max(2, int(round(2 ** (lgm ** (level / (level + 1))))))
    return C, t


def _make(x, y, z, ids, sides, level, c_exp):
    m = len(ids)
    if level <= 0:
        return _Base(x, y, z, ids)
    C, t = _grid_params(m, level, c_exp)
    if m < C * t:
        return _Base(x, y, z, ids)
    return Grid3D(x, y, z, ids, sides, level, c_exp)


class Grid3D(_Ranked):
    """The (n/t) x t grid node for 4-sided (``sides=4``) or 5-sided
    (``sides=5``) queries; 5-sided ones may bound y from below too."""

    kind = "grid"

    def __init__(self, x, y, z, ids, sides=4, level=1, c_exp=3.0):
        super().__init__(x, y, z, ids)
        if sides not in (4, 5):
            raise ContractError("sides must be 4 or 5")
        m = self.m
        self.sides, self.level, self.c_exp = sides, level, c_exp
        self.C, self.t = _grid_params(m, level, c_exp)
        self.colsz = -(-m // self.t)
        self.rowsz = self.C * self.t
        xr, yr, zr = self.xr, self.yr, self.zr
        col = xr // self.colsz
        row = yr // self.rowsz
        self.ncols = int(col.max()) + 1
        self.nrows = int(row.max()) + 1
        # rows: previous bootstrap round
        self.rows = []
        for r in range(self.nrows):
            sel = np.nonzero(row == r)[0]
            self.rows.append(_make(xr[sel], yr[sel], zr[sel], self.ids[sel], sides, level - 1, c_exp))
        # columns: recursive child plus the boundary-column structures
        self.children = []
        self.col_left = []
        self.col_right = []
        for c in range(self.ncols):
            sel = np.nonzero(col == c)[0]
            self.children.append(_make(xr[sel], yr[sel], zr[sel], self.ids[sel], sides, level, c_exp))
            local_x = xr[sel] - c * self.colsz
            if sides == 4:
                slab = SlabTree(local_x, yr[sel], zr[sel])
                self.col_left.append((sel, slab))
                self.col_right.append((sel, slab))
            else:
                # y becomes the two-sided axis, x the one-sided one
                self.col_left.append(_make(yr[sel], -xr[sel], zr[sel], self.ids[sel], 4, level, c_exp))
                self.col_right.append(_make(yr[sel], xr[sel], zr[sel], self.ids[sel], 4, level, c_exp))
        # cells with z-sorted lists; G holds the z-lowest point of each
        cell = col * self.nrows + row
        order = np.lexsort((zr, cell))
        self.cell_order = order.astype(np.int64)
        self.cell_zr = zr[order].astype(np.int64)
        ncell = self.ncols * self.nrows
        counts = np.bincount(cell, minlength=ncell)
        self.cell_off = np.zeros(ncell + 1, dtype=np.int64)
        np.cumsum(counts, out=self.cell_off[1:])
        firsts = self.cell_off[:-1][counts > 0]
        gsel = order[firsts]
        self.g_cell = cell[gsel]
        self.G = _make(xr[gsel], yr[gsel], zr[gsel], np.arange(len(gsel)), sides, level, c_exp)
        self.drop_ranks()

    # -- queries ------------------------------------------------------------
    def report(self, x1, x2, y1, y2, z0, out, stats, depth=0, limit=0, regions=None):
        X1, X2, Y1, Y2, Z0 = self.to_ranks(x1, x2, y1, y2, z0)
        stats.depth = max(stats.depth, depth)
        if X1 > X2 or Y1 > Y2 or Z0 < 0:
            return
        if self.sides == 4 and Y1 != 0:
            raise ContractError("4-sided structure needs y unbounded below")
        jL, jR = X1 // self.colsz, X2 // self.colsz

        def emit(arr, tag):
            if len(arr):
                out.append(arr)
                if regions is not None:
                    regions.append((tag, arr))

        if jL == jR:
            stats.child_descents += 1
            sub = []
            self.children[jL].report(X1, X2, Y1, Y2, Z0, sub, stats, depth + 1, limit)
            for a in sub:
                emit(a, "C")
            return
        rs = self.rowsz
        i2 = Y2 // rs
        i1 = Y1 // rs if self.sides == 5 else -1
        if i1 == i2:
            sub = []
            self.rows[i2].report(X1, X2, Y1, Y2, Z0, sub, stats, depth + 1, limit)
            for a in sub:
                emit(a, "T")
            return
        sub = []
        self.rows[i2].report(X1, X2, i2 * rs if self.sides == 5 else NEG, Y2, Z0, sub, stats, depth + 1, limit)
        for a in sub:
            emit(a, "T")
        if self.sides == 5:
            sub = []
            self.rows[i1].report(X1, X2, Y1, (i1 + 1) * rs - 1, Z0, sub, stats, depth + 1, limit)
            for a in sub:
                emit(a, "B")
        ylo = (i1 + 1) * rs if self.sides == 5 else 0
        yhi = i2 * rs - 1
        if ylo > yhi:
            return
        # boundary columns
        for tag, j, lo, hi in (("L", jL, X1, (jL + 1) * self.colsz - 1), ("R", jR, jR * self.colsz, X2)):
            stats.column_queries += 1
            base = j * self.colsz
            if self.sides == 4:
                sel, slab = self.col_left[j]
                hit = slab.query(lo - base, hi - base, NEG, yhi, Z0, limit)
                emit(self.ids[sel[hit]], tag)
            else:
                sub = []
                if tag == "L":
                    self.col_left[j].report(ylo, yhi, NEG, -lo, Z0, sub, stats, depth + 1, limit)
                else:
                    self.col_right[j].report(ylo, yhi, NEG, hi, Z0, sub, stats, depth + 1, limit)
                for a in sub:
                    emit(a, tag)
        if jR - jL < 2:
            return
        # whole cells: G first, then each hit cell's z-list
        stats.g_queries += 1
        gsub = []
        self.G.report((jL + 1) * self.colsz, jR * self.colsz - 1, ylo if self.sides == 5 else NEG,
                      yhi, Z0, gsub, stats, depth + 1)
        if not gsub:
            return
        for gi in np.concatenate(gsub).tolist():
            c = int(self.g_cell[gi])
            a, b = int(self.cell_off[c]), int(self.cell_off[c + 1])
            stats.cell_scans += 1
            stop = a + int(np.searchsorted(self.cell_zr[a:b], Z0, side="right"))
            stats.cell_hits += stop - a
            emit(self.ids[self.cell_order[a:stop]], "I")

    # -- accounting -----------------------------------------------------------
    def space_words(self) -> int:
        words = self.rank_words() + 3 * len(self.cell_order) + len(self.g_cell)
        words += sum(r.space_words() for r in self.rows)
        words += sum(c.space_words() for c in self.children)
        if self.sides == 4:
            words += sum(s.space_words() + len(sel) for sel, s in self.col_left)
        else:
            words += sum(s.space_words() for s in self.col_left + self.col_right)
        return words + self.G.space_words()

    def depth(self) -> int:
        """Column-recursion depth below this node."""
        return 1 + max(c.depth() for c in self.children)

    def cell_lists_sorted(self) -> bool:
        for c in range(len(self.cell_off) - 1):
            z = self.cell_zr[self.cell_off[c]:self.cell_off[c + 1]]
            if np.any(z[1:] < z[:-1]):
                return False
        return True


# ---------------------------------------------------------------------------
# public structures


def _split_points(points, d=3):
    if len(points) and isinstance(points[0], PointD):
        arr, ids = points_to_array(points)
    else:
        arr = np.asarray(points, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, d)
        ids = np.arange(len(arr), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise ContractError(f"{d}-d points required")
    return arr, np.asarray(ids, dtype=np.int64)


def _rounds(eps):
    if eps <= 0:
        raise ContractError("eps must be positive")
    return max(1, math.ceil(1 / eps - 1e-9))


class Range3D:
    """4-, 5- or 6-sided 3-d range reporting over a fixed point set.

    ``sides`` fixes the query shape the structure accepts: 4 means
    [x1, x2] x (-inf, y0] x (-inf, z0], 5 adds a y lower bound and 6 a z
    lower bound.  Reported values are point ids.
    """

    def __init__(self, points, sides: int = 4, eps: float = 0.5, c_exp: float = 3.0, ids=None):
        arr, ids0 = _split_points(points)
        ids = ids0 if ids is None else np.asarray(ids, dtype=np.int64)
        self.n = len(arr)
        self.sides = sides
        self.eps = eps
        self.rounds = _rounds(eps)
        self.points = arr
        self.point_ids = ids
        self.last = QueryStats3()
        x, y, z = arr[:, 0], arr[:, 1], arr[:, 2]
        if sides in (4, 5):
            self.root = _make(x, y, z, ids, sides, self.rounds, c_exp) if self.n else None
        elif sides == 6:
            self.root = _ZTree(x, y, z, ids, self.rounds, c_exp) if self.n else None
        else:
            raise ContractError("sides must be 4, 5 or 6")

    def _bounds(self, box: QueryBox):
        if box.dim != 3:
            raise ContractError("3-d box required")
        x1 = NEG if box.lo[0] is None else int(box.lo[0])
        x2 = POS if box.hi[0] is None else int(box.hi[0])
        y1 = NEG if box.lo[1] is None else int(box.lo[1])
        y2 = POS if box.hi[1] is None else int(box.hi[1])
        z1 = NEG if box.lo[2] is None else int(box.lo[2])
        z2 = POS if box.hi[2] is None else int(box.hi[2])
        if self.sides == 4 and (y1 != NEG or z1 != NEG):
            raise ContractError("4-sided structure: y and z must be unbounded below")
        if self.sides == 5 and z1 != NEG:
            raise ContractError("5-sided structure: z must be unbounded below")
        return x1, x2, y1, y2, z1, z2

    def report_ids(self, box: QueryBox, regions=None, limit=0) -> np.ndarray:
        x1, x2, y1, y2, z1, z2 = self._bounds(box)
        stats = QueryStats3()
        self.last = stats
        if self.root is None:
            return np.zeros(0, dtype=np.int64)
        out = []
        if self.sides == 6:
            self.root.report(x1, x2, y1, y2, z1, z2, out, stats, limit)
        elif isinstance(self.root, Grid3D):
            self.root.report(x1, x2, y1, y2, z2, out, stats, 0, limit, regions)
        else:
            self.root.report(x1, x2, y1, y2, z2, out, stats, 0, limit)
            if regions is not None:
                regions.extend(("base", a) for a in out)
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def report(self, box: QueryBox) -> list:
        ids = self.report_ids(box)
        pos = {int(i): k for k, i in enumerate(self.point_ids.tolist())} if len(ids) else {}
        return [PointD(tuple(int(v) for v in self.points[pos[int(i)]]), int(i)) for i in ids]

    def empty(self, box: QueryBox) -> bool:
        return len(self.report_ids(box, limit=1)) == 0

    def space_words(self) -> int:
        return self.root.space_words() if self.root is not None else 0

    def depth(self) -> int:
        return self.root.depth() if self.root is not None else 0


class _ZTree:
    """Binary tree over z; every non-root node keeps a 5-sided structure
    facing its parent's split (z reflected for left children)."""

    def __init__(self, x, y, z, ids, rounds, c_exp):
        self.ids = np.asarray(ids, dtype=np.int64)
        m = len(self.ids)
        zr, self.zs = _ranks(np.asarray(z, dtype=np.int64), np.arange(m))
        order = np.argsort(zr)
        self.x = np.asarray(x, dtype=np.int64)[order]
        self.y = np.asarray(y, dtype=np.int64)[order]
        self.z = np.asarray(z, dtype=np.int64)[order]
        self.ids = self.ids[order]
        self.rounds, self.c_exp = rounds, c_exp
        self.nodes = {}
        self._build(1, 0, m)

    def _build(self, v, a, b):
        if b - a <= LEAF6:
            return
        mid = (a + b) // 2
        sl = slice(a, mid)
        self.nodes[2 * v] = _make(self.x[sl], self.y[sl], -self.z[sl], self.ids[sl], 5, self.rounds, self.c_exp)
        sr = slice(mid, b)
        self.nodes[2 * v + 1] = _make(self.x[sr], self.y[sr], self.z[sr], self.ids[sr], 5, self.rounds, self.c_exp)
        self._build(2 * v, a, mid)
        self._build(2 * v + 1, mid, b)

    def report(self, x1, x2, y1, y2, z1, z2, out, stats, limit=0):
        Z1 = _lo_rank(self.zs, z1)
        Z2 = _hi_rank(self.zs, z2)
        if Z1 > Z2:
            return
        v, a, b = 1, 0, len(self.ids)
        while b - a > LEAF6:
            mid = (a + b) // 2
            if Z2 < mid:
                v, b = 2 * v, mid
            elif Z1 >= mid:
                v, a = 2 * v + 1, mid
            else:
                self.nodes[2 * v].report(x1, x2, y1, y2, -self.z[Z1], out, stats, 1, limit)
                if limit and sum(len(o) for o in out) >= limit:
                    return
                self.nodes[2 * v + 1].report(x1, x2, y1, y2, self.z[Z2], out, stats, 1, limit)
                return
        sl = slice(Z1, Z2 + 1)
        xs, ys = self.x[sl], self.y[sl]
        keep = (xs >= x1) & (xs <= x2) & (ys >= y1) & (ys <= y2)
        stats.base_queries += 1
        out.append(self.ids[sl][keep])

    def space_words(self) -> int:
        return 4 * len(self.ids) + sum(s.space_words() for s in self.nodes.values())

    def depth(self) -> int:
        return max((s.depth() for s in self.nodes.values()), default=0)


def build_4sided(points, eps: float = 0.5, c_exp: float = 3.0) -> Range3D:
    return Range3D(points, 4, eps, c_exp)


def query_4sided(g: Range3D, box: QueryBox) -> list:
    if box.sidedness != 4 or g.sides != 4:
        raise ContractError("4-sided box and structure required")
    return g.report(box)


def build_5sided(points, eps: float = 0.5, c_exp: float = 3.0) -> Range3D:
    return Range3D(points, 5, eps, c_exp)


def build_6sided(points, eps: float = 0.5, c_exp: float = 3.0) -> Range3D:
    return Range3D(points, 6, eps, c_exp)


def query_5sided(g: Range3D, box: QueryBox) -> list:
    if g.sides != 5:
        raise ContractError("5-sided structure required")
    return g.report(box)


def query_6sided(g: Range3D, box: QueryBox) -> list:
    if g.sides != 6:
        raise ContractError("6-sided structure required")
    return g.report(box)


# ---------------------------------------------------------------------------
# dominance base, higher dimensions, 2-d range minimum


class Dominance3DBase:
    """3-d dominance reporting.  ``flip[a]`` turns axis a around, so the
    range on that axis becomes [c_a, +inf) instead of (-inf, c_a]."""

    def __init__(self, points, flip=(False, False, False)):
        arr, ids = _split_points(points)
        self.points, self.point_ids = arr, ids
        self.flip = tuple(bool(f) for f in flip)
        sgn = np.array([-1 if f else 1 for f in self.flip], dtype=np.int64)
        v = arr * sgn
        self.sgn = sgn
        self.base = _Base(v[:, 0], v[:, 1], v[:, 2], ids) if len(arr) else None

    def query_ids(self, corner) -> np.ndarray:
        if self.base is None:
            return np.zeros(0, dtype=np.int64)
        c = np.asarray(corner.coords if isinstance(corner, PointD) else corner, dtype=np.int64) * self.sgn
        out = []
        self.base.report(NEG, int(c[0]), NEG, int(c[1]), int(c[2]), out, QueryStats3())
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def query(self, corner) -> list:
        ids = self.query_ids(corner)
        pos = {int(i): k for k, i in enumerate(self.point_ids.tolist())}
        return [PointD(tuple(int(v) for v in self.points[pos[int(i)]]), int(i)) for i in ids]


def query_dominance3d(b: Dominance3DBase, corner) -> list:
    return b.query(corner)


class RangeTreeKD:
    """d-dim reporting (d >= 4): fan-out-b tree over the last coordinate;
    nodes hold (d-1)-dim structures, 6-sided 3-d ones at the bottom."""

    def __init__(self, arr, ids, b, eps, c_exp):
        self.d = arr.shape[1]
        self.b = b
        order = np.lexsort((ids, arr[:, -1]))
        self.arr, self.ids = arr[order], ids[order]
        self.last = self.arr[:, -1]
        self.eps, self.c_exp = eps, c_exp
        self.root = self._build(0, len(self.arr))

    def _sub(self, a, z):
        pts = self.arr[a:z, :-1]
        if self.d - 1 == 3:
            return Range3D(np.asarray(pts), 6, self.eps, self.c_exp, ids=self.ids[a:z])
        return RangeTreeKD(pts, self.ids[a:z], self.b, self.eps, self.c_exp)

    def _build(self, a, z):
        n = z - a
        node = {"a": a, "z": z, "sub": None, "kids": []}
        if n <= max(self.b, LEAF6):
            return node
        node["sub"] = self._sub(a, z)
        cuts = [a + (i * n) // self.b for i in range(self.b + 1)]
        node["kids"] = [self._build(cuts[i], cuts[i + 1]) for i in range(self.b)]
        return node

    def report(self, lo, hi, out, touched):
        lo_i = int(np.searchsorted(self.last, lo[-1], side="left"))
        hi_i = int(np.searchsorted(self.last, hi[-1], side="right"))
        self._walk(self.root, lo, hi, lo_i, hi_i, out, touched)

    def _walk(self, node, lo, hi, lo_i, hi_i, out, touched):
        a, z = node["a"], node["z"]
        if hi_i <= a or lo_i >= z:
            return
        touched[0] += 1
        covered = lo_i <= a and z <= hi_i
        if covered and node["sub"] is not None:
            s = node["sub"]
            if isinstance(s, Range3D):
                box = QueryBox.closed(lo[:-1], hi[:-1])
                out.append(s.report_ids(box))
            else:
                s.report(lo[:-1], hi[:-1], out, touched)
            return
        if not node["kids"]:
            seg = self.arr[max(a, lo_i):min(z, hi_i)]
            keep = np.all((seg >= lo) & (seg <= hi), axis=1)
            out.append(self.ids[max(a, lo_i):min(z, hi_i)][keep])
            return
        for kid in node["kids"]:
            self._walk(kid, lo, hi, lo_i, hi_i, out, touched)


def report_kd(points, boxes, d=None, b=None, eps: float = 0.5, c_exp: float = 3.0) -> list:
    """Per box, the ids of the points inside.  ``boxes`` are QueryBox or
    rows (lo_0, hi_0, lo_1, hi_1, ...)."""
    if len(points) and isinstance(points[0], PointD):
        arr, ids = points_to_array(points)
    else:
        arr = np.asarray(points, dtype=np.int64)
        arr = arr.reshape(-1, d or arr.shape[-1])
        ids = np.arange(len(arr), dtype=np.int64)
    d = arr.shape[1]
    if d < 4:
        raise ContractError("report_kd needs d >= 4")
    n = len(arr)
    if b is None:
        b = max(2, math.ceil(lg(n) ** eps))
    tree = RangeTreeKD(arr, np.asarray(ids, dtype=np.int64), b, eps, c_exp) if n else None
    out = []
    for box in boxes:
        if isinstance(box, QueryBox):
            lo, hi = box.bounds()
        else:
            row = [int(v) for v in box]
            lo, hi = tuple(row[0::2]), tuple(row[1::2])
        if tree is None:
            out.append([])
            continue
        acc, touched = [], [0]
        tree.report(np.asarray(lo), np.asarray(hi), acc, touched)
        out.append(sorted(np.concatenate(acc).tolist()) if acc else [])
    return out


class RMQ2D:
    """Minimum-priority point in a 2-d box; ties go to the lowest id."""

    def __init__(self, points, priorities):
        arr, ids = _split_points(points, 2)
        pr = np.asarray(priorities, dtype=np.int64)
        if len(pr) != len(arr):
            raise ContractError("one priority per point")
        self.points, self.point_ids, self.priorities = arr, ids, pr
        n = len(arr)
        self.ranked = _Ranked(arr[:, 0], arr[:, 1], np.zeros(n, np.int64), ids) if n else None
        if n:
            # priority rank with id tie-break: the minimum is the answer
            pr_rank, _ = _ranks(pr, ids)
            self.by_rank = np.empty(n, dtype=np.int64)
            self.by_rank[pr_rank] = np.arange(n)
            self.slab = SlabTree(self.ranked.xr, self.ranked.yr, pr_rank)

    def query_index(self, box: QueryBox):
        if box.dim != 2:
            raise ContractError("2-d box required")
        if self.ranked is None:
            return None
        (x1, y1), (x2, y2) = box.bounds()
        r = self.ranked
        X1, X2 = _lo_rank(r.xs, x1), _hi_rank(r.xs, x2)
        Y1, Y2 = _lo_rank(r.ys, y1), _hi_rank(r.ys, y2)
        if X1 > X2 or Y1 > Y2:
            return None
        best = kernels.get().slab_min(self.slab.ids, self.slab.zmin, self.slab.yv, self.slab.L,
                                      self.slab.size, X1, X2, Y1, Y2)
        if best < 0:
            return None
        return int(self.by_rank[best])

    def query(self, box: QueryBox):
        i = self.query_index(box)
        if i is None:
            return None
        return PointD(tuple(int(v) for v in self.points[i]), int(self.point_ids[i]))


def rmq_2d(s: RMQ2D, box: QueryBox):
    return s.query(box)
