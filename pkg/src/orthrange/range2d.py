"""2-d orthogonal range reporting on top of ball inheritance.

A query splits at the lowest common ancestor of its x-endpoints.  The
y-interval is converted to ranks at the nearest ancestor carrying a
predecessor index, walked down to the two children of that ancestor, and
then each child is scanned with range-minimum (right child) or
range-maximum (left child) queries over x, recovering coordinates through
the ball-inheritance structure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ball_inheritance import FAST_QUERY, BallTree, SkipPlan
from .core import ContractError, PointD, QueryBox, points_to_array
from .succinct import PredecessorIndex, RMQIndex, ceil_log2, lg


@dataclass
class QueryStats:
    report_calls: int = 0  # ball-inheritance calls while reporting
    oracle_calls: int = 0  # ball-inheritance calls made by predecessor search
    reported: int = 0
    truncated: bool = False
    steps_down: int = 0


class RangeReport2D:
    def __init__(self, points, B: int = 2, mode: str = FAST_QUERY):
        if len(points) and isinstance(points[0], PointD):
            arr, ids = points_to_array(points)
        else:
            arr = np.asarray(points, dtype=np.int64).reshape(-1, 2)
            ids = np.arange(len(arr), dtype=np.int64)
        self.n = len(arr)
        self.B, self.mode = B, mode
        self.tree = BallTree(np.asarray(arr, dtype=np.int64), SkipPlan(mode, B))
        if self.n:
            self.tree.point_ids[arr[:, 0]] = ids
        t = self.tree
        L = t.height
        root = t.root_x
        xs_by_level = []
        for d in range(L + 1):
            xs_by_level.append(root[np.argsort(root >> (L - d), kind="stable")])
        # range-min over x at right children, range-max at left children
        self.rmq = [None] * (L + 1)
        for d in range(1, L + 1):
            xs = xs_by_level[d]
            node = xs >> (L - d)
            keys = np.where(node & 1, xs, -xs)
            self.rmq[d] = RMQIndex(keys)
        self.pred_every = max(1, ceil_log2(lg(max(self.n, 2))))
        self.pred = {}
        for d in range(0, L + 1, self.pred_every):
            ys = t.coords[xs_by_level[d], 1]
            self.pred[d] = PredecessorIndex(ys, segment=t.node_size(d))
        self.last = QueryStats()

    # -- helpers ----------------------------------------------------------
    def lca(self, x1: int, x2: int):
        """(depth, node) of the lowest common ancestor of two leaves."""
        h = (x1 ^ x2).bit_length()
        return self.tree.height - h, x1 >> h

    def _child_range(self, depth, node, lo, hi, side):
        """Ranks [lo, hi] (1-based) in ``node`` mapped into child ``side``."""
        t = self.tree
        core = t.routing[depth].core
        base = node * t.node_size(depth)

        def upto(p):  # balls of the child among the first p of the parent
            if p == 0:
                return 0
            k = base + p - 1
            r = core.rank(k)
            return r if core.symbol(k) == side else p - r

        return upto(lo - 1) + 1, upto(hi)

    def _y_oracle(self, depth, node, stats):
        t = self.tree

        def oracle(r):
            stats.oracle_calls += 1
            leaf = t.leaf_of(depth, node, r - 1)
            return int(t.coords[leaf, 1])

        return oracle

    def translate(self, x1, x2, y1, y2, stats=None):
        """Rank intervals of [y1, y2] in the left and right child of the LCA.

        Returns ``(depth, node, (lo_l, hi_l), (lo_r, hi_r))`` or None when no
        point of the LCA's subtree has y in range.
        """
        stats = stats or QueryStats()
        depth, node = self.lca(x1, x2)
        anc = depth - depth % self.pred_every
        anc_node = node >> (depth - anc)
        pidx = self.pred[anc]
        oracle = self._y_oracle(anc, anc_node, stats)
        lo = pidx.successor(y1, oracle, anc_node)
        hi = pidx.predecessor(y2, oracle, anc_node)
        if lo is None or hi is None or lo > hi:
            return None
        cur = anc_node
        for d in range(anc, depth):
            side = (node >> (depth - d - 1)) & 1
            lo, hi = self._child_range(d, cur, lo, hi, side)
            cur = 2 * cur + side
            stats.steps_down += 1
            if lo > hi:
                return None
        left = self._child_range(depth, node, lo, hi, 0)
        right = self._child_range(depth, node, lo, hi, 1)
        return depth, node, left, right

    # -- queries ----------------------------------------------------------
    def report(self, box: QueryBox, limit=None):
        if box.dim != 2:
            raise ContractError("2-d box required")
        (x1, y1), (x2, y2) = box.bounds()
        stats = QueryStats()
        self.last = stats
        out = []
        n = self.n
        x2, y2 = min(x2, n - 1), min(y2, n - 1)
        if n == 0 or x1 > x2 or y1 > y2 or (limit is not None and limit <= 0):
            return out
        t = self.tree
        if x1 == x2:
            if y1 <= t.coords[x1, 1] <= y2:
                out.append(t.point_at_leaf(x1))
            stats.reported = len(out)
            return out
        tr = self.translate(x1, x2, y1, y2, stats)
        if tr is None:
            return out
        depth, node, left, right = tr
        child_depth = depth + 1
        size = t.node_size(child_depth)
        for side, (lo, hi) in ((1, right), (0, left)):
            child = 2 * node + side
            base = child * size
            core = self.rmq[child_depth].core
            stack = [(lo, hi)] if lo <= hi else []
            while stack:
                a, b = stack.pop()
                m = core.query(base + a - 1, base + b - 1) - base + 1
                leaf = t.leaf_of(child_depth, child, m - 1)
                stats.report_calls += 1
                x = leaf
                if (side == 1 and x > x2) or (side == 0 and x < x1):
                    continue
                out.append(t.point_at_leaf(leaf))
                if limit is not None and len(out) >= limit:
                    stats.truncated = True
                    stats.reported = len(out)
                    return out
                if a <= m - 1:
                    stack.append((a, m - 1))
                if m + 1 <= b:
                    stack.append((m + 1, b))
        stats.reported = len(out)
        return out

    def empty(self, box: QueryBox) -> bool:
        return len(self.report(box, limit=1)) == 0

    def space_bits(self) -> dict:
        ball = self.tree.space_bits()["total"]
        rmq = sum(r.space_bits()["total"] for r in self.rmq if r is not None)
        pred = sum(p.space_bits() for p in self.pred.values())
        return {"ball": ball, "rmq": rmq, "pred": pred, "total": ball + rmq + pred}


def build_2d(points, B: int = 2, mode: str = FAST_QUERY) -> RangeReport2D:
    return RangeReport2D(points, B, mode)


def report_2d(s: RangeReport2D, box: QueryBox, limit=None):
    """Points in ``box``; with ``limit`` also returns whether it truncated."""
    pts = s.report(box, limit)
    if limit is None:
        return pts
    return pts, s.last.truncated


def empty_2d(s: RangeReport2D, box: QueryBox) -> bool:
    return s.empty(box)
