"""Ball inheritance: find the leaf a ball reaches from any node of a perfect
binary tree.

Each point is a ball.  The root lists all balls by y; every node passes its
balls to its two children keeping that order, and a ball ends at the leaf
given by its x-rank.  Per-level routing bits support one-level steps, and
rank indexes over wider alphabets support skipping several levels at once
according to a :class:`SkipPlan`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import ContractError, PointD, points_to_array
from .succinct import AlphabetRankIndex

FAST_QUERY = "fast-query"
LOW_SPACE = "low-space"
MAX_JUMP = 16  # alphabet 2^16 at most, so a symbol is one 16-bit table index


def _trailing_zeros_base(d: int, base: int) -> int:
    i = 0
    while d % base == 0:
        d //= base
        i += 1
    return i


def _largest_power_at_most(base: int, limit: int) -> int:
    p = 1
    while p * base <= limit:
        p *= base
    return p


@dataclass(frozen=True)
class SkipPlan:
    mode: str = FAST_QUERY
    base: int = 2

    def __post_init__(self):
        if self.mode not in (FAST_QUERY, LOW_SPACE):
            raise ContractError(f"unknown mode {self.mode!r}")
        if self.base < 2:
            raise ContractError("base must be at least 2")

    def targets(self, height: int) -> dict:
        """Map each source depth to the depth its stored jump lands on."""
        out = {}
        B = self.base
        for d in range(height):
            if self.mode == FAST_QUERY:
                if d == 0:
                    out[d] = height
                    continue
                step = B ** (_trailing_zeros_base(d, B) + 1)
                out[d] = min(height, (d // step + 1) * step)
            else:
                if d == 0:
                    jump = _largest_power_at_most(B, max(1, height))
                else:
                    jump = B ** _trailing_zeros_base(d, B)
                out[d] = min(height, d + jump)
        return out

    def pairs(self, height: int) -> list:
        """(source depth, jump length) for every stored conceptual jump."""
        return [(d, t - d) for d, t in sorted(self.targets(height).items())]

    def hop_bound(self, height: int) -> float:
        import math

        levels = math.log(max(height, 2), self.base) + 1
        return levels if self.mode == FAST_QUERY else self.base * levels


def encode_ball(level: int, node: int, index: int) -> int:
    """Pack a ball identity into one 64-bit value (6/29/29 bits)."""
    if not (0 <= level < 64 and 0 <= node < 1 << 29 and 0 <= index < 1 << 29):
        raise ContractError("ball identity out of range")
    return (level << 58) | (node << 29) | index


def decode_ball(code: int):
    return code >> 58, (code >> 29) & ((1 << 29) - 1), code & ((1 << 29) - 1)


class BallTree:
    """Perfect binary tree over x-ranks, balls ordered by y at the root.

    Node ``v`` at depth ``d`` is numbered ``0..2^d - 1`` left to right; ball
    indices are 1-based within their node.  Inputs are padded to a power of
    two with dummy balls that take the largest x- and y-ranks, so they sit at
    the right end of every list and never fall inside a query over real
    ranks.
    """

    def __init__(self, points2d, plan: SkipPlan = SkipPlan()):
        if len(points2d) and isinstance(points2d[0], PointD):
            arr, ids = points_to_array(points2d)
        else:
            arr = np.asarray(points2d, dtype=np.int64).reshape(-1, 2)
            ids = np.arange(len(arr), dtype=np.int64)
        n = len(arr)
        if n:
            for a in range(2):
                if not np.array_equal(np.sort(arr[:, a]), np.arange(n)):
                    raise ContractError("points must be in rank space")
        self.n = n
        self.plan = plan
        size = 1
        while size < max(n, 1):
            size *= 2
        self.size = size
        self.height = size.bit_length() - 1
        xs = np.arange(size, dtype=np.int64)
        ys = np.arange(size, dtype=np.int64)
        if n:
            xs[: n] = arr[:, 0]
            ys[: n] = arr[:, 1]
        self.coords = np.zeros((size, 2), dtype=np.int64)
        self.coords[xs, 0] = xs
        self.coords[xs, 1] = ys
        self.point_ids = np.full(size, -1, dtype=np.int64)
        self.point_ids[xs[:n]] = ids[:n]
        root = xs[np.argsort(ys, kind="stable")]
        self.root_x = root
        L = self.height
        # level arrays: x-ranks of balls at depth d, nodes concatenated
        self._levels = []
        for d in range(L + 1):
            key = root >> (L - d)
            self._levels.append(root[np.argsort(key, kind="stable")])
        self._cores = {}
        self.routing = []
        for d in range(L):
            sym = (self._levels[d] >> (L - d - 1)) & 1
            idx = AlphabetRankIndex(sym, 2, segment=1 << (L - d))
            self.routing.append(idx)
            self._cores[(d, d + 1)] = idx
        self.targets = plan.targets(L)
        route_start = np.zeros(max(L, 1), dtype=np.int64)
        route_len = np.zeros(max(L, 1), dtype=np.int64)
        hop_dst, hop_core, core_list, core_pos = [], [], [], {}
        for d in range(L):
            t = self.targets[d]
            route_start[d] = len(hop_dst)
            src = d
            while src < t:
                dst = min(t, src + MAX_JUMP)
                key = (src, dst)
                if key not in self._cores:
                    delta = dst - src
                    sym = (self._levels[src] >> (L - dst)) & ((1 << delta) - 1)
                    self._cores[key] = AlphabetRankIndex(sym, 1 << delta, segment=1 << (L - src))
                if key not in core_pos:
                    core_pos[key] = len(core_list)
                    core_list.append(self._cores[key].core)
                hop_dst.append(dst)
                hop_core.append(core_pos[key])
                src = dst
            route_len[d] = len(hop_dst) - route_start[d]
        self._levels = None  # build scaffolding only
        k = kernels.get()
        self.chaser = k.BallChaser(L, route_start, route_len,
                                   np.asarray(hop_dst, dtype=np.int64),
                                   np.asarray(hop_core, dtype=np.int64), core_list)

    # -- identities -------------------------------------------------------
    def node_size(self, level: int) -> int:
        return 1 << (self.height - level)

    def _check(self, level, node, index):
        if not 0 <= level <= self.height:
            raise ContractError(f"level {level} outside 0..{self.height}")
        if not 0 <= node < 1 << level:
            raise ContractError(f"node {node} outside level {level}")
        if not 1 <= index <= self.node_size(level):
            raise ContractError(f"ball index {index} outside node of {self.node_size(level)}")

    def routing_bits(self, level: int, node: int) -> list:
        idx = self.routing[level]
        s = self.node_size(level)
        return [idx.access(node * s + i + 1) for i in range(s)]

    # -- queries ----------------------------------------------------------
    def step_down(self, level: int, node: int, index: int):
        """The same ball one level below: (child node, 1-based index)."""
        self._check(level, node, index)
        if level == self.height:
            raise ContractError("leaf balls cannot step down")
        core = self.routing[level].core
        k = node * self.node_size(level) + index - 1
        bit = core.symbol(k)
        return 2 * node + int(bit), int(core.rank(k))

    def leaf_of(self, level: int, node: int, index: int) -> int:
        """Leaf (x-rank) of a ball; ``index`` is 0-based, no checks."""
        return self.chaser.leaf(level, node, index)

    def query_leaf(self, level: int, node: int, index: int):
        self._check(level, node, index)
        leaf = int(self.chaser.leaf(level, node, index - 1))
        return leaf, self.point_at_leaf(leaf)

    def point_at_leaf(self, leaf: int):
        pid = int(self.point_ids[leaf])
        if pid < 0:
            return None
        x, y = self.coords[leaf]
        return PointD((int(x), int(y)), pid)

    @property
    def hops(self) -> int:
        return int(self.chaser.hops)

    def reset_hops(self):
        self.chaser.hops = 0

    def space_bits(self) -> dict:
        routing = sum(ix.space_bits()["total"] for ix in self.routing)
        skips = sum(ix.space_bits()["total"] for key, ix in self._cores.items() if key[1] - key[0] > 1)
        leaves = self.size * 2 * max(1, self.height)
        return {"routing": routing, "skips": skips, "leaves": leaves,
                "total": routing + skips + leaves}


def build_ball_tree(points2d, plan: SkipPlan = SkipPlan()) -> BallTree:
    return BallTree(points2d, plan)


def step_down(tree: BallTree, level: int, node: int, index: int):
    return tree.step_down(level, node, index)


def query_leaf(tree: BallTree, level: int, node: int, index: int):
    return tree.query_leaf(level, node, index)
