"""Brute-force reference answers, computed straight from the definitions.

Quadratic and cubic oracles refuse instances above their size cap instead
of sampling; caps come from the caller's configuration.
"""
from __future__ import annotations

import numpy as np

from ..core import ContractError, PointD, QueryBox, points_to_array

DEFAULT_CAPS = {"quadratic": 5000, "voxel": 64}


class OracleRefused(ContractError):
    """The instance is larger than the oracle's configured cap."""


def _arr(points, d=None):
    if len(points) and isinstance(points[0], PointD):
        return points_to_array(points)[0]
    a = np.asarray(points, dtype=np.int64)
    return a.reshape(-1, d) if d else a


def _cap(caps, kind, size, what):
    limit = (caps or DEFAULT_CAPS).get(kind, DEFAULT_CAPS[kind])
    if size > limit:
        raise OracleRefused(f"{what}: size {size} exceeds the {kind} oracle cap {limit}")


# -- range queries ------------------------------------------------------------


def report(points, box: QueryBox) -> list:
    """Indices of the points inside ``box``."""
    P = _arr(points, box.dim)
    lo, hi = box.bounds()
    keep = np.ones(len(P), dtype=bool)
    for a in range(box.dim):
        keep &= (P[:, a] >= lo[a]) & (P[:, a] <= hi[a])
    return np.nonzero(keep)[0].tolist()


def argmin(points, priorities, box: QueryBox):
    """Index of the in-box point of least priority, lowest index on ties."""
    best = None
    pr = np.asarray(priorities)
    for i in report(points, box):
        if best is None or pr[i] < pr[best]:
            best = i
    return best


def sort_ranks(values, ids) -> list:
    """Rank of each value after a stable sort on (value, id)."""
    keyed = sorted(range(len(values)), key=lambda i: (int(values[i]), int(ids[i])))
    out = [0] * len(keyed)
    for r, i in enumerate(keyed):
        out[i] = r
    return out


def predecessor(keys, y: int):
    """1-based rank of the largest key <= y in a sorted array, or None."""
    r = int(np.searchsorted(np.asarray(keys), y, side="right"))
    return r if r else None


def alphabet_rank(symbols) -> list:
    seen: dict = {}
    out = []
    for s in np.asarray(symbols).tolist():
        seen[s] = seen.get(s, 0) + 1
        out.append(seen[s])
    return out


def rmq(keys, i: int, j: int) -> int:
    """Leftmost minimum position in keys[i..j], 1-based."""
    seg = np.asarray(keys)[i - 1:j]
    return int(np.argmin(seg)) + i


def ball_leaf(points2d, level: int, node: int, index: int) -> int:
    """x-rank of the index-th (1-based) ball of a node, by listing the node.

    ``points2d`` are in rank space; the tree is padded to a power of two with
    dummies holding the largest ranks.
    """
    P = np.asarray(points2d, dtype=np.int64).reshape(-1, 2)
    n = len(P)
    size = 1
    while size < max(n, 1):
        size *= 2
    xs = np.arange(size)
    ys = np.arange(size)
    xs[:n], ys[:n] = P[:, 0], P[:, 1]
    span = size >> level
    inside = (xs >= node * span) & (xs < (node + 1) * span)
    balls = xs[inside][np.argsort(ys[inside], kind="stable")]
    return int(balls[index - 1])


def routing_bits(points2d) -> list:
    """Root routing bits in y order: 1 when the point's x-rank is in the upper half."""
    P = np.asarray(points2d, dtype=np.int64).reshape(-1, 2)
    size = 1
    while size < max(len(P), 1):
        size *= 2
    by_y = P[np.argsort(P[:, 1], kind="stable")]
    return [int(x >= size // 2) for x in by_y[:, 0].tolist()]


def step_down(bits, index: int):
    """(child, index in child) of the index-th ball given a node's routing bits."""
    b = list(bits)[:index]
    return b[-1], sum(1 for v in b if v == b[-1])


def lca(height: int, x1: int, x2: int):
    """(depth, node) of the deepest node whose leaf range holds both leaves."""
    depth, node = 0, 0
    while depth < height:
        span = 1 << (height - depth - 1)
        c1 = (x1 - node * 2 * span) >= span
        c2 = (x2 - node * 2 * span) >= span
        if c1 != c2:
            break
        node = 2 * node + int(c1)
        depth += 1
    return depth, node


# -- dominance family ----------------------------------------------------------


def dominance_pairs(inputs, queries, caps=None) -> set:
    P, Q = _arr(inputs), _arr(queries)
    _cap(caps, "quadratic", max(len(P), len(Q)), "dominance pairs")
    if len(P) == 0 or len(Q) == 0:
        return set()
    out = set()
    for j in range(len(Q)):
        hit = np.nonzero(np.all(P <= Q[j], axis=1))[0]
        out.update((int(i), j) for i in hit)
    return out


def emptiness(inputs, queries, caps=None) -> np.ndarray:
    """Per query: is some input dominated by it?"""
    P, Q = _arr(inputs), _arr(queries)
    _cap(caps, "quadratic", max(len(P), len(Q)), "dominance emptiness")
    out = np.zeros(len(Q), dtype=bool)
    for j in range(len(Q)):
        out[j] = bool(len(P)) and bool(np.any(np.all(P <= Q[j], axis=1)))
    return out


def enclosure(rects, caps=None) -> set:
    """(encloser, enclosed) pairs of distinct rectangles (x1, x2, y1, y2)."""
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    _cap(caps, "quadratic", len(R), "enclosure")
    out = set()
    for i in range(len(R)):
        inside = ((R[i, 0] <= R[:, 0]) & (R[:, 1] <= R[i, 1]) &
                  (R[i, 2] <= R[:, 2]) & (R[:, 3] <= R[i, 3]))
        out.update((i, int(j)) for j in np.nonzero(inside)[0] if j != i)
    return out


def maxima(points, caps=None) -> list:
    """Points not dominated by another point with a strict gain somewhere."""
    P = _arr(points)
    _cap(caps, "quadratic", len(P), "maxima")
    out = []
    for i in range(len(P)):
        ge = np.all(P >= P[i], axis=1) & np.any(P > P[i], axis=1)
        if not ge.any():
            out.append(i)
    return out


def point_location(rects, queries, caps=None) -> list:
    """First rectangle (x1, x2, y1, y2) containing each query, or -1."""
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    Q = np.asarray(queries, dtype=np.int64).reshape(-1, 2)
    _cap(caps, "quadratic", max(len(R), len(Q)), "point location")
    out = []
    for x, y in Q.tolist():
        hit = np.nonzero((R[:, 0] <= x) & (x <= R[:, 1]) & (R[:, 2] <= y) & (y <= R[:, 3]))[0]
        out.append(int(hit[0]) if len(hit) else -1)
    return out


def linfty_within(red, blue, r: int, caps=None) -> bool:
    A, B = _arr(red), _arr(blue)
    _cap(caps, "quadratic", max(len(A), len(B)), "L-infinity decision")
    for a in A:
        if len(B) and np.any(np.max(np.abs(B - a), axis=1) <= r):
            return True
    return False


def conflict_lists(corners, S, caps=None) -> list:
    """Per corner, the indices of the points of S it dominates."""
    C, P = _arr(corners, 3), _arr(S, 3)
    _cap(caps, "quadratic", max(len(C), len(P)), "conflict lists")
    return [np.nonzero(np.all(P <= c, axis=1))[0].tolist() for c in C]


def envelope_voxels(R, U: int, caps=None) -> np.ndarray:
    """Boolean [U, U, U] grid: voxel dominates some point of R."""
    _cap(caps, "voxel", U, "envelope voxels")
    P = _arr(R, 3)
    above = np.zeros((U, U, U), dtype=bool)
    for x, y, z in P.tolist():
        above[x:, y:, z:] = True
    return above


_SUITE = {
    "report": lambda inst, caps: report(*inst),
    "argmin": lambda inst, caps: argmin(*inst),
    "sort_ranks": lambda inst, caps: sort_ranks(*inst),
    "predecessor": lambda inst, caps: predecessor(*inst),
    "alphabet_rank": lambda inst, caps: alphabet_rank(inst),
    "rmq": lambda inst, caps: rmq(*inst),
    "ball_leaf": lambda inst, caps: ball_leaf(*inst),
    "lca": lambda inst, caps: lca(*inst),
    "routing_bits": lambda inst, caps: routing_bits(inst),
    "step_down": lambda inst, caps: step_down(*inst),
    "dominance_pairs": lambda inst, caps: dominance_pairs(*inst, caps=caps),
    "emptiness": lambda inst, caps: emptiness(*inst, caps=caps),
    "enclosure": lambda inst, caps: enclosure(inst, caps=caps),
    "maxima": lambda inst, caps: maxima(inst, caps=caps),
    "point_location": lambda inst, caps: point_location(inst[0], inst[1], caps=caps),
    "linfty": lambda inst, caps: linfty_within(*inst, caps=caps),
    # trailing instance items (the sample a structure was built from) are context
    "conflict_lists": lambda inst, caps: conflict_lists(inst[0], inst[1], caps=caps),
    "envelope": lambda inst, caps: envelope_voxels(*inst, caps=caps),
}


def oracle_suite(tag: str, instance, caps=None):
    """Reference answer for problem ``tag`` on ``instance``."""
    if tag not in _SUITE:
        raise ContractError(f"unknown oracle {tag!r}; have {sorted(_SUITE)}")
    return _SUITE[tag](instance, caps)
