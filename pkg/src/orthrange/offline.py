"""Offline orthogonal searching: every query is known up front.

The workhorse is dominance reporting between an input set and a query set.
In 3-d one shallow cutting of a random sample sends each query to a cell
whose conflict list holds all of its answers; queries above the sample's
staircase are "bad" and get solved by a second round with the roles of
inputs and queries swapped.  In 4-d a range tree over the last coordinate
turns each level into a batch of 3-d problems, one per node, solved by a
single cutting after the nodes are laid out in disjoint boxes.

Pair outputs are ``(input index, query index)`` arrays.  Dominance is
closed: input p answers query q when p <= q in every coordinate.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import ContractError, PointD, points_to_array
from .cuttings import build_staircase, build_vd
from .succinct import ceil_log2

WORD = 64
FEW_POINTS = 256  # 2^ceil(sqrt(w)); below this a 3-d instance is one packed scan
LEAF = 64  # tree blocks this small are compared directly
RESAMPLES = 3
OVERSIZE = 8.0  # a conflict list is oversized beyond OVERSIZE * K * ln N
MAX_DEPTH = 2
_PACK_LIMIT = 1 << 20  # three guarded 21-bit fields fill a word
DEBUG = os.environ.get("ORTHRANGE_DEBUG", "") not in ("", "0")


def _arr(points, d=None):
    if len(points) and isinstance(points[0], PointD):
        arr, _ = points_to_array(points)
        return arr
    arr = np.asarray(points, dtype=np.int64)
    if d is not None:
        if arr.size % d or (arr.ndim == 2 and arr.size and arr.shape[1] != d):
            raise ContractError(f"points are not {d}-dimensional")
        arr = arr.reshape(-1, d)
    return arr


def _rng(seed, *path):
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2**63 - 1))
    return np.random.default_rng([0 if seed is None else int(seed), *path])


# ---------------------------------------------------------------------------
# instances and results


@dataclass
class OfflineInstance:
    """Inputs and queries with per-axis presorted orders.

    Elements ``0..n-1`` are inputs and ``n..n+m-1`` queries.  ``orders[a]``
    sorts all elements by (coordinate, query flag, element), so on equal
    values inputs come first and ``p <= q`` on an axis is exactly ``p``
    preceding ``q``.
    """

    inputs: np.ndarray
    queries: np.ndarray
    orders: list = field(default_factory=list)

    @classmethod
    def build(cls, inputs, queries, d=None) -> "OfflineInstance":
        P = _arr(inputs, d)
        Q = _arr(queries, d)
        if P.ndim != 2:
            P = P.reshape(0, Q.shape[1] if Q.ndim == 2 else (d or 0))
        if Q.ndim != 2:
            Q = Q.reshape(0, P.shape[1])
        if len(P) and len(Q) and P.shape[1] != Q.shape[1]:
            raise ContractError("inputs and queries differ in dimension")
        dim = P.shape[1] if len(P) else Q.shape[1]
        P = P.reshape(-1, dim)
        Q = Q.reshape(-1, dim)
        E = np.concatenate([P, Q]).astype(np.int64)
        isq = np.r_[np.zeros(len(P), np.int8), np.ones(len(Q), np.int8)]
        idx = np.arange(len(E))
        orders = [np.lexsort((idx, isq, E[:, a])).astype(np.int64) for a in range(dim)]
        return cls(P.astype(np.int64), Q.astype(np.int64), orders)

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def m(self) -> int:
        return len(self.queries)

    @property
    def d(self) -> int:
        return self.inputs.shape[1] if self.n else self.queries.shape[1]

    @property
    def U(self) -> int:
        top = max(int(self.inputs.max()) if self.n else 0, int(self.queries.max()) if self.m else 0)
        return top + 1

    @property
    def elements(self) -> np.ndarray:
        return np.concatenate([self.inputs, self.queries])

    @property
    def is_query(self) -> np.ndarray:
        return np.r_[np.zeros(self.n, np.int8), np.ones(self.m, np.int8)]

    def check_orders(self, samples: int = 64, seed: int = 0) -> bool:
        E, isq = self.elements, self.is_query
        rng = np.random.default_rng(seed)
        for a, order in enumerate(self.orders):
            if len(order) < 2:
                continue
            at = rng.integers(0, len(order) - 1, size=min(samples, len(order) - 1))
            i, j = order[at], order[at + 1]
            ki = np.stack([E[i, a], isq[i], i], 1)
            kj = np.stack([E[j, a], isq[j], j], 1)
            if not all(tuple(u) < tuple(v) for u, v in zip(ki.tolist(), kj.tolist())):
                return False
        return True


@dataclass
class OfflineResult:
    pairs_input: np.ndarray
    pairs_query: np.ndarray
    trace: list = field(default_factory=list)

    def __len__(self):
        return len(self.pairs_input)

    @property
    def k(self) -> int:
        return len(self.pairs_input)

    @property
    def max_depth(self) -> int:
        return max((t["depth"] for t in self.trace), default=0)

    def pairs(self) -> list:
        return list(zip(self.pairs_input.tolist(), self.pairs_query.tolist()))

    def as_set(self) -> set:
        return set(self.pairs())

    def level_totals(self) -> list:
        """Conflict-list totals per (depth, level) across the run."""
        out = []
        for t in self.trace:
            for lv in t.get("levels", []):
                out.append((t["depth"], lv["level"], lv.get("conflict_total", 0)))
        return out


# ---------------------------------------------------------------------------
# batched layout: one 3-d (or d-dim) instance per group, packed so that no
# input of one group can dominate a query of another


def _separate(E, isq, group, ngroups, orders, axes):
    """Group-local ranks laid out in disjoint boxes.

    ``orders`` are the elements' axis orders (inputs first on ties).  Group
    g occupies x in [X_g, X_g + s_g) and y in [Y_g, Y_g + s_g) with X rising
    and Y falling in g, so cross-group dominance is impossible; the other
    axes carry plain group-local ranks.  Returns (coords, X, sizes, Y).
    """
    k = kernels.get()
    P = len(E)
    sizes = np.bincount(group, minlength=ngroups).astype(np.int64)
    X = np.zeros(ngroups, dtype=np.int64)
    np.cumsum(sizes[:-1], out=X[1:])
    Y = P - X - sizes
    out = np.empty((P, len(axes)), dtype=np.int64)
    for col, a in enumerate(axes):
        r = k.group_cumcount(orders[a], group, ngroups)
        if col == 0:
            r = r + X[group]
        elif col == 1:
            r = r + Y[group]
        out[:, col] = r
    return out, X, sizes, Y


def _restrict_orders(orders, keep_mask, local):
    return [local[o[keep_mask[o]]] for o in orders]


def _value_order(v, nb):
    order, _ = kernels.get().bucket(np.ascontiguousarray(v, dtype=np.int64), int(nb))
    return order


def _scan_cells(coords, orders3, ent_elem, ent_cell, ent_isq, ncell, keys, any_only, exclude_self):
    """Packed quadratic scan of every cell's inputs against its queries.

    Entries are (element, cell) memberships; they must be grouped by
    element (all entries of an element contiguous).  Cell-local ranks are
    assigned by walking the elements in each axis order.  Returns element
    pairs, or None when some cell is too big to pack.
    """
    k = kernels.get()
    ne = len(ent_elem)
    if ne == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z
    counts = np.bincount(ent_cell, minlength=ncell)
    widest = int(counts.max())
    if widest >= _PACK_LIMIT:
        return None
    f = max(1, ceil_log2(widest))
    F = f + 1
    P = len(coords)
    ent_len = np.bincount(ent_elem, minlength=P).astype(np.int64)
    ent_start = np.zeros(P, dtype=np.int64)
    np.cumsum(ent_len[:-1], out=ent_start[1:])
    words = np.zeros(ne, dtype=np.uint64)
    for a in range(3):
        r = k.entry_ranks(orders3[a], ent_start, ent_len, ent_cell, ncell)
        words |= r.astype(np.uint64) << np.uint64(a * F)
    H = 0
    for a in range(3):
        H |= 1 << (a * F + f)
    qmask = ent_isq.astype(bool)
    words[qmask] |= np.uint64(H)
    li = np.nonzero(~qmask)[0]
    qi = np.nonzero(qmask)[0]
    lorder, loff = k.bucket(np.ascontiguousarray(ent_cell[li]), ncell)
    qorder, qoff = k.bucket(np.ascontiguousarray(ent_cell[qi]), ncell)
    li = li[lorder]
    qi = qi[qorder]
    lelem = ent_elem[li]
    qelem = ent_elem[qi]
    pe, qe = k.cell_scan(loff, np.ascontiguousarray(words[li]), lelem, keys[lelem],
                         qoff, np.ascontiguousarray(words[qi]), qelem, keys[qelem],
                         H, any_only, exclude_self)
    return pe, qe


def _sweep3(coords, isq, keys, any_only, exclude_self):
    """3-d dominance by the z-sweep; coords need distinct x per element
    with inputs first on ties (layout coordinates qualify)."""
    k = kernels.get()
    P = len(coords)
    if P == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z
    idx = np.arange(P)
    xr = np.empty(P, dtype=np.int64)
    xr[np.lexsort((idx, isq, coords[:, 0]))] = idx
    zorder = np.lexsort((idx, isq, coords[:, 2])).astype(np.int64)
    return k.dom3_sweep(zorder, xr, np.ascontiguousarray(coords[:, 1]),
                        isq.astype(np.int8), keys, any_only, exclude_self)


def _pass3(coords, isq, keys, X, sizes, Y, K, rng, any_only, exclude_self, stats):
    """One cutting over a batched 3-d layout.

    Returns (input elems, query elems, bad query mask, unresolved query
    mask).  ``unresolved`` only arises with ``exclude_self``: the witness
    that made the query bad was its own copy.
    """
    k = kernels.get()
    P = len(coords)
    U = P + 2
    inp = np.nonzero(isq == 0)[0]
    qry = np.nonzero(isq == 1)[0]
    S = coords[inp].copy()
    S[:, 2] += 1
    Qc = coords[qry].copy()
    Qc[:, 2] += 1
    G = len(sizes)
    fences = np.stack([X[:-1] + sizes[:-1], Y[:-1], np.zeros(G - 1, dtype=np.int64)], 1) if G > 1 else np.zeros((0, 3), np.int64)
    n_all = max(P, 2)
    limit = OVERSIZE * K * math.log(n_all) + K
    attempt = 0
    while True:
        take = rng.random(len(inp)) < 1.0 / K
        samp = inp[take]
        R = np.concatenate([S[take], fences])
        stair = build_staircase(R, U)
        vd = build_vd(stair)
        seeds = vd.cell_of_xy(S[:, 0], S[:, 1]) if len(S) else np.zeros(0, np.int64)
        cells, pts, tests = k.conflict_bfs(
            np.ascontiguousarray(S[:, 0]), np.ascontiguousarray(S[:, 1]),
            np.ascontiguousarray(S[:, 2]), seeds, vd.x1, vd.x2, vd.y1, vd.y2, vd.top,
            vd.rstart, vd.rend, vd.by_y, vd.ustart, vd.uend, U)
        biggest = int(np.bincount(cells, minlength=len(vd)).max()) if len(cells) else 0
        if biggest <= limit or attempt >= RESAMPLES:
            break
        attempt += 1
    stats.update(samples=int(len(samp)), cells=int(len(vd)), conflict_total=int(len(cells)),
                 max_list=biggest, resamples=attempt, bfs_tests=int(tests))
    if biggest > limit:
        stats["oversized"] = True
        return None
    if len(qry):
        qcell = vd.cell_of_xy(Qc[:, 0], Qc[:, 1])
        good = Qc[:, 2] < vd.top[qcell]
    else:
        qcell = np.zeros(0, np.int64)
        good = np.zeros(0, bool)
    bad = np.zeros(P, dtype=bool)
    bad[qry[~good]] = True
    unresolved = np.zeros(P, dtype=bool)
    if exclude_self and (~good).any():
        owner = vd.owner[qcell[~good]]  # index into R; samples come first
        witness = samp[owner]
        self_hit = keys[witness] == keys[qry[~good]]
        unresolved[qry[~good][self_hit]] = True
    stats["bad"] = int((~good).sum())
    # entries grouped by element: inputs in BFS order, then good queries
    ent_elem = np.concatenate([inp[pts], qry[good]])
    ent_cell = np.concatenate([cells, qcell[good]])
    ent_isq = np.concatenate([np.zeros(len(pts), np.int8), np.ones(int(good.sum()), np.int8)])
    srt = np.argsort(ent_elem, kind="stable")
    ent_elem, ent_cell, ent_isq = ent_elem[srt], ent_cell[srt], ent_isq[srt]
    orders3 = [_value_order(coords[:, 0], P), _value_order(coords[:, 1], P),
               np.lexsort((np.arange(P), isq, coords[:, 2])).astype(np.int64)]
    res = _scan_cells(coords, orders3, ent_elem, ent_cell, ent_isq, len(vd), keys,
                      any_only, exclude_self)
    if res is None:
        stats["oversized"] = True
        return None
    pe, qe = res
    return pe, qe, bad, unresolved


# ---------------------------------------------------------------------------
# the dominance engine


def _empty_pairs():
    z = np.zeros(0, dtype=np.int64)
    return z, z


def _k3(n):
    return max(2, ceil_log2(max(n, 2)))


def _k4(n):
    return 1 << math.ceil(math.sqrt(max(1, ceil_log2(max(n, 2)))))


class _Engine:
    """Runs one dominance computation, reporting or emptiness."""

    def __init__(self, seed, any_only=False, exclude_self=False, force_fallback=False,
                 fast_path="auto", debug=None):
        self.seed = seed
        self.fast_path = fast_path
        self.debug = DEBUG if debug is None else debug
        self.any_only = any_only
        self.exclude_self = exclude_self
        self.force_fallback = force_fallback
        self.trace = []

    # -- entry points -----------------------------------------------------
    def run(self, E, isq, keys, orders, depth=0):
        """Pairs (input elem, query elem) for the instance, or for
        emptiness one witness pair per non-empty query."""
        d = E.shape[1]
        N = len(E)
        t = {"depth": depth, "d": d, "n": int((isq == 0).sum()), "m": int((isq == 1).sum()),
             "levels": [], "bad": 0, "fallback": False}
        self.trace.append(t)
        if self.debug:
            _check_sorted(E, isq, orders)
        if t["n"] == 0 or t["m"] == 0:
            return _empty_pairs()
        if d > 4:
            return self._split_last(E, isq, keys, orders, depth, t)
        if self.force_fallback or depth >= MAX_DEPTH or N < LEAF:
            t["fallback"] = True
            return self._fallback(E, isq, keys, orders)
        if d <= 2:
            E = np.concatenate([E, np.zeros((N, 3 - d), np.int64)], 1)
            orders = list(orders) + [np.lexsort((np.arange(N), isq)).astype(np.int64)] * (3 - d)
            d = 3
        if d == 3:
            pe, qe, bad = self._solve3(E, isq, keys, orders, depth, t)
        else:
            pe, qe, bad = self._solve4(E, isq, keys, orders, depth, t)
        t["bad"] = int(bad.sum())
        if self.any_only or not bad.any():
            return pe, qe
        keep = ~bad[qe]
        pe, qe = pe[keep], qe[keep]
        # bad queries: swap roles in the reflected space
        inp = np.nonzero(isq == 0)[0]
        bq = np.nonzero(bad)[0]
        sub = np.concatenate([bq, inp])
        E2 = (np.int64(E.max()) - E[sub]) if len(sub) else E[sub]
        isq2 = np.r_[np.zeros(len(bq), np.int8), np.ones(len(inp), np.int8)]
        orders2 = _orders_of(E2, isq2)
        a, b = self.run(E2[:, :d], isq2, keys[sub], orders2, depth + 1)
        return np.concatenate([pe, sub[b]]), np.concatenate([qe, sub[a]])

    # -- 3-d: one cutting --------------------------------------------------
    def _solve3(self, E, isq, keys, orders, depth, t):
        N = len(E)
        group = np.zeros(N, dtype=np.int64)
        if self.fast_path is True or (self.fast_path == "auto" and N <= FEW_POINTS):
            t["few_points"] = True
            coords, _, _, _ = _separate(E, isq, group, 1, orders, (0, 1, 2))
            orders3 = [_value_order(coords[:, 0], N), _value_order(coords[:, 1], N),
                       _value_order(coords[:, 2], N)]
            res = _scan_cells(coords, orders3, np.arange(N, dtype=np.int64),
                              np.zeros(N, dtype=np.int64), isq.astype(np.int8), 1, keys,
                              self.any_only, self.exclude_self)
            return res[0], res[1], np.zeros(N, dtype=bool)
        coords, X, sizes, Y = _separate(E, isq, group, 1, orders, (0, 1, 2))
        K = _k3(N)
        stats = {"level": 0, "K": K, "participants": N}
        t["levels"].append(stats)
        out = _pass3(coords, isq, keys, X, sizes, Y, K, _rng(self.seed, depth, 0),
                     self.any_only, self.exclude_self, stats)
        if out is None:
            pe, qe = _sweep3(coords, isq, keys, self.any_only, self.exclude_self)
            return pe, qe, np.zeros(N, dtype=bool)
        pe, qe, bad, unresolved = out
        if self.any_only:
            pe, qe, bad = self._settle_bad(coords, isq, keys, pe, qe, bad, unresolved)
        return pe, qe, bad

    def _settle_bad(self, coords, isq, keys, pe, qe, bad, unresolved):
        """Emptiness: a bad query has a witness unless it was its own."""
        bad = bad & ~unresolved
        if unresolved.any():
            part = (isq == 0) | unresolved
            sub = np.nonzero(part)[0]
            a, b = _sweep3(coords[sub], isq[sub], keys[sub], True, self.exclude_self)
            pe = np.concatenate([pe, sub[a]])
            qe = np.concatenate([qe, sub[b]])
        if bad.any():
            # witnessed by a sample point; no explicit pair is needed
            w = np.nonzero(bad)[0]
            pe = np.concatenate([pe, np.full(len(w), -1, dtype=np.int64)])
            qe = np.concatenate([qe, w])
        return pe, qe, np.zeros(len(bad), dtype=bool)

    # -- 4-d: range tree over the last coordinate ---------------------------
    def _tree_positions(self, E, isq, orders):
        pos = np.empty(len(E), dtype=np.int64)
        pos[orders[3]] = np.arange(len(E))
        return pos

    def _solve4(self, E, isq, keys, orders, depth, t):
        N = len(E)
        pos = self._tree_positions(E, isq, orders)
        K = _k4(N)
        bad = np.zeros(N, dtype=bool)
        pes, qes = [], []
        H = max(1, ceil_log2(N))
        leaf_log = ceil_log2(LEAF)
        for h in range(H, leaf_log, -1):
            res = self._level(E, isq, keys, orders, pos, h, K, depth, t, use_cutting=True)
            if res is None:
                continue
            pe, qe, b = res
            pes.append(pe)
            qes.append(qe)
            bad |= b
        pe, qe = self._leaves(E, isq, keys, orders[3], leaf_log)
        pes.append(pe)
        qes.append(qe)
        return np.concatenate(pes), np.concatenate(qes), bad

    def _level_layout(self, E, isq, orders, pos, h, axes):
        right = (pos >> (h - 1)) & 1
        part = ((isq == 0) & (right == 0)) | ((isq == 1) & (right == 1))
        group = pos >> h
        # keep only groups holding both an input and a query
        ng = int(group.max()) + 1 if len(group) else 0
        has_in = np.bincount(group[part & (isq == 0)], minlength=ng) > 0
        has_q = np.bincount(group[part & (isq == 1)], minlength=ng) > 0
        live = has_in & has_q
        part &= live[group]
        if not part.any():
            return None
        sub = np.nonzero(part)[0]
        gid = np.cumsum(live) - 1
        g = gid[group[sub]].astype(np.int64)
        local = np.full(len(E), -1, dtype=np.int64)
        local[sub] = np.arange(len(sub))
        sub_orders = _restrict_orders(orders, part, local)
        if self.debug:
            _check_sorted(E[sub], isq[sub], sub_orders)
        coords, X, sizes, Y = _separate(E[sub], isq[sub], g, int(live.sum()), sub_orders, axes)
        return sub, coords, X, sizes, Y

    def _level(self, E, isq, keys, orders, pos, h, K, depth, t, use_cutting):
        lay = self._level_layout(E, isq, orders, pos, h, (0, 1, 2))
        if lay is None:
            return None
        sub, coords, X, sizes, Y = lay
        P = len(sub)
        iq = isq[sub]
        ks = keys[sub]
        stats = {"level": h, "K": K, "participants": P, "groups": len(sizes)}
        t["levels"].append(stats)
        out = None
        if use_cutting and P >= LEAF:
            out = _pass3(coords, iq, ks, X, sizes, Y, K, _rng(self.seed, depth, h),
                         self.any_only, self.exclude_self, stats)
        if out is None:
            stats["sweep"] = True
            pe, qe = _sweep3(coords, iq, ks, self.any_only, self.exclude_self)
            bad = np.zeros(P, dtype=bool)
        else:
            pe, qe, bad, unresolved = out
            if self.any_only:
                pe, qe, bad = self._settle_bad(coords, iq, ks, pe, qe, bad, unresolved)
        full_bad = np.zeros(len(E), dtype=bool)
        full_bad[sub[bad]] = True
        pe = np.where(pe >= 0, sub[np.maximum(pe, 0)], -1)
        return pe, sub[qe], full_bad

    def _leaves(self, E, isq, keys, order4, leaf_log):
        k = kernels.get()
        o = order4
        pe, qe = k.block_brute(np.ascontiguousarray(E[o, 0]), np.ascontiguousarray(E[o, 1]),
                               np.ascontiguousarray(E[o, 2]), isq[o].astype(np.int8),
                               keys[o], 1 << leaf_log, self.any_only, self.exclude_self)
        return o[pe], o[qe]

    # -- fallbacks ----------------------------------------------------------
    def _fallback(self, E, isq, keys, orders):
        d = E.shape[1]
        N = len(E)
        if d <= 3:
            if d < 3:
                E = np.concatenate([E, np.zeros((N, 3 - d), np.int64)], 1)
            return _sweep3(E, isq, keys, self.any_only, self.exclude_self)
        pos = self._tree_positions(E, isq, orders)
        pes, qes = [], []
        H = max(1, ceil_log2(N))
        leaf_log = ceil_log2(LEAF)
        t = {"depth": -1, "levels": []}
        for h in range(H, leaf_log, -1):
            res = self._level(E, isq, keys, orders, pos, h, 0, 0, t, use_cutting=False)
            if res is not None:
                pes.append(res[0])
                qes.append(res[1])
        pe, qe = self._leaves(E, isq, keys, orders[3], leaf_log)
        pes.append(pe)
        qes.append(qe)
        return np.concatenate(pes), np.concatenate(qes)

    # -- d >= 5: halve on the last coordinate --------------------------------
    def _split_last(self, E, isq, keys, orders, depth, t):
        d = E.shape[1]
        N = len(E)
        last = d - 1
        pos = np.empty(N, dtype=np.int64)
        pos[orders[last]] = np.arange(N)
        pes, qes = [], []
        H = max(1, ceil_log2(N))
        for h in range(H, 0, -1):
            lay = self._level_layout(E, isq, orders, pos, h, tuple(range(last)))
            if lay is None:
                continue
            sub, coords, X, sizes, Y = lay
            iq = isq[sub]
            sub_orders = _orders_of(coords, iq)
            pe, qe = self.run(coords, iq, keys[sub], sub_orders, depth)
            pes.append(np.where(pe >= 0, sub[np.maximum(pe, 0)], -1))
            qes.append(sub[qe])
        if not pes:
            return _empty_pairs()
        return np.concatenate(pes), np.concatenate(qes)


def _orders_of(E, isq):
    idx = np.arange(len(E))
    return [np.lexsort((idx, isq, E[:, a])).astype(np.int64) for a in range(E.shape[1])]


def _check_sorted(E, isq, orders):
    for a, o in enumerate(orders):
        v = E[o, a]
        f = isq[o]
        ok = (v[1:] > v[:-1]) | ((v[1:] == v[:-1]) & (f[1:] >= f[:-1]))
        if not ok.all():
            raise AssertionError(f"sub-instance order on axis {a} is not sorted")


def _engine_run(inst: OfflineInstance, seed, any_only=False, exclude_self=False,
                keys=None, force_fallback=False, fast_path="auto"):
    E = inst.elements
    isq = inst.is_query
    if keys is None:
        keys = np.arange(len(E), dtype=np.int64)
    eng = _Engine(seed, any_only, exclude_self, force_fallback, fast_path)
    pe, qe = eng.run(E, isq, np.asarray(keys, dtype=np.int64), inst.orders)
    return pe, qe, eng.trace


def _dedupe(pe, qe):
    if len(pe) == 0:
        return pe, qe
    key = np.unique(np.stack([pe, qe], 1), axis=0)
    return key[:, 0], key[:, 1]


# ---------------------------------------------------------------------------
# public dominance operations


def _as_instance(inst_or_inputs, queries=None, d=None) -> OfflineInstance:
    if isinstance(inst_or_inputs, OfflineInstance):
        return inst_or_inputs
    return OfflineInstance.build(inst_or_inputs, queries, d)


def _result(inst, pe, qe, trace):
    n = inst.n
    return OfflineResult(pe.astype(np.int64), (qe - n).astype(np.int64), trace)


def offline_dominance(inst, queries=None, seed=0, force_fallback=False,
                      fast_path="auto") -> OfflineResult:
    """All (input, query) pairs with input <= query, any dimension.

    ``fast_path`` controls the packed single-cell solve of small 3-d
    instances: "auto" uses it up to FEW_POINTS elements, True always,
    False never.
    """
    inst = _as_instance(inst, queries)
    pe, qe, trace = _engine_run(inst, seed, force_fallback=force_fallback, fast_path=fast_path)
    return _result(inst, pe, qe, trace)


def offline_dominance_3d(inst, queries=None, seed=0, fast_path="auto") -> OfflineResult:
    inst = _as_instance(inst, queries, 3)
    if inst.d != 3:
        raise ContractError("3-d instance required")
    return offline_dominance(inst, seed=seed, fast_path=fast_path)


def offline_dominance_4d(inst, queries=None, seed=0) -> OfflineResult:
    inst = _as_instance(inst, queries, 4)
    if inst.d != 4:
        raise ContractError("4-d instance required")
    return offline_dominance(inst, seed=seed)


def higher_d_dominance(inst, queries=None, seed=0) -> OfflineResult:
    inst = _as_instance(inst, queries)
    if inst.d < 5:
        raise ContractError("higher_d_dominance needs d >= 5")
    return offline_dominance(inst, seed=seed)


def dominance_fallback(inst, queries=None) -> OfflineResult:
    """The sweep-based algorithm alone, without cuttings."""
    inst = _as_instance(inst, queries)
    return offline_dominance(inst, force_fallback=True)


def offline_dominance_emptiness(inst, queries=None, seed=0, exclude_self_keys=None):
    """Per query: does any input lie in its lower orthant?

    Bad queries need no second round: they dominate a sample point, which
    is an input.  Returns (boolean array, trace).
    """
    inst = _as_instance(inst, queries)
    keys = None
    if exclude_self_keys is not None:
        keys = np.asarray(exclude_self_keys, dtype=np.int64)
    pe, qe, trace = _engine_run(inst, seed, any_only=True,
                                exclude_self=exclude_self_keys is not None, keys=keys)
    out = np.zeros(inst.m, dtype=bool)
    out[qe - inst.n] = True
    return out, trace


# ---------------------------------------------------------------------------
# applications


def rectangle_enclosure(rects, seed=0) -> OfflineResult:
    """Ordered pairs (encloser, enclosed) of distinct rectangles.

    ``rects`` rows are (x1, x2, y1, y2), closed.  Containment is non-strict,
    so identical rectangles enclose each other.  ``pairs()`` yields
    (encloser, enclosed): the encloser plays the query.
    """
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    if len(R) == 0:
        z = np.zeros(0, dtype=np.int64)
        return OfflineResult(z, z, [])
    if np.any(R[:, 0] > R[:, 1]) or np.any(R[:, 2] > R[:, 3]):
        raise ContractError("rectangle with inverted side")
    U = int(R.max()) + 1
    pts = np.stack([U - 1 - R[:, 0], R[:, 1], U - 1 - R[:, 2], R[:, 3]], 1)
    inst = OfflineInstance.build(pts, pts)
    res = offline_dominance(inst, seed=seed)
    keep = res.pairs_input != res.pairs_query
    return OfflineResult(res.pairs_query[keep], res.pairs_input[keep], res.trace)


def maxima(points, d=None, seed=0) -> np.ndarray:
    """Indices of the points no other point dominates with a strict gain.

    Duplicate points are all maximal.  Up to 3-d this is a sweep; from 4-d on
    it is dominance emptiness with the roles reversed.
    """
    P = _arr(points, d)
    if P.ndim != 2 or len(P) == 0:
        return np.zeros(0, dtype=np.int64)
    dim = P.shape[1]
    uniq, inv = np.unique(P, axis=0, return_inverse=True)
    inv = np.asarray(inv).reshape(-1)
    if dim == 1:
        is_max = np.zeros(len(uniq), bool)
        is_max[-1] = True
    elif dim <= 3:
        is_max = _maxima_sweep(uniq)
    else:
        U = int(uniq.max()) + 1
        refl = U - 1 - uniq
        inst = OfflineInstance.build(refl, refl)
        keys = np.r_[np.arange(len(uniq)), np.arange(len(uniq))]
        nonempty, _ = offline_dominance_emptiness(inst, seed=seed, exclude_self_keys=keys)
        is_max = ~nonempty
    return np.nonzero(is_max[inv])[0].astype(np.int64)


def _maxima_sweep(uniq):
    """Maxima of distinct points in 2-d or 3-d by a descending sweep."""
    n, dim = uniq.shape
    if dim == 2:
        uniq = np.concatenate([uniq, np.zeros((n, 1), np.int64)], 1)
    order = np.lexsort((-uniq[:, 2], -uniq[:, 1], -uniq[:, 0])).astype(np.int64)
    ys = np.unique(uniq[:, 1])
    yr = (len(ys) - np.searchsorted(ys, uniq[:, 1])).astype(np.int64)
    out = kernels.get().maxima_sweep(order, yr, np.ascontiguousarray(uniq[:, 2]), len(ys))
    return out.astype(bool)


def linfty_closest_pair_decision(red, blue, r: int, d=None, seed=0) -> bool:
    """Is some red-blue pair within L-infinity distance r?

    Points are bucketed into a grid of side r + 1.  A blue point within r of
    a red point sits in the same or an adjacent cell, and per offset pattern
    the clipped cube becomes an orthant inside the neighbour cell, so each
    pattern is one dominance emptiness problem.  Equality of the cell pair is
    enforced by folding the cell key into two coordinates, once ascending and
    once descending.
    """
    if r < 0:
        raise ContractError("r must be non-negative")
    Rd = _arr(red, d)
    Bd = _arr(blue, d)
    if Rd.ndim != 2 or Bd.ndim != 2 or len(Rd) == 0 or len(Bd) == 0:
        return False
    dim = Rd.shape[1]
    side = r + 1
    rc = Rd // side
    bc = Bd // side
    for pattern in itertools.product((-1, 0, 1), repeat=dim):
        o = np.array(pattern, dtype=np.int64)
        target = rc + o  # cell the blue point must occupy
        # shared cell keys for this pattern
        allkeys = np.concatenate([target, bc])
        _, kid = np.unique(allkeys, axis=0, return_inverse=True)
        kid = np.asarray(kid).reshape(-1)
        rk, bk = kid[: len(Rd)], kid[len(Rd):]
        common = np.intersect1d(rk, bk)
        if len(common) == 0:
            continue
        rsel = np.isin(rk, common)
        bsel = np.isin(bk, common)
        # per constrained axis: +1 -> blue <= red + r ; -1 -> blue >= red - r
        q_cols, p_cols = [], []
        for a in range(dim):
            if o[a] == 1:
                q_cols.append(Rd[rsel, a] + r)
                p_cols.append(Bd[bsel, a])
            elif o[a] == -1:
                q_cols.append(r - Rd[rsel, a])
                p_cols.append(-Bd[bsel, a])
        while len(q_cols) < 2:
            q_cols.append(np.zeros(int(rsel.sum()), np.int64))
            p_cols.append(np.zeros(int(bsel.sum()), np.int64))
        Q = np.stack(q_cols, 1)
        Pp = np.stack(p_cols, 1)
        base = np.minimum(Q.min(0), Pp.min(0))
        Q = Q - base
        Pp = Pp - base
        M = int(max(Q.max(), Pp.max())) + 1
        nk = int(kid.max()) + 1
        q_key, p_key = rk[rsel], bk[bsel]
        # key order ascending on one axis and descending on another forces
        # equal keys; inside a key the original comparison decides
        Q[:, 0] += q_key * M
        Pp[:, 0] += p_key * M
        Q[:, 1] += (nk - 1 - q_key) * M
        Pp[:, 1] += (nk - 1 - p_key) * M
        hit, _ = offline_dominance_emptiness(OfflineInstance.build(Pp, Q), seed=seed)
        if hit.any():
            return True
    return False


# ---------------------------------------------------------------------------
# offline 2-d point location


@dataclass
class PackedTrie:
    """Binary trie over x-ranks with packed per-node lists.

    Node v (heap numbering, leaves at ``size + x``) owns interval fields
    ``ivoff[v]:ivoff[v+1]`` and query fields ``qoff[v]:qoff[v+1]``; both are
    sorted by y and packed ``64 // width`` to a word.
    """

    depth: int
    size: int
    width: int
    ivoff: np.ndarray
    lo_words: np.ndarray
    hi_words: np.ndarray
    iv_id: np.ndarray
    qoff: np.ndarray
    q_words: np.ndarray
    q_id: np.ndarray

    def intervals(self, v: int) -> list:
        k = kernels.get()
        a, b = int(self.ivoff[v]), int(self.ivoff[v + 1])
        lo = k.unpack_fields(self.lo_words, b, self.width)[a:b]
        hi = k.unpack_fields(self.hi_words, b, self.width)[a:b]
        return list(zip(lo.tolist(), hi.tolist(), self.iv_id[a:b].tolist()))

    def queries(self, v: int) -> list:
        k = kernels.get()
        a, b = int(self.qoff[v]), int(self.qoff[v + 1])
        ys = k.unpack_fields(self.q_words, b, self.width)[a:b]
        return list(zip(ys.tolist(), self.q_id[a:b].tolist()))


def build_packed_trie(rects, queries, presorted=None) -> PackedTrie:
    """Distribute rectangles to their canonical x-nodes and queries to all
    ancestors of their leaf, keeping y order inside every node.

    ``presorted`` may give (rectangle y1-order, query y-order).
    """
    k = kernels.get()
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    Q = np.asarray(queries, dtype=np.int64).reshape(-1, 2)
    xs = np.unique(np.concatenate([R[:, 0], R[:, 1], Q[:, 0]]))
    ys = np.unique(np.concatenate([R[:, 2], R[:, 3], Q[:, 1]]))
    depth = max(1, ceil_log2(max(len(xs), 1)))
    size = 1 << depth
    n = len(R) + len(Q)
    width = max(1, ceil_log2(4 * max(n, 1)))
    if presorted is None:
        r_order = np.argsort(R[:, 2], kind="stable")
        q_order = np.argsort(Q[:, 1], kind="stable")
    else:
        r_order, q_order = (np.asarray(o, dtype=np.int64) for o in presorted)
    Rs = R[r_order]
    x1 = np.searchsorted(xs, Rs[:, 0]).astype(np.int64)
    x2 = np.searchsorted(xs, Rs[:, 1]).astype(np.int64)
    node, item = k.segment_nodes(x1, x2, size)
    # stable bucketing by node keeps y order inside each node
    order, ivoff = k.bucket(node, 2 * size)
    item = item[order]
    lo = np.searchsorted(ys, Rs[item, 2]).astype(np.int64)
    hi = np.searchsorted(ys, Rs[item, 3]).astype(np.int64)
    iv_id = r_order[item].astype(np.int64)
    Qs = Q[q_order]
    qx = np.searchsorted(xs, Qs[:, 0]).astype(np.int64) + size
    qnode = np.concatenate([qx >> j for j in range(depth + 1)]) if len(Qs) else np.zeros(0, np.int64)
    qitem = np.tile(np.arange(len(Qs), dtype=np.int64), depth + 1)
    qord, qoff = k.bucket(qnode.astype(np.int64), 2 * size)
    qitem = qitem[qord]
    qy = np.searchsorted(ys, Qs[qitem, 1]).astype(np.int64) if len(qitem) else np.zeros(0, np.int64)
    return PackedTrie(depth, size, width, ivoff,
                      k.pack_fields(lo, width), k.pack_fields(hi, width), iv_id,
                      qoff, k.pack_fields(qy, width), q_order[qitem].astype(np.int64))


def offline_pl_2d(rects, queries, presorted=None) -> np.ndarray:
    """Index of the rectangle containing each query, -1 for none.

    Rectangles (x1, x2, y1, y2) are closed and must be pairwise disjoint;
    with overlaps the returned rectangle is any one of those containing the
    query.
    """
    R = np.asarray(rects, dtype=np.int64).reshape(-1, 4)
    Q = np.asarray(queries, dtype=np.int64).reshape(-1, 2)
    out = np.full(len(Q), -1, dtype=np.int64)
    if len(R) == 0 or len(Q) == 0:
        return out
    trie = build_packed_trie(R, Q, presorted)
    kernels.get().pl_merge(trie.ivoff, trie.lo_words, trie.hi_words, trie.iv_id,
                           trie.qoff, trie.q_words, trie.q_id, trie.width, out)
    return out


# ---------------------------------------------------------------------------
# b-ary offline range reporting


@dataclass
class BAryStats:
    touches: int = 0  # (box, node) visits
    nodes: int = 0


def offline_report_bary(points, boxes, b: int = 2, d=None, stats: BAryStats = None):
    """All (point, box) containment pairs with a fan-out-b range tree.

    ``boxes`` rows are (lo_0, hi_0, lo_1, hi_1, ...).  A node splits its
    points into b equal slabs of the last coordinate; a box passes to the
    (d-1)-dimensional structure of every slab it spans and recurses into
    the at most two slabs it cuts.  One dimension is answered by binary
    search over sorted values.
    """
    if b < 2:
        raise ContractError("fan-out must be at least 2")
    P = np.asarray(points, dtype=np.int64)
    dim = d or (P.shape[1] if P.ndim == 2 else 0)
    P = P.reshape(-1, dim)
    Bx = np.asarray(boxes, dtype=np.int64).reshape(-1, 2 * dim)
    stats = stats if stats is not None else BAryStats()
    out_p, out_b = [], []
    if len(P) and len(Bx):
        _bary(P, np.arange(len(P)), Bx, np.arange(len(Bx)), dim, b, stats, out_p, out_b)
    if not out_p:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(out_p), np.concatenate(out_b)


def _bary(P, pid, Bx, bid, dim, b, stats, out_p, out_b):
    stats.nodes += 1
    stats.touches += len(bid)
    axis = dim - 1
    vals = P[pid, axis]
    srt = np.argsort(vals, kind="stable")
    pid = pid[srt]
    vals = vals[srt]
    lo = np.searchsorted(vals, Bx[bid, 2 * axis], side="left")
    hi = np.searchsorted(vals, Bx[bid, 2 * axis + 1], side="right")
    if dim == 1:
        cnt = np.maximum(hi - lo, 0)
        if cnt.sum():
            which = np.repeat(np.arange(len(bid)), cnt)
            offs = np.arange(int(cnt.sum())) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            out_p.append(pid[lo[which] + offs])
            out_b.append(bid[which])
        return
    n = len(pid)
    nb = min(b, n)
    cuts = (np.arange(nb + 1) * n) // nb
    for c in range(nb):
        a, z = cuts[c], cuts[c + 1]
        full = (lo <= a) & (hi >= z)
        part = ~full & (lo < z) & (hi > a)
        if full.any():
            _bary(P, pid[a:z], Bx, bid[full], dim - 1, b, stats, out_p, out_b)
        if part.any():
            _bary(P, pid[a:z], Bx, bid[part], dim, b, stats, out_p, out_b)
