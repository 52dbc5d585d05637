"""Seeded dataset generators.

Every generator draws from ``numpy.random.default_rng([seed, code])`` where
``code`` identifies the distribution, so regenerating from (dist, n, dim,
seed) gives identical bytes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import COORD_MAX, ContractError

DISTRIBUTIONS = ("uniform", "clustered", "antichain", "nested-rects", "adversarial-duplicates")
_CODES = {name: i + 1 for i, name in enumerate(DISTRIBUTIONS)}


@dataclass
class Dataset:
    dist: str
    n: int
    dim: int
    seed: int
    data: np.ndarray  # (n, dim) points, or (n, 4) rectangles x1 x2 y1 y2
    universe: int

    @property
    def is_rects(self) -> bool:
        return self.dist == "nested-rects"

    def digest(self) -> bytes:
        return np.ascontiguousarray(self.data, dtype=np.int64).tobytes()


def rng_for(dist: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), _CODES[dist]])


def _uniform(g, n, dim, U):
    return g.integers(0, U, size=(n, dim), dtype=np.int64)


def _clustered(g, n, dim, U):
    k = max(1, int(round(np.sqrt(n) / 4)))
    centres = g.integers(0, U, size=(k, dim), dtype=np.int64)
    spread = max(1, U // (16 * k))
    which = g.integers(0, k, size=n)
    pts = centres[which] + np.rint(g.normal(0, spread, size=(n, dim))).astype(np.int64)
    return np.clip(pts, 0, U - 1)


def _antichain(g, n, dim, U):
    """Points on the hyperplane sum = const (no point dominates another)."""
    if dim == 1:
        return np.zeros((n, 1), np.int64)
    span = min(U - 1, max(n, 2) * 4)
    cut = np.sort(g.integers(0, span + 1, size=(n, dim - 1)), axis=1)
    edges = np.concatenate([np.zeros((n, 1), np.int64), cut, np.full((n, 1), span)], 1)
    return np.diff(edges, axis=1)


def _duplicates(g, n, dim, U):
    """Few distinct values per axis and many repeated points."""
    vals = g.integers(0, U, size=(max(2, int(np.sqrt(n)) // 2), dim), dtype=np.int64)
    pick = g.integers(0, len(vals), size=(n, dim))
    pts = vals[pick, np.arange(dim)]
    rep = g.random(n) < 0.3
    src = g.integers(0, max(n, 1), size=n)
    pts[rep] = pts[src[rep]]
    return pts


def nested_rects(g, n, U, chain: int = 8):
    """Rectangles (x1, x2, y1, y2) in short nested chains.

    Each chain shrinks inside its own slot, so a rectangle encloses at most
    ``chain - 1`` others and k <= (chain - 1) n / 2 < 10 n.
    """
    slots = max(1, -(-n // chain))
    side = max(1, int(np.ceil(np.sqrt(slots))))
    cell = U // side
    if cell < 4 * chain:
        raise ContractError("universe too small for nested rectangles")
    out = np.zeros((n, 4), dtype=np.int64)
    step = cell // (2 * chain + 2)
    for s in range(slots):
        cx, cy = (s % side) * cell, (s // side) * cell
        lo = slice(s * chain, min(n, (s + 1) * chain))
        c = lo.stop - lo.start
        depth = np.arange(c)
        jx = g.integers(0, max(1, step // 2), size=c)
        jy = g.integers(0, max(1, step // 2), size=c)
        out[lo, 0] = cx + depth * step + jx
        out[lo, 1] = cx + cell - 1 - depth * step - jx
        out[lo, 2] = cy + depth * step + jy
        out[lo, 3] = cy + cell - 1 - depth * step - jy
    perm = g.permutation(n)
    return out[perm]


def generate(dist: str, n: int, dim: int = 2, seed: int = 0, universe: int = None) -> Dataset:
    if dist not in _CODES:
        raise ContractError(f"unknown distribution {dist!r}; choose from {DISTRIBUTIONS}")
    if n < 0 or dim < 1:
        raise ContractError("n must be >= 0 and dim >= 1")
    U = int(universe or 2**30)
    if not 1 <= U <= COORD_MAX + 1:
        raise ContractError("universe outside [1, 2^32]")
    g = rng_for(dist, seed)
    if dist == "nested-rects":
        data = nested_rects(g, n, U)
    else:
        make = {"uniform": _uniform, "clustered": _clustered,
                "antichain": _antichain, "adversarial-duplicates": _duplicates}[dist]
        data = make(g, n, dim, U)
    return Dataset(dist, n, 4 if dist == "nested-rects" else dim, seed,
                   np.ascontiguousarray(data, dtype=np.int64), U)


def corner_queries(m: int, dim: int, n: int, universe: int, seed: int) -> np.ndarray:
    """Orthant corners that see about one uniform input each."""
    g = np.random.default_rng([int(seed), 99])
    top = max(1, int(2 * universe * max(n, 1) ** (-1.0 / dim)))
    return g.integers(0, min(top, universe), size=(m, dim), dtype=np.int64)
