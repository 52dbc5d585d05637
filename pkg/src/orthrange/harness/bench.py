"""Benchmark driver: one CSV row per (structure, n, params, repetition).

Configs are INI files with a ``[bench]`` section::

    [bench]
    structure = offline4d
    n = 10000, 100000
    repetitions = 3
    queries = 1000
    seed = 0
    B = 2
    mode = fast-query

Each measurement runs single-threaded; the build and the query batch are
timed separately.
"""
from __future__ import annotations

import configparser
import csv
import sys
import time
from dataclasses import astuple, dataclass, fields

import numpy as np

from .. import kernels
from ..core import QueryBox
from . import datasets
from .verify import ConfigError, key_lines

COLUMNS = ("structure", "operation", "backend", "n", "repetition", "B", "mode", "eps", "b", "K",
           "wall_time_s", "build_time_s", "space_bytes", "k", "oracle_calls", "skip_hops",
           "recursion_depth", "conflict_total")


@dataclass
class BenchRecord:
    structure: str
    operation: str
    backend: str
    n: int
    repetition: int
    B: int = 0
    mode: str = ""
    eps: float = 0.0
    b: int = 0
    K: int = 0
    wall_time_s: float = 0.0
    build_time_s: float = 0.0
    space_bytes: int = 0
    k: int = 0
    oracle_calls: int = 0
    skip_hops: int = 0
    recursion_depth: int = 0
    conflict_total: int = 0

    def check(self):
        for f in ("space_bytes", "k", "oracle_calls", "skip_hops", "recursion_depth", "conflict_total"):
            if getattr(self, f) < 0:
                raise ValueError(f"negative counter {f}")


assert tuple(f.name for f in fields(BenchRecord)) == COLUMNS


@dataclass
class BenchConfig:
    structure: tuple = ("range2d",)
    n: tuple = (1000,)
    repetitions: int = 1
    queries: int = 1000
    seed: int = 0
    dist: str = "uniform"
    B: int = 2
    mode: str = "fast-query"
    eps: float = 0.5
    b: int = 0
    K: int = 64
    dim: int = 4
    c_exp: float = 3.0
    backend: str = "auto"


def _ints(text):
    return tuple(int(float(v)) for v in text.replace(",", " ").split())


# keys are case-sensitive: B is the ball-inheritance base, b the range-tree fan-out
_FIELDS = {"structure": lambda t: tuple(t.replace(",", " ").split()), "n": _ints,
           "repetitions": int, "queries": int, "seed": int, "dist": str, "B": int, "b": int,
           "K": int, "mode": str, "eps": float, "dim": int, "c_exp": float, "backend": str}


def parse_config(text: str, source: str = "<config>") -> BenchConfig:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    cfg = BenchConfig()
    if not cp.has_section("bench"):
        return cfg
    lines = key_lines(text, "bench")
    for key, raw in cp.items("bench"):
        where = f"{source}, line {lines.get(key, '?')}"
        conv = _FIELDS.get(key)
        if conv is None:
            raise ConfigError(f"{where}: unknown key {key!r}")
        try:
            val = conv(raw)
        except ValueError:
            raise ConfigError(f"{where}: bad value {raw!r} for {key}") from None
        if key == "structure":
            bad = [s for s in val if s not in STRUCTURES]
            if bad:
                raise ConfigError(f"{where}: unknown structure {bad[0]!r}")
        setattr(cfg, key, val)
    return cfg


def apply_params(cfg: BenchConfig, params: dict) -> BenchConfig:
    """Override config fields from CLI ``key=val`` pairs."""
    text = "[bench]\n" + "".join(f"{k} = {v}\n" for k, v in params.items())
    override = parse_config(text, "--params")
    for key in params:
        setattr(cfg, key, getattr(override, key))
    return cfg


# ---------------------------------------------------------------------------
# one function per structure; each returns a filled BenchRecord


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _boxes(g, m, dim, U):
    a = g.integers(0, U, size=(m, dim))
    b = g.integers(0, U, size=(m, dim))
    return np.minimum(a, b), np.maximum(a, b)


def bench_range2d(cfg, n, g, rec):
    from ..range2d import RangeReport2D

    P = np.stack([g.permutation(n), g.permutation(n)], 1)
    s, rec.build_time_s = _timed(lambda: RangeReport2D(P, cfg.B, cfg.mode))
    # boxes about sqrt(n) on a side keep k near one per query
    side = max(1, int(np.sqrt(n)))
    lo = g.integers(0, max(1, n - side), size=(cfg.queries, 2))
    s.tree.reset_hops()
    t0 = time.perf_counter()
    for a in lo.tolist():
        rec.k += len(s.report(QueryBox.closed(a, (a[0] + side, a[1] + side))))
        rec.oracle_calls += s.last.oracle_calls
    rec.wall_time_s = time.perf_counter() - t0
    rec.skip_hops = s.tree.hops
    rec.space_bytes = s.space_bits()["total"] // 8
    rec.operation = "report"


def bench_ball(cfg, n, g, rec):
    from ..ball_inheritance import BallTree, SkipPlan

    P = np.stack([g.permutation(n), g.permutation(n)], 1)
    t, rec.build_time_s = _timed(lambda: BallTree(P, SkipPlan(cfg.mode, cfg.B)))
    lv = g.integers(0, t.height + 1, size=cfg.queries)
    t.reset_hops()
    t0 = time.perf_counter()
    for level in lv.tolist():
        node = int(g.integers(0, 1 << level))
        t.leaf_of(level, node, int(g.integers(0, t.node_size(level))))
    rec.wall_time_s = time.perf_counter() - t0
    rec.skip_hops = t.hops
    rec.k = cfg.queries
    rec.space_bytes = t.space_bits()["total"] // 8
    rec.operation = "query_leaf"


def _bench_range3d(sides):
    def run(cfg, n, g, rec):
        from ..range3d import Range3D

        P = g.integers(0, 2**30, size=(n, 3))
        s, rec.build_time_s = _timed(lambda: Range3D(P, sides, cfg.eps, cfg.c_exp))
        w = int(2**30 * n ** (-1 / 3))
        lo = g.integers(0, 2**30, size=(cfg.queries, 3))
        t0 = time.perf_counter()
        for a in lo.tolist():
            box = QueryBox((a[0], a[1] if sides >= 5 else None, a[2] if sides >= 6 else None),
                           (a[0] + w, a[1] + w, a[2] + w))
            rec.k += len(s.report_ids(box))
        rec.wall_time_s = time.perf_counter() - t0
        rec.space_bytes = s.space_words() * 8
        rec.recursion_depth = s.depth()
        rec.operation = "report"
    return run


def bench_rmq2d(cfg, n, g, rec):
    from ..range3d import RMQ2D

    P = g.integers(0, 2**30, size=(n, 2))
    s, rec.build_time_s = _timed(lambda: RMQ2D(P, g.permutation(n)))
    lo, hi = _boxes(g, cfg.queries, 2, 2**30)
    t0 = time.perf_counter()
    for a, b in zip(lo.tolist(), hi.tolist()):
        rec.k += s.query_index(QueryBox.closed(a, b)) is not None
    rec.wall_time_s = time.perf_counter() - t0
    rec.operation = "argmin"


def bench_cuttings(cfg, n, g, rec):
    from ..cuttings import StaircaseCutting

    S = g.integers(0, 2**30, size=(n, 3))
    cut, rec.build_time_s = _timed(lambda: StaircaseCutting(S, cfg.K, g))
    st = cut.stats()
    rec.wall_time_s = rec.build_time_s
    rec.conflict_total = st["total"]
    rec.k = st["max"]
    rec.oracle_calls = st["tests"]
    rec.operation = "build"


def _bench_offline(d):
    def run(cfg, n, g, rec):
        from ..offline import offline_dominance

        U = 2**30
        P = g.integers(0, U, size=(n, d))
        Q = datasets.corner_queries(n, d, n, U, int(g.integers(1 << 30)))
        res, rec.wall_time_s = _timed(lambda: offline_dominance(P, Q, seed=cfg.seed))
        rec.k = res.k
        rec.recursion_depth = res.max_depth
        rec.conflict_total = sum(t for _, _, t in res.level_totals())
        rec.operation = "dominance_pairs"
    return run


def bench_enclosure(cfg, n, g, rec):
    from ..offline import rectangle_enclosure

    R = datasets.nested_rects(g, n, 2**30)
    res, rec.wall_time_s = _timed(lambda: rectangle_enclosure(R, seed=cfg.seed))
    rec.k = res.k
    rec.recursion_depth = res.max_depth
    rec.conflict_total = sum(t for _, _, t in res.level_totals())
    rec.operation = "enclosure"


def bench_maxima(cfg, n, g, rec):
    from ..offline import maxima

    P = g.integers(0, 2**30, size=(n, cfg.dim))
    out, rec.wall_time_s = _timed(lambda: maxima(P, cfg.dim, seed=cfg.seed))
    rec.k = len(out)
    rec.operation = "maxima"


STRUCTURES = {
    "range2d": bench_range2d,
    "ball_inheritance": bench_ball,
    "range3d4": _bench_range3d(4),
    "range3d5": _bench_range3d(5),
    "range3d6": _bench_range3d(6),
    "rmq_2d": bench_rmq2d,
    "cuttings": bench_cuttings,
    "offline3d": _bench_offline(3),
    "offline4d": _bench_offline(4),
    "enclosure": bench_enclosure,
    "maxima": bench_maxima,
}


def run_bench(config=None):
    """Yield one BenchRecord per (structure, n, repetition)."""
    cfg = config if isinstance(config, BenchConfig) else BenchConfig()
    if cfg.backend != "auto":
        kernels.set_backend(cfg.backend)
    for name in cfg.structure:
        if name not in STRUCTURES:
            raise ConfigError(f"unknown structure {name!r}")
        for n in cfg.n:
            for rep in range(cfg.repetitions):
                g = np.random.default_rng([cfg.seed, n, rep, sorted(STRUCTURES).index(name)])
                rec = BenchRecord(name, "", kernels.name(), n, rep, cfg.B, cfg.mode, cfg.eps,
                                  cfg.b, cfg.K)
                STRUCTURES[name](cfg, n, g, rec)
                rec.check()
                yield rec


def write_csv(records, out=sys.stdout):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for rec in records:
        row = astuple(rec)
        w.writerow([f"{v:.6f}" if isinstance(v, float) else v for v in row])
        out.flush()
