"""Oracle-equivalence verification driver.

Configs are INI files with a ``[verify]`` section::

    [verify]
    modules = range2d, offline
    seeds = 0, 1, 2
    n = 300
    queries = 300
    quadratic_cap = 5000
    inject_fault = routing_bit

Every suite builds structures on seeded random instances and compares each
answer with the matching oracle.  The first mismatches of each suite are
printed with the full failing instance.
"""
from __future__ import annotations

import configparser
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from .. import kernels
from ..core import ContractError, QueryBox, rank_space_reduce_array
from . import oracles
from .faults import FAULTS

MODULES = ("core", "succinct", "ball_inheritance", "range2d", "range3d", "cuttings", "offline")
MAX_SHOWN = 3


class ConfigError(ContractError):
    pass


@dataclass
class VerifyConfig:
    modules: tuple = MODULES
    seeds: tuple = (0, 1)
    n: int = 300
    queries: int = 300
    quadratic_cap: int = 5000
    voxel_cap: int = 12
    inject_fault: str = "none"
    backend: str = "auto"
    workers: int = 1
    report: str = ""

    @property
    def caps(self) -> dict:
        return {"quadratic": self.quadratic_cap, "voxel": self.voxel_cap}


def _ints(text):
    return tuple(int(v) for v in text.replace(",", " ").split())


def _words(text):
    return tuple(v for v in text.replace(",", " ").split())


_FIELDS = {
    "modules": _words, "module": _words, "seeds": _ints, "n": int, "queries": int,
    "quadratic_cap": int, "voxel_cap": int, "inject_fault": str, "backend": str,
    "workers": int, "report": str,
}


def key_lines(text: str, section: str) -> dict:
    """Line number of each key inside ``[section]``; configparser drops them."""
    out, inside = {}, False
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("["):
            inside = s == f"[{section}]"
        elif inside and "=" in s and not s.startswith(("#", ";")):
            out[s.split("=", 1)[0].strip()] = lineno
    return out


def parse_config(text: str, source: str = "<config>") -> VerifyConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    cfg = VerifyConfig()
    if not cp.has_section("verify"):
        return cfg
    lines = {k.lower(): v for k, v in key_lines(text, "verify").items()}
    for key, raw in cp.items("verify"):
        where = f"{source}, line {lines.get(key, '?')}"
        if key not in _FIELDS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        try:
            val = _FIELDS[key](raw)
        except ValueError:
            raise ConfigError(f"{where}: bad value {raw!r} for {key}") from None
        if key in ("modules", "module"):
            bad = [m for m in val if m not in MODULES]
            if bad:
                raise ConfigError(f"{where}: unknown module {bad[0]!r}")
            key = "modules"
        if key == "inject_fault" and val not in ("none", *FAULTS):
            raise ConfigError(f"{where}: unknown fault {val!r}")
        if key == "backend" and val not in ("auto", *kernels.available()):
            raise ConfigError(f"{where}: backend {val!r} unavailable")
        setattr(cfg, key, val)
    return cfg


def load_config(path=None) -> VerifyConfig:
    if path is None:
        return VerifyConfig()
    with open(path) as fh:
        return parse_config(fh.read(), str(path))


# ---------------------------------------------------------------------------
# checking


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, QueryBox):
        return {"lo": list(v.lo), "hi": list(v.hi)}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted(_plain(x) for x in v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


@dataclass
class SuiteResult:
    module: str
    suite: str
    seed: int
    checks: int = 0
    mismatches: int = 0
    failures: list = field(default_factory=list)
    error: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and not self.error


class Checker:
    def __init__(self, result: SuiteResult):
        self.result = result

    def expect(self, got, want, **instance):
        self.result.checks += 1
        if _plain(got) == _plain(want):
            return True
        self.result.mismatches += 1
        if len(self.result.failures) < MAX_SHOWN:
            self.result.failures.append({"instance": _plain(instance),
                                         "got": _plain(got), "want": _plain(want)})
        return False


def _box(lo, hi):
    return QueryBox.closed(lo, hi)


def _rand_box(g, dim, U):
    a = g.integers(0, U, size=dim)
    b = g.integers(0, U, size=dim)
    return _box(np.minimum(a, b), np.maximum(a, b))


def _perm_points(g, n, dim=2):
    return np.stack([g.permutation(n) for _ in range(dim)], 1).astype(np.int64)


# ---------------------------------------------------------------------------
# suites, one function per (module, structure)


def suite_core(ck, g, cfg):
    from ..core import dominates, make_points

    n = cfg.n
    P = g.integers(0, 50, size=(n, 3))
    ranked, rmap = rank_space_reduce_array(P, np.arange(n))
    for a in range(3):
        ck.expect(sorted(ranked[:, a].tolist()), list(range(n)), axis=a)
        back = rmap.sorted_values[a][ranked[:, a]]
        ck.expect(back, P[:, a], axis=a, points=P)
    pts = make_points(P[:40].tolist())
    for p, q in product(pts[:20], pts[:20]):
        ck.expect(dominates(p, q), bool(np.all(np.array(p.coords) <= np.array(q.coords))),
                  p=p.coords, q=q.coords)


def suite_alphabet_rank(ck, g, cfg):
    from ..succinct import AlphabetRankIndex

    for sigma in (2, 3, 16, 300):
        sym = g.integers(0, sigma, size=cfg.n)
        idx = AlphabetRankIndex(sym, sigma)
        want = oracles.alphabet_rank(sym)
        got = [idx.rank(k) for k in range(1, len(sym) + 1)]
        ck.expect(got, want, sigma=sigma, symbols=sym)


def suite_rmq(ck, g, cfg):
    from ..succinct import RMQIndex

    keys = g.integers(0, max(2, cfg.n // 4), size=cfg.n)
    idx = RMQIndex(keys)
    for _ in range(cfg.queries):
        i, j = sorted(g.integers(1, cfg.n + 1, size=2).tolist())
        ck.expect(idx.query(i, j), oracles.rmq(keys, i, j), keys=keys, i=i, j=j)


def suite_predecessor(ck, g, cfg):
    from ..succinct import PredecessorIndex

    keys = np.sort(g.integers(0, 4 * cfg.n, size=cfg.n))
    idx = PredecessorIndex(keys)
    oracle = lambda r: int(keys[r - 1])  # noqa: E731
    for y in g.integers(-1, 4 * cfg.n + 2, size=cfg.queries).tolist():
        p = int(np.searchsorted(keys, y, side="right"))
        s = int(np.searchsorted(keys, y, side="left")) + 1
        ck.expect(idx.predecessor(y, oracle), p if p >= 1 else None, keys=keys, y=y, op="pred")
        ck.expect(idx.successor(y, oracle), s if s <= len(keys) else None, keys=keys, y=y, op="succ")


def suite_ball(ck, g, cfg):
    from ..ball_inheritance import FAST_QUERY, LOW_SPACE, BallTree, SkipPlan

    n = cfg.n
    P = _perm_points(g, n)
    for mode, B in ((FAST_QUERY, 2), (FAST_QUERY, 4), (LOW_SPACE, 2), (LOW_SPACE, 3)):
        tree = BallTree(P, SkipPlan(mode, B))
        for _ in range(cfg.queries // 4 + 1):
            level = int(g.integers(0, tree.height + 1))
            node = int(g.integers(0, 1 << level))
            index = int(g.integers(1, tree.node_size(level) + 1))
            want = oracles.ball_leaf(P, level, node, index)
            got = tree.query_leaf(level, node, index)[0]
            ck.expect(got, want, mode=mode, B=B, points=P, level=level, node=node, index=index)


def suite_range2d(ck, g, cfg):
    from ..ball_inheritance import FAST_QUERY, LOW_SPACE
    from ..range2d import RangeReport2D

    n = cfg.n
    P = _perm_points(g, n)
    for mode, B in ((FAST_QUERY, 2), (LOW_SPACE, 2)):
        s = RangeReport2D(P, B, mode)
        for _ in range(cfg.queries // 2 + 1):
            box = _rand_box(g, 2, n)
            want = oracles.report(P, box)
            got = sorted(p.id for p in s.report(box))
            ck.expect(got, want, mode=mode, points=P, box=box)
            ck.expect(s.empty(box), not want, mode=mode, points=P, box=box, op="empty")
            ck.expect(s.last.report_calls <= 2 + 2 * len(want), True, points=P, box=box,
                      op="budget", calls=s.last.report_calls)


def _sided_box(g, sides, U):
    x = np.sort(g.integers(0, U, size=2))
    y = np.sort(g.integers(0, U, size=2))
    z = np.sort(g.integers(0, U, size=2))
    lo = [int(x[0]), int(y[0]) if sides >= 5 else None, int(z[0]) if sides >= 6 else None]
    hi = [int(x[1]), int(y[1]), int(z[1])]
    return QueryBox(tuple(lo), tuple(hi))


def suite_range3d(ck, g, cfg):
    from ..range3d import Range3D

    n = cfg.n
    P = g.integers(0, max(4, n // 2), size=(n, 3))
    U = int(P.max()) + 2
    for sides, c_exp in product((4, 5, 6), (0.0, 3.0)):
        s = Range3D(P, sides, 0.5, c_exp)
        for _ in range(cfg.queries // 6 + 1):
            box = _sided_box(g, sides, U)
            got = sorted(s.report_ids(box).tolist())
            ck.expect(got, oracles.report(P, box), sides=sides, c_exp=c_exp, points=P, box=box)


def suite_rmq2d(ck, g, cfg):
    from ..range3d import RMQ2D

    n = cfg.n
    P = g.integers(0, max(4, n // 2), size=(n, 2))
    pr = g.integers(0, max(2, n // 3), size=n)
    s = RMQ2D(P, pr)
    for _ in range(cfg.queries):
        box = _rand_box(g, 2, int(P.max()) + 2)
        ck.expect(s.query_index(box), oracles.argmin(P, pr, box), points=P, priorities=pr, box=box)


def suite_dominance3d(ck, g, cfg):
    from ..range3d import Dominance3DBase

    P = g.integers(0, 40, size=(cfg.n, 3))
    s = Dominance3DBase(P)
    for c in g.integers(0, 42, size=(cfg.queries, 3)):
        got = sorted(s.query_ids(c).tolist())
        ck.expect(got, oracles.report(P, QueryBox.orthant(c)), points=P, corner=c)


def suite_cuttings(ck, g, cfg):
    from ..cuttings import StaircaseCutting, build_staircase

    n = cfg.n
    S = g.integers(0, max(8, n), size=(n, 3))
    for K in (4, 16):
        cut = StaircaseCutting(S, K, np.random.default_rng(g.integers(1 << 30)))
        corners = cut.vd.corners
        want = oracles.conflict_lists(corners, S, cfg.caps)
        for c in range(len(cut.lists)):
            ck.expect(sorted(cut.lists[c].tolist()), want[c], K=K, points=S, cell=c,
                      corner=corners[c])
        Q = g.integers(0, cut.U, size=(cfg.queries, 3))
        cells = cut.locate(Q)
        above = cut.stair.above(Q)
        for q, c, a in zip(Q, cells.tolist(), above.tolist()):
            ck.expect(c < 0, a, K=K, points=S, query=q, op="bad iff above")
            if c >= 0:
                ck.expect(bool(np.all(q <= corners[c])), True, K=K, points=S, query=q, cell=c,
                          op="query inside its cell")
    U = min(cfg.voxel_cap, 8)
    R = g.integers(0, U, size=(6, 3))
    st = build_staircase(R, U)
    vox = oracles.envelope_voxels(R, U, cfg.caps)
    grid = np.stack(np.meshgrid(*[np.arange(U)] * 3, indexing="ij"), -1).reshape(-1, 3)
    ck.expect(st.above(grid), vox.reshape(-1), sample=R, U=U, op="envelope voxels")


def suite_offline_dominance(ck, g, cfg):
    from ..offline import offline_dominance

    n = min(cfg.n, cfg.quadratic_cap)
    for d in (3, 4, 5):
        for fb in (False, True):
            P = g.integers(0, max(4, n // 2), size=(n, d))
            Q = g.integers(0, max(4, n // 2), size=(cfg.queries, d))
            got = offline_dominance(P, Q, seed=int(g.integers(1 << 30)), force_fallback=fb).as_set()
            ck.expect(got, oracles.dominance_pairs(P, Q, cfg.caps), d=d, fallback=fb,
                      inputs=P, queries=Q)


def suite_offline_apps(ck, g, cfg):
    from ..offline import (linfty_closest_pair_decision, maxima, offline_dominance_emptiness,
                           offline_pl_2d, rectangle_enclosure)

    n = min(cfg.n, cfg.quadratic_cap)
    caps = cfg.caps
    for d in (3, 4):
        P = g.integers(0, max(4, n // 2), size=(n, d))
        Q = g.integers(0, max(4, n // 2), size=(cfg.queries, d))
        got, _ = offline_dominance_emptiness(P, Q, seed=int(g.integers(1 << 30)))
        ck.expect(got, oracles.emptiness(P, Q, caps), d=d, inputs=P, queries=Q)
    for d in (2, 3, 4):
        P = g.integers(0, 12, size=(n, d))
        ck.expect(sorted(maxima(P, d).tolist()), oracles.maxima(P, caps), d=d, points=P)
    a = g.integers(0, max(4, n // 2), size=(n, 2))
    b = g.integers(0, max(4, n // 2), size=(n, 2))
    rects = np.stack([np.minimum(a[:, 0], b[:, 0]), np.maximum(a[:, 0], b[:, 0]),
                      np.minimum(a[:, 1], b[:, 1]), np.maximum(a[:, 1], b[:, 1])], 1)
    ck.expect(rectangle_enclosure(rects).as_set(), oracles.enclosure(rects, caps), rects=rects)
    # disjoint rectangles: cells of a jittered grid
    side = max(2, int(np.sqrt(n)))
    cx, cy = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    cx, cy = cx.ravel() * 10, cy.ravel() * 10
    keep = g.random(len(cx)) < 0.7
    lo = g.integers(0, 4, size=(len(cx), 2))
    hi = g.integers(5, 10, size=(len(cx), 2))
    R = np.stack([cx + lo[:, 0], cx + hi[:, 0], cy + lo[:, 1], cy + hi[:, 1]], 1)[keep]
    Q = g.integers(0, side * 10, size=(cfg.queries, 2))
    ck.expect(offline_pl_2d(R, Q), oracles.point_location(R, Q, caps), rects=R, queries=Q)
    for d in (2, 3):
        red = g.integers(0, 60, size=(n // 4 + 1, d))
        blue = g.integers(0, 60, size=(n // 4 + 1, d))
        for r in (0, 1, 3):
            ck.expect(linfty_closest_pair_decision(red, blue, r, d),
                      oracles.linfty_within(red, blue, r, caps), d=d, r=r, red=red, blue=blue)


SUITES = {
    "core": [("rank_space", suite_core)],
    "succinct": [("alphabet_rank", suite_alphabet_rank), ("rmq", suite_rmq),
                 ("predecessor", suite_predecessor)],
    "ball_inheritance": [("query_leaf", suite_ball)],
    "range2d": [("report", suite_range2d)],
    "range3d": [("sided", suite_range3d), ("rmq_2d", suite_rmq2d),
                ("dominance3d", suite_dominance3d)],
    "cuttings": [("conflict_lists", suite_cuttings)],
    "offline": [("dominance", suite_offline_dominance), ("applications", suite_offline_apps)],
}


def _run_one(task):
    module, suite, seed, cfg = task
    fn = dict(SUITES[module])[suite]
    res = SuiteResult(module, suite, seed)
    ck = Checker(res)
    g = np.random.default_rng([seed, MODULES.index(module), sorted(dict(SUITES[module])).index(suite)])
    t0 = time.perf_counter()
    fault = FAULTS[cfg.inject_fault]() if cfg.inject_fault != "none" else None
    try:
        if cfg.backend != "auto":
            kernels.set_backend(cfg.backend)
        if fault is not None:
            with fault:
                fn(ck, g, cfg)
        else:
            fn(ck, g, cfg)
    except Exception as exc:  # a crash is a failed suite, not a crashed run
        res.error = f"{type(exc).__name__}: {exc}"
    res.seconds = time.perf_counter() - t0
    return res


@dataclass
class VerifyReport:
    passed: bool
    backend: str
    config: dict
    results: list

    def to_json(self) -> str:
        return json.dumps({"passed": self.passed, "backend": self.backend, "config": self.config,
                           "results": [asdict(r) for r in self.results]}, indent=2)


def print_failure(res: SuiteResult, out=sys.stdout):
    print(f"FAIL {res.module}/{res.suite} seed={res.seed}: {res.mismatches} of "
          f"{res.checks} checks mismatched{' ' + res.error if res.error else ''}", file=out)
    for f in res.failures:
        print("  failing instance: " + json.dumps(f["instance"]), file=out)
        print(f"    got:  {json.dumps(f['got'])}", file=out)
        print(f"    want: {json.dumps(f['want'])}", file=out)


def run_verify(config=None, out=sys.stdout) -> VerifyReport:
    cfg = config if isinstance(config, VerifyConfig) else load_config(config)
    tasks = [(m, name, s, cfg) for m in cfg.modules for name, _ in SUITES[m] for s in cfg.seeds]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    for res in results:
        if res.ok:
            print(f"ok   {res.module}/{res.suite} seed={res.seed} "
                  f"({res.checks} checks, {res.seconds:.2f}s)", file=out)
        else:
            print_failure(res, out)
    report = VerifyReport(all(r.ok for r in results),
                          cfg.backend if cfg.backend != "auto" else kernels.name(),
                          _plain(asdict(cfg)), results)
    if cfg.report:
        with open(cfg.report, "w") as fh:
            fh.write(report.to_json())
    return report
