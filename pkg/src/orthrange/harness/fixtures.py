"""Oracle-computed fixtures for the worked examples of each module.

Every entry names an oracle tag, a seed and a builder that turns a seeded
generator into a list of oracle instances ("cases").  ``compute`` runs
``oracle_suite`` on each case.  Small answers are stored verbatim, long ones
as a sha256 of their canonical JSON, so the committed file stays small and
the instances can always be rebuilt from the seed.
"""
from __future__ import annotations

import hashlib
import json
from itertools import product

import numpy as np

from ..core import QueryBox
from .oracles import oracle_suite
from .verify import _plain

INLINE_LIMIT = 2000  # characters of canonical JSON kept verbatim


def canonical(answer) -> str:
    return json.dumps(_plain(answer), sort_keys=True, separators=(",", ":"))


def digest(answer) -> str:
    return hashlib.sha256(canonical(answer).encode()).hexdigest()


def _all_boxes(U, dim):
    rng1 = [(a, b) for a in range(U) for b in range(a, U)]
    for sides in product(rng1, repeat=dim):
        yield QueryBox.closed([s[0] for s in sides], [s[1] for s in sides])


def _rand_boxes(g, m, U, sides=6):
    a = g.integers(0, U, size=(m, 3))
    b = g.integers(0, U, size=(m, 3))
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    out = []
    for l, h in zip(lo.tolist(), hi.tolist()):
        if sides < 6:
            l[2] = None
        if sides < 5:
            l[1] = None
        out.append(QueryBox(tuple(l), tuple(h)))
    return out


def _vd(R, U):
    from ..cuttings import build_staircase, build_vd

    return build_vd(build_staircase(np.asarray(R, dtype=np.int64).reshape(-1, 3), U))


def _conflict_case(R, S, U):
    R = np.asarray(R, dtype=np.int64).reshape(-1, 3)
    return (_vd(R, U).corners, np.asarray(S), R, U)


def _boundary_cases(g):
    # queries on cell edges; cells are half-open, so as closed rectangles
    # they end one before x2 and y2
    R = g.integers(0, 12, size=(6, 3))
    vd = _vd(R, 12)
    rects = np.stack([vd.x1, vd.x2 - 1, vd.y1, vd.y2 - 1], 1)
    Q = np.concatenate([np.stack([vd.x1, vd.y1], 1), np.stack([vd.x2 - 1, vd.y2 - 1], 1),
                        np.stack([np.minimum(vd.x2, 11), vd.y1], 1)])
    return [(rects, Q, R, 12)]


def _surface_cases(g):
    # corners are below the surface; one step up in z is on or above it
    R = g.integers(0, 12, size=(6, 3))
    vd = _vd(R, 12)
    c = vd.corners
    lifted = c[vd.top < 12] + np.array([0, 0, 1])
    return [(R, c), (R, lifted)]


# name -> (oracle tag, seed, builder(g) -> list of cases)
ENTRIES = {
    # core
    "core.rank_ties": ("sort_ranks", 0, lambda g: [([5, 5], [0, 1])]),
    "core.presort_1000": ("sort_ranks", 1, lambda g: [
        (v, list(range(1000))) for v in g.integers(0, 300, size=(3, 1000)).tolist()]),
    # succinct
    "succinct.alphabet_rank": ("alphabet_rank", 0, lambda g: [[0, 1, 0, 0]]),
    "succinct.rmq": ("rmq", 0, lambda g: [([3, 1, 2], 1, 3)]),
    "succinct.predecessor": ("predecessor", 0, lambda g: [([2, 5, 9], 5)]),
    # ball inheritance
    "ball.routing_bits": ("routing_bits", 0, lambda g: [[(2, 0), (0, 1), (3, 2), (1, 3)]]),
    "ball.step_down": ("step_down", 0, lambda g: [([0, 1, 0, 1], 2)]),
    "ball.query_leaf_root": ("ball_leaf", 0, lambda g: [([(2, 0), (0, 1), (3, 2), (1, 3)], 0, 0, 1)]),
    # range2d
    "range2d.four_point_sweep": ("report", 0, lambda g: [
        ([(2, 0), (0, 1), (3, 2), (1, 3)], b) for b in _all_boxes(4, 2)]),
    "range2d.examples": ("report", 0, lambda g: [
        ([(0, 0), (1, 2), (2, 1), (3, 3)], QueryBox.closed((1, 0), (2, 2))),
        ([(0, 0), (1, 2), (2, 1), (3, 3)], QueryBox.closed((1, 3), (2, 3)))]),
    # range3d
    "range3d.4sided_example": ("report", 0, lambda g: [
        ([(0, 0, 0), (1, 1, 1), (2, 2, 2)], QueryBox((0, None, None), (2, 1, 1)))]),
    "range3d.4sided_1e4": ("report", 2, lambda g: (lambda P: [
        (P, b) for b in _rand_boxes(g, 300, 2**20, 4)])(g.integers(0, 2**20, size=(10_000, 3)))),
    "range3d.collinear": ("report", 3, lambda g: (lambda P: [
        (P, b) for b in _rand_boxes(g, 200, 64, 4)])(
            np.stack([g.integers(0, 64, 500), np.full(500, 7), g.integers(0, 64, 500)], 1))),
    "range3d.6sided_2048": ("report", 4, lambda g: (lambda P: [
        (P, b) for b in _rand_boxes(g, 10_000, 2**16, 6)])(g.integers(0, 2**16, size=(2048, 3)))),
    "range3d.dominance3d": ("report", 5, lambda g: (lambda P: [
        (P, QueryBox.orthant(c)) for c in g.integers(0, 42, size=(300, 3)).tolist()])(
            g.integers(0, 40, size=(400, 3)))),
    "range3d.report_kd_512": ("report", 6, lambda g: (lambda P: [
        (P, QueryBox.closed(np.minimum(a, b), np.maximum(a, b)))
        for a, b in zip(g.integers(0, 64, size=(300, 4)), g.integers(0, 64, size=(300, 4)))])(
            g.integers(0, 64, size=(512, 4)))),
    "range3d.rmq2d_1024": ("argmin", 7, lambda g: (lambda P, pr: [
        (P, pr, QueryBox.closed(np.minimum(a, b), np.maximum(a, b)))
        for a, b in zip(g.integers(0, 512, size=(10_000, 2)), g.integers(0, 512, size=(10_000, 2)))])(
            g.integers(0, 512, size=(1024, 2)), g.integers(0, 300, size=1024))),
    # cuttings
    "cuttings.envelope_pair": ("envelope", 0, lambda g: [([(0, 2, 1), (2, 0, 0)], 4)]),
    "cuttings.envelope_dominated": ("envelope", 0, lambda g: [([(1, 1, 1), (2, 3, 2)], 5)]),
    "cuttings.coverage_one_point": ("envelope", 0, lambda g: [([(3, 5, 2)], 8)]),
    "cuttings.locate_example": ("emptiness", 0, lambda g: [([(5, 5, 5)], [(0, 0, 0), (6, 6, 6)])]),
    "cuttings.boundary_rule": ("point_location", 16, lambda g: _boundary_cases(g)),
    "cuttings.surface": ("emptiness", 17, lambda g: _surface_cases(g)),
    "cuttings.conflict_example": ("conflict_lists", 0, lambda g: [
        _conflict_case([(3, 0, 0), (0, 3, 0), (0, 0, 3)], [(1, 1, 1), (3, 0, 0)], 4)]),
    "cuttings.conflict_random": ("conflict_lists", 8, lambda g: (lambda S: [
        _conflict_case(S[g.random(len(S)) < 0.25], S, 16)])(g.integers(0, 16, size=(64, 3)))),
    "cuttings.sample_is_input": ("conflict_lists", 18, lambda g: (lambda S: [
        _conflict_case(S, S, 16)])(g.integers(0, 16, size=(40, 3)))),
    # offline
    "offline.pl_example": ("point_location", 0, lambda g: [
        ([(0, 1, 0, 1), (2, 3, 2, 3)], [(0, 0), (2, 3), (5, 5)])]),
    "offline.bary_example": ("report", 0, lambda g: [
        ([(0, 0), (2, 2)], QueryBox.closed((0, 0), (1, 1))),
        ([(0, 0), (2, 2)], QueryBox.closed((1, 1), (3, 3)))]),
    "offline.dominance3d_2000": ("dominance_pairs", 9, lambda g: [
        (g.integers(0, 1000, size=(2000, 3)), g.integers(0, 1000, size=(2000, 3)))]),
    "offline.dominance4d_2000": ("dominance_pairs", 10, lambda g: [
        (g.integers(0, 1000, size=(2000, 4)), g.integers(0, 1000, size=(2000, 4)))]),
    "offline.emptiness_5000": ("emptiness", 11, lambda g: [
        (g.integers(0, 2**20, size=(5000, 4)), g.integers(0, 2**20, size=(5000, 4)))]),
    "offline.dominance5d_500": ("dominance_pairs", 12, lambda g: [
        (g.integers(0, 100, size=(500, 5)), g.integers(0, 100, size=(500, 5)))]),
    "offline.enclosure_example": ("enclosure", 0, lambda g: [
        [(0, 3, 0, 3), (1, 2, 1, 2), (1, 2, 4, 5)]]),
    "offline.enclosure_chain": ("enclosure", 0, lambda g: [[(0, 9, 0, 9), (1, 8, 1, 8), (2, 7, 2, 7)]]),
    "offline.enclosure_identical": ("enclosure", 0, lambda g: [[(1, 4, 1, 4), (1, 4, 1, 4)]]),
    "offline.maxima_5000": ("maxima", 13, lambda g: [g.integers(0, 2**20, size=(5000, 4))]),
    "offline.linfty_random": ("linfty", 14, lambda g: [
        (g.integers(0, 60, size=(30, d)), g.integers(0, 60, size=(30, d)), r)
        for d in (2, 3, 4) for r in (0, 1, 2, 5)]),
    # harness
    "harness.envelope_u4": ("envelope", 15, lambda g: [(g.integers(0, 4, size=(3, 3)), 4)]),
}


def cases(name):
    tag, seed, build = ENTRIES[name]
    return build(np.random.default_rng(seed))


def compute(name) -> dict:
    tag, seed, _ = ENTRIES[name]
    answers = [oracle_suite(tag, c) for c in cases(name)]
    entry = {"tag": tag, "seed": seed, "cases": len(answers)}
    text = canonical(answers)
    if len(text) <= INLINE_LIMIT:
        entry["answers"] = json.loads(text)
    else:
        entry["sha256"] = digest(answers)
    return entry


def matches(entry: dict, answers) -> bool:
    """Do ``answers`` (one per case) agree with a stored fixture entry?"""
    if "answers" in entry:
        return json.loads(canonical(answers)) == entry["answers"]
    return digest(answers) == entry["sha256"]


def write(path, names=None):
    names = sorted(ENTRIES) if names is None else names
    data = {name: compute(name) for name in names}
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return data
