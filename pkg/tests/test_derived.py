"""Structures against the committed oracle fixtures in tests/fixtures/derived.json.

Each fixture is checked twice: the oracle recomputed now must reproduce the
stored answer, and the structure's own answer must match it.
"""
import json
import pathlib

import numpy as np
import pytest

from orthrange.core import rank_space_reduce_array
from orthrange.harness import fixtures

FIXTURES = json.loads((pathlib.Path(__file__).parent / "fixtures" / "derived.json").read_text())


def _sorted_ids(arr):
    return sorted(int(i) for i in arr)


# -- solvers: list of cases -> list of answers in the oracle's format


def solve_sort_ranks(cases):
    out = []
    for values, ids in cases:
        ranked, _ = rank_space_reduce_array(np.asarray(values).reshape(-1, 1), np.asarray(ids))
        out.append(ranked[:, 0].tolist())
    return out


def solve_alphabet_rank(cases):
    from orthrange.succinct import AlphabetRankIndex

    out = []
    for sym in cases:
        idx = AlphabetRankIndex(sym, max(sym) + 1)
        out.append([idx.rank(k) for k in range(1, len(sym) + 1)])
    return out


def solve_rmq(cases):
    from orthrange.succinct import RMQIndex

    return [RMQIndex(keys).query(i, j) for keys, i, j in cases]


def solve_predecessor(cases):
    from orthrange.succinct import PredecessorIndex

    return [PredecessorIndex(keys).predecessor(y, lambda r, k=keys: k[r - 1]) for keys, y in cases]


def _tree(points):
    from orthrange.ball_inheritance import BallTree, SkipPlan

    return BallTree(np.asarray(points), SkipPlan())


def solve_routing_bits(cases):
    return [[int(b) for b in _tree(P).routing_bits(0, 0)] for P in cases]


def solve_step_down(cases):
    from orthrange.ball_inheritance import BallTree, SkipPlan

    out = []
    for bits, index in cases:
        # a 4-point instance whose root routing bits are ``bits`` (x-ranks in y order)
        lo, hi = iter(range(len(bits) // 2)), iter(range(len(bits) // 2, len(bits)))
        P = np.array([(next(hi) if b else next(lo), y) for y, b in enumerate(bits)])
        out.append(list(BallTree(P, SkipPlan()).step_down(0, 0, index)))
    return out


def solve_ball_leaf(cases):
    return [_tree(P).query_leaf(level, node, index)[0] for P, level, node, index in cases]


def _range2d(P):
    from orthrange.range2d import RangeReport2D

    return RangeReport2D(np.asarray(P), 2)


def solve_range2d(cases):
    s = _range2d(cases[0][0])
    return [sorted(p.id for p in s.report(box)) for _, box in cases]


def _range3d_solver(sides, c_exp=0.0, eps=0.5):
    def solve(cases):
        from orthrange.range3d import Range3D

        s = Range3D(np.asarray(cases[0][0]), sides, eps, c_exp)
        return [_sorted_ids(s.report_ids(box)) for _, box in cases]
    return solve


def solve_dominance3d(cases):
    from orthrange.range3d import Dominance3DBase

    s = Dominance3DBase(np.asarray(cases[0][0]))
    return [_sorted_ids(s.query_ids(box.hi)) for _, box in cases]


def solve_report_kd(cases):
    from orthrange.range3d import report_kd

    P = np.asarray(cases[0][0])
    got = report_kd(P, [box for _, box in cases], d=4)
    return [_sorted_ids(ids) for ids in got]


def solve_rmq2d(cases):
    from orthrange.range3d import RMQ2D

    P, pr, _ = cases[0]
    s = RMQ2D(np.asarray(P), np.asarray(pr))
    return [s.query_index(box) for _, _, box in cases]


def solve_envelope(cases):
    from orthrange.cuttings import build_staircase

    out = []
    for R, U in cases:
        st = build_staircase(np.asarray(R), U)
        grid = np.stack(np.meshgrid(*[np.arange(U)] * 3, indexing="ij"), -1).reshape(-1, 3)
        out.append(st.above(grid).reshape(U, U, U))
    return out


def solve_locate_example(cases):
    from orthrange.cuttings import build_staircase, build_vd, locate

    vd = build_vd(build_staircase(np.asarray(cases[0][0]), 8))
    return [(locate(vd, np.asarray(cases[0][1])) < 0).tolist()]


def solve_boundary(cases):
    from orthrange.cuttings import build_staircase, build_vd

    out = []
    for _, Q, R, U in cases:
        vd = build_vd(build_staircase(R, U))
        out.append(vd.cell_of_xy(Q[:, 0], Q[:, 1]).tolist())
    return out


def solve_surface(cases):
    from orthrange.cuttings import build_staircase

    st = build_staircase(np.asarray(cases[0][0]), 12)
    return [st.above(np.asarray(c)).tolist() for _, c in cases]


def solve_conflict(cases):
    from orthrange.cuttings import build_staircase, build_vd, conflict_lists

    out = []
    for _, S, R, U in cases:
        cl = conflict_lists(build_vd(build_staircase(R, U)), S)
        out.append([sorted(cl[c].tolist()) for c in range(len(cl))])
    return out


def solve_pl(cases):
    from orthrange.offline import offline_pl_2d

    return [offline_pl_2d(np.asarray(R), np.asarray(Q)).tolist() for R, Q in cases]


def solve_bary(cases):
    from orthrange.offline import offline_report_bary

    P = np.asarray(cases[0][0])
    boxes = [[v for a in range(2) for v in (box.lo[a], box.hi[a])] for _, box in cases]
    pi, bi = offline_report_bary(P, boxes, b=2, d=2)
    return [sorted(int(p) for p, b in zip(pi, bi) if b == j) for j in range(len(cases))]


def solve_dominance(cases):
    from orthrange.offline import offline_dominance

    return [offline_dominance(np.asarray(P), np.asarray(Q), seed=7).as_set() for P, Q in cases]


def solve_emptiness(cases):
    from orthrange.offline import offline_dominance_emptiness

    return [offline_dominance_emptiness(np.asarray(P), np.asarray(Q), seed=7)[0] for P, Q in cases]


def solve_enclosure(cases):
    from orthrange.offline import rectangle_enclosure

    return [rectangle_enclosure(np.asarray(R)).as_set() for R in cases]


def solve_maxima(cases):
    from orthrange.offline import maxima

    return [sorted(maxima(np.asarray(P), 4).tolist()) for P in cases]


def solve_linfty(cases):
    from orthrange.offline import linfty_closest_pair_decision

    return [linfty_closest_pair_decision(red, blue, r, red.shape[1]) for red, blue, r in cases]


SOLVERS = {
    "core.rank_ties": solve_sort_ranks,
    "core.presort_1000": solve_sort_ranks,
    "succinct.alphabet_rank": solve_alphabet_rank,
    "succinct.rmq": solve_rmq,
    "succinct.predecessor": solve_predecessor,
    "ball.routing_bits": solve_routing_bits,
    "ball.step_down": solve_step_down,
    "ball.query_leaf_root": solve_ball_leaf,
    "range2d.four_point_sweep": solve_range2d,
    "range2d.examples": solve_range2d,
    "range3d.4sided_example": _range3d_solver(4),
    "range3d.4sided_1e4": _range3d_solver(4),
    "range3d.collinear": _range3d_solver(4),
    "range3d.6sided_2048": _range3d_solver(6, c_exp=1.0),
    "range3d.dominance3d": solve_dominance3d,
    "range3d.report_kd_512": solve_report_kd,
    "range3d.rmq2d_1024": solve_rmq2d,
    "cuttings.envelope_pair": solve_envelope,
    "cuttings.envelope_dominated": solve_envelope,
    "cuttings.coverage_one_point": solve_envelope,
    "cuttings.locate_example": solve_locate_example,
    "cuttings.boundary_rule": solve_boundary,
    "cuttings.surface": solve_surface,
    "cuttings.conflict_example": solve_conflict,
    "cuttings.conflict_random": solve_conflict,
    "cuttings.sample_is_input": solve_conflict,
    "offline.pl_example": solve_pl,
    "offline.bary_example": solve_bary,
    "offline.dominance3d_2000": solve_dominance,
    "offline.dominance4d_2000": solve_dominance,
    "offline.emptiness_5000": solve_emptiness,
    "offline.dominance5d_500": solve_dominance,
    "offline.enclosure_example": solve_enclosure,
    "offline.enclosure_chain": solve_enclosure,
    "offline.enclosure_identical": solve_enclosure,
    "offline.maxima_5000": solve_maxima,
    "offline.linfty_random": solve_linfty,
    "harness.envelope_u4": solve_envelope,
}


def test_every_fixture_has_a_solver():
    assert set(SOLVERS) == set(fixtures.ENTRIES) == set(FIXTURES)


@pytest.mark.parametrize("name", sorted(fixtures.ENTRIES))
def test_oracle_reproduces_fixture(name):
    entry = FIXTURES[name]
    assert fixtures.compute(name) == entry


@pytest.mark.parametrize("name", sorted(fixtures.ENTRIES))
def test_structure_matches_fixture(name):
    entry = FIXTURES[name]
    cases = fixtures.cases(name)
    got = SOLVERS[name](cases)
    assert len(got) == entry["cases"]
    assert fixtures.matches(entry, got)
