from itertools import product

import numpy as np
import pytest

from orthrange.ball_inheritance import FAST_QUERY, LOW_SPACE
from orthrange.core import ContractError, PointD, QueryBox
from orthrange.harness import oracles
from orthrange.range2d import RangeReport2D, build_2d, empty_2d, report_2d

FOUR = np.array([(0, 0), (1, 2), (2, 1), (3, 3)])


def coords(pts):
    return sorted(p.coords for p in pts)


def test_report_examples():
    s = build_2d(FOUR)
    assert coords(report_2d(s, QueryBox.closed((1, 0), (2, 2)))) == [(1, 2), (2, 1)]
    assert coords(report_2d(s, QueryBox.closed((0, 0), (3, 3)))) == [tuple(p) for p in FOUR]
    assert report_2d(s, QueryBox.closed((1, 3), (2, 3))) == []


def test_empty_examples():
    s = build_2d(FOUR)
    assert not empty_2d(s, QueryBox.closed((1, 0), (2, 2)))
    one = build_2d(np.array([(0, 0)]))
    assert empty_2d(one, QueryBox.closed((1, 1), (5, 5)))
    assert not empty_2d(s, QueryBox.closed((2, 1), (2, 1)))
    assert s.last.reported <= 1
    assert not empty_2d(s, QueryBox.closed((0, 0), (3, 3)))
    assert s.last.reported == 1


def test_single_point_structure():
    s = build_2d(np.array([(0, 0)]))
    assert coords(s.report(QueryBox.closed((0, 0), (0, 0)))) == [(0, 0)]
    assert s.report(QueryBox.closed((1, 0), (3, 3))) == []


def test_limit_truncates():
    s = build_2d(FOUR)
    pts, truncated = report_2d(s, QueryBox.closed((0, 0), (3, 3)), limit=2)
    assert len(pts) == 2 and truncated
    pts, truncated = report_2d(s, QueryBox.closed((1, 0), (2, 2)), limit=5)
    assert len(pts) == 2 and not truncated


def test_ids_survive():
    pts = [PointD((1, 0), 40), PointD((0, 1), 41)]
    s = RangeReport2D(pts)
    assert sorted(p.id for p in s.report(QueryBox.closed((0, 0), (1, 1)))) == [40, 41]


def test_wrong_dimension_box():
    with pytest.raises(ContractError):
        build_2d(FOUR).report(QueryBox.closed((0, 0, 0), (1, 1, 1)))


@pytest.mark.parametrize("mode,B", [(FAST_QUERY, 2), (FAST_QUERY, 4), (LOW_SPACE, 2), (LOW_SPACE, 4)])
def test_all_boxes_small(each_backend, mode, B, rng):
    for n in (1, 2, 5, 12):
        P = np.stack([rng.permutation(n), rng.permutation(n)], 1)
        s = RangeReport2D(P, B, mode)
        for x1, x2, y1, y2 in product(range(n), repeat=4):
            if x1 > x2 or y1 > y2:
                continue
            box = QueryBox.closed((x1, y1), (x2, y2))
            want = oracles.report(P, box)
            got = sorted(p.id for p in s.report(box))
            assert got == want
            assert s.last.report_calls <= 2 + 2 * len(want)


def test_random_boxes_medium(each_backend, rng):
    n = 3000
    P = np.stack([rng.permutation(n), rng.permutation(n)], 1)
    s = RangeReport2D(P)
    for _ in range(500):
        a, b = rng.integers(0, n, size=(2, 2))
        box = QueryBox.closed(np.minimum(a, b), np.maximum(a, b))
        got = s.report(box)
        ids = sorted(p.id for p in got)
        assert ids == oracles.report(P, box)
        assert len(ids) == len(set(ids))
        assert all(box.contains(p) for p in got)


def test_lca_matches_root_descent():
    n = 1024
    s = build_2d(np.stack([np.arange(n), np.arange(n)], 1))
    h = s.tree.height
    x2 = np.arange(n)
    for x1 in range(n):
        depth = np.zeros(n, dtype=np.int64)
        same = np.ones(n, dtype=bool)
        for d in range(h):
            shift = h - d - 1
            same &= (x1 >> shift) == (x2 >> shift)
            depth += same
        for j in (0, x1, n - 1, (x1 * 7) % n):
            if j == x1:
                continue
            assert s.lca(x1, j) == (int(depth[j]), x1 >> (h - int(depth[j])))
            assert s.lca(x1, j) == oracles.lca(h, x1, j)


def test_rank_translation_matches_child_lists(rng):
    n = 500
    P = np.stack([rng.permutation(n), rng.permutation(n)], 1)
    s = RangeReport2D(P)
    t = s.tree
    for _ in range(300):
        x1, x2 = sorted(rng.choice(n, size=2, replace=False).tolist())
        y1, y2 = sorted(rng.integers(0, n, size=2).tolist())
        tr = s.translate(x1, x2, y1, y2)
        depth, node = s.lca(x1, x2)
        size = t.node_size(depth + 1)
        for side in (0, 1):
            child = 2 * node + side
            lo = child * size
            xs = t.root_x[(t.root_x >= lo) & (t.root_x < lo + size)]
            ys = np.sort(t.coords[xs, 1])
            want = (int(np.searchsorted(ys, y1, side="left")) + 1, int(np.searchsorted(ys, y2, side="right")))
            if tr is None:
                assert want[0] > want[1]
            else:
                got = tr[2 + side]
                if want[0] <= want[1]:
                    assert got == want
                else:
                    assert got[0] > got[1]


def test_space_budget_at_1e4(rng):
    n = 10000
    P = np.stack([rng.permutation(n), rng.permutation(n)], 1)
    sp = RangeReport2D(P).space_bits()
    # ball tree O(n B lglg n) bits plus O(n) words of RMQ and predecessor layers
    assert sp["ball"] / n < 400
    assert (sp["rmq"] + sp["pred"]) / n < 64 * 16
