from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthrange.core import (COORD_MAX, ContractError, PointD, QueryBox, dominates, make_points,
                            presort, rank_space_reduce, reflect)


def test_rank_space_examples():
    pts = make_points([(10,), (30,), (20,)])
    ranked, _ = rank_space_reduce(pts)
    assert [p.coords[0] for p in ranked] == [0, 2, 1]
    ranked, _ = rank_space_reduce([PointD((5,), 0), PointD((5,), 1)])
    assert [p.coords[0] for p in ranked] == [0, 1]
    ranked, rmap = rank_space_reduce([])
    assert ranked == [] and len(rmap) == 0


def test_ties_broken_by_id_not_position():
    ranked, _ = rank_space_reduce([PointD((5,), 7), PointD((5,), 2)])
    assert [p.coords[0] for p in ranked] == [1, 0]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20)),
                min_size=1, max_size=40))
def test_rank_space_roundtrip(rows):
    pts = make_points(rows)
    ranked, rmap = rank_space_reduce(pts)
    for a in range(3):
        assert sorted(p.coords[a] for p in ranked) == list(range(len(rows)))
    assert rmap.invert(ranked) == pts
    # per-axis order is preserved
    for p, q in product(range(len(rows)), repeat=2):
        for a in range(3):
            if rows[p][a] < rows[q][a]:
                assert ranked[p].coords[a] < ranked[q].coords[a]


def test_presort_examples(rng):
    pts = [PointD((3, 0), 0), PointD((1, 2), 1)]
    assert [o.tolist() for o in presort(pts)] == [[1, 0], [0, 1]]
    assert [o.tolist() for o in presort([PointD((4, 4), 0)])] == [[0], [0]]
    rows = rng.integers(0, 50, size=(1000, 3))
    orders = presort(make_points(rows.tolist()))
    for a in range(3):
        want = sorted(range(1000), key=lambda i: (rows[i, a], i))
        assert orders[a].tolist() == want


def test_dominates_is_partial_order_on_small_grid():
    grid = [PointD(c) for c in product(range(3), repeat=3)]
    for p in grid:
        assert dominates(p, p)
    for p, q in product(grid, repeat=2):
        if dominates(p, q) and dominates(q, p):
            assert p.coords == q.coords
    for p, q, r in product(grid, repeat=3):
        if dominates(p, q) and dominates(q, r):
            assert dominates(p, r)


def test_box_membership_matches_corner_dominance():
    grid = [PointD(c) for c in product(range(4), repeat=2)]
    for lo in product(range(4), repeat=2):
        for hi in product(range(4), repeat=2):
            if lo[0] > hi[0] or lo[1] > hi[1]:
                continue
            box = QueryBox.closed(lo, hi)
            for p in grid:
                corners = dominates(PointD(lo), p) and dominates(p, PointD(hi))
                assert box.contains(p) == corners


def test_box_sentinels():
    box = QueryBox((None, 2), (5, None), universe=10)
    assert box.bounds() == ((0, 2), (5, 10))
    assert box.sidedness == 2
    assert QueryBox.orthant((3, 3)).contains(PointD((0, 3)))
    with pytest.raises(ContractError):
        QueryBox.closed((3,), (2,))


def test_point_contracts():
    with pytest.raises(ContractError):
        PointD((COORD_MAX + 1,))
    with pytest.raises(ContractError):
        PointD((-1, 0))
    with pytest.raises(ContractError):
        dominates(PointD((0,)), PointD((0, 0)))


def test_reflect_turns_order_around():
    a = np.array([[0, 3], [2, 1]])
    assert reflect(a, 4).tolist() == [[3, 0], [1, 2]]
