from itertools import combinations, product

import numpy as np
import pytest

from orthrange import offline
from orthrange.core import ContractError
from orthrange.harness import oracles
from orthrange.offline import (OfflineInstance, build_packed_trie, dominance_fallback,
                               higher_d_dominance, linfty_closest_pair_decision, maxima,
                               offline_dominance, offline_dominance_3d, offline_dominance_4d,
                               offline_dominance_emptiness, offline_pl_2d, offline_report_bary,
                               rectangle_enclosure)


@pytest.fixture
def tiny_leaves(monkeypatch):
    """Send even a handful of points through the cutting path."""
    monkeypatch.setattr(offline, "LEAF", 2)
    monkeypatch.setattr(offline, "FEW_POINTS", 0)


def _check(P, Q, seed=0, **kw):
    res = offline_dominance(P, Q, seed=seed, **kw)
    pairs = res.pairs()
    assert len(pairs) == len(set(pairs))
    assert set(pairs) == oracles.dominance_pairs(P, Q)
    assert res.max_depth <= offline.MAX_DEPTH
    return res


# -- worked examples


def test_single_pair_3d_and_4d():
    assert offline_dominance_3d([(1, 1, 1)], [(2, 2, 2)]).pairs() == [(0, 0)]
    assert offline_dominance_3d([(1, 1, 1)], [(0, 2, 2)]).pairs() == []
    assert offline_dominance_4d([(1, 2, 3, 4)], [(1, 2, 3, 4)]).pairs() == [(0, 0)]


def test_queries_below_everything():
    g = np.random.default_rng(0)
    P = g.integers(100, 200, size=(2000, 4))
    Q = g.integers(0, 100, size=(2000, 4))
    res = offline_dominance(P, Q)
    assert res.k == 0 and res.max_depth == 0
    assert all(t["bad"] == 0 for t in res.trace)


def test_point_location_example():
    assert offline_pl_2d([(0, 1, 0, 1), (2, 3, 2, 3)], [(0, 0), (2, 3), (5, 5)]).tolist() == [0, 1, -1]
    assert offline_pl_2d(np.zeros((0, 4), int), [(0, 0)]).tolist() == [-1]


@pytest.mark.parametrize("seed", range(4))
def test_point_location_random(seed, each_backend):
    g = np.random.default_rng(seed)
    # disjoint rectangles: one per grid cell, shrunk at random
    rects = []
    for cx, cy in product(range(8), range(8)):
        if g.random() < 0.3:
            continue
        x1, y1 = cx * 10 + g.integers(0, 4), cy * 10 + g.integers(0, 4)
        rects.append((x1, x1 + g.integers(0, 6), y1, y1 + g.integers(0, 6)))
    Q = g.integers(0, 80, size=(500, 2))
    assert offline_pl_2d(rects, Q).tolist() == oracles.point_location(rects, Q)


def test_packed_trie_lists_are_y_sorted():
    g = np.random.default_rng(1)
    rects = []
    for _ in range(40):
        x = np.sort(g.integers(0, 50, 2))
        y = np.sort(g.integers(0, 50, 2))
        rects.append((x[0], x[1], y[0], y[1]))
    Q = g.integers(0, 50, size=(60, 2))
    trie = build_packed_trie(rects, Q)
    seen = []
    for v in range(1, 2 * trie.size):
        iv = trie.intervals(v)
        assert [lo for lo, _, _ in iv] == sorted(lo for lo, _, _ in iv)
        qs = trie.queries(v)
        assert [y for y, _ in qs] == sorted(y for y, _ in qs)
        seen.extend(i for _, _, i in iv)
    # every rectangle sits in at least one canonical node
    assert set(seen) == set(range(40))
    # each query appears once per level
    leaves = [i for v in range(trie.size, 2 * trie.size) for _, i in trie.queries(v)]
    assert sorted(leaves) == list(range(60))


def test_bary_example_and_stats(each_backend):
    pi, bi = offline_report_bary([(0, 0), (2, 2)], [(0, 1, 0, 1), (1, 3, 1, 3)], b=2, d=2)
    assert sorted(zip(pi.tolist(), bi.tolist())) == [(0, 0), (1, 1)]
    g = np.random.default_rng(2)
    P = g.integers(0, 100, size=(1000, 3))
    lo = g.integers(0, 100, size=(200, 3))
    hi = lo + g.integers(0, 40, size=(200, 3))
    boxes = np.stack([lo[:, 0], hi[:, 0], lo[:, 1], hi[:, 1], lo[:, 2], hi[:, 2]], 1)
    want = {(p, j) for j in range(200) for p in np.nonzero(np.all((P >= lo[j]) & (P <= hi[j]), 1))[0].tolist()}
    touches = []
    for b in (2, 4, 16):
        st = offline.BAryStats()
        pi, bi = offline_report_bary(P, boxes, b=b, d=3, stats=st)
        assert set(zip(pi.tolist(), bi.tolist())) == want and len(pi) == len(want)
        touches.append(st.touches)
    with pytest.raises(ContractError):
        offline_report_bary(P, boxes, b=1, d=3)


def test_enclosure_examples():
    assert rectangle_enclosure([(0, 3, 0, 3), (1, 2, 1, 2), (1, 2, 4, 5)]).pairs() == [(0, 1)]
    chain = rectangle_enclosure([(0, 9, 0, 9), (1, 8, 1, 8), (2, 7, 2, 7)])
    assert chain.as_set() == {(0, 1), (0, 2), (1, 2)}
    assert rectangle_enclosure([(1, 4, 1, 4), (1, 4, 1, 4)]).as_set() == {(0, 1), (1, 0)}
    assert rectangle_enclosure(np.zeros((0, 4), int)).k == 0
    with pytest.raises(ContractError):
        rectangle_enclosure([(3, 1, 0, 1)])


def test_enclosure_random():
    g = np.random.default_rng(3)
    a = g.integers(0, 300, size=(1500, 2))
    w = g.integers(0, 120, size=(1500, 2))
    R = np.stack([a[:, 0], a[:, 0] + w[:, 0], a[:, 1], a[:, 1] + w[:, 1]], 1)
    assert rectangle_enclosure(R).as_set() == oracles.enclosure(R)


def test_maxima_examples():
    assert maxima([(0, 0, 0, 0), (1, 1, 1, 1)]).tolist() == [1]
    anti = [(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0), (0, 0, 0, 3)]
    assert maxima(anti).tolist() == [0, 1, 2, 3]
    assert maxima([(2, 2, 2, 2), (2, 2, 2, 2), (1, 1, 1, 1)]).tolist() == [0, 1]
    assert len(maxima(np.zeros((0, 4), int))) == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_maxima_random(d):
    g = np.random.default_rng(d)
    P = g.integers(0, 12 if d < 4 else 30, size=(800, d))
    assert maxima(P).tolist() == oracles.maxima(P)


def test_linfty_examples():
    assert linfty_closest_pair_decision([(0, 0)], [(1, 1)], 1)
    assert not linfty_closest_pair_decision([(0, 0)], [(1, 1)], 0)
    assert linfty_closest_pair_decision([(4, 4, 4)], [(4, 4, 4)], 0)
    assert not linfty_closest_pair_decision([], [(1, 1)], 5)
    with pytest.raises(ContractError):
        linfty_closest_pair_decision([(0, 0)], [(1, 1)], -1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_linfty_random(d):
    g = np.random.default_rng(20 + d)
    for r in (0, 1, 3, 7):
        red = g.integers(0, 80, size=(25, d))
        blue = g.integers(0, 80, size=(25, d))
        assert linfty_closest_pair_decision(red, blue, r) == oracles.linfty_within(red, blue, r)


# -- dominance against the oracle


@pytest.mark.parametrize("d,n,U", [(3, 300, 50), (3, 2000, 10**6), (4, 300, 50), (4, 2000, 10**6),
                                   (5, 400, 20), (6, 300, 10)])
def test_dominance_random(d, n, U):
    g = np.random.default_rng(d * n)
    _check(g.integers(0, U, size=(n, d)), g.integers(0, U, size=(n, d)))


@pytest.mark.parametrize("d", [3, 4])
def test_dominance_random_both_backends(d, each_backend):
    g = np.random.default_rng(40 + d)
    _check(g.integers(0, 200, size=(600, d)), g.integers(0, 200, size=(600, d)))


def test_bad_queries_take_the_second_round():
    # queries sit high, so most lie above the sampled surface
    g = np.random.default_rng(5)
    P = g.integers(0, 1000, size=(1500, 4))
    Q = g.integers(800, 1000, size=(300, 4))
    res = _check(P, Q)
    assert any(t["bad"] > 0 for t in res.trace)
    assert res.max_depth >= 1


def test_fallback_agrees():
    g = np.random.default_rng(6)
    for d in (2, 3, 4, 5):
        P = g.integers(0, 40, size=(500, d))
        Q = g.integers(0, 40, size=(500, d))
        want = oracles.dominance_pairs(P, Q)
        assert dominance_fallback(P, Q).as_set() == want
        res = offline_dominance(P, Q, force_fallback=True)
        assert res.as_set() == want
        assert all(t["fallback"] for t in res.trace if t["n"] and t["m"] and t["d"] <= 4)


def test_fast_path_switch(each_backend):
    g = np.random.default_rng(7)
    P = g.integers(0, 30, size=(100, 3))
    Q = g.integers(0, 30, size=(100, 3))
    want = oracles.dominance_pairs(P, Q)
    for fp in ("auto", True, False):
        assert offline_dominance_3d(P, Q, fast_path=fp).as_set() == want
    assert offline_dominance_3d(P, Q, fast_path=True).trace[0].get("few_points")
    assert not offline_dominance_3d(P, Q, fast_path=False).trace[0].get("few_points")


def test_all_equal_last_coordinate():
    g = np.random.default_rng(8)
    P = g.integers(0, 20, size=(300, 5))
    Q = g.integers(0, 20, size=(300, 5))
    P[:, 4] = Q[:, 4] = 3
    # ties on the split axis put every input before every query
    res = _check(P, Q)
    assert res.k > 0


@pytest.mark.parametrize("d", [3, 4, 5])
def test_exhaustive_cube_inputs(d, tiny_leaves):
    # every input set of up to 3 corners of {0,1}^d against all corners
    grid = [tuple(c) for c in product((0, 1), repeat=d)]
    Q = np.array(grid)
    for k in range(4 if d < 5 else 3):
        for P in combinations(grid, k):
            P = np.array(P, dtype=np.int64).reshape(-1, d)
            _check(P, Q)


@pytest.mark.parametrize("d", [3, 4])
def test_exhaustive_cube_queries(d, tiny_leaves):
    grid = [tuple(c) for c in product((0, 1), repeat=d)]
    P = np.array(grid)
    for k in range(4):
        for Q in combinations(grid, k):
            Q = np.array(Q, dtype=np.int64).reshape(-1, d)
            _check(P, Q)


@pytest.mark.parametrize("seed", range(30))
def test_tiny_random_through_cuttings(seed, tiny_leaves):
    g = np.random.default_rng(seed)
    d = 3 + seed % 3
    n, m = g.integers(0, 7, size=2)
    _check(g.integers(0, 2, size=(n, d)), g.integers(0, 2, size=(m, d)), seed=seed)
    P, Q = g.integers(0, 4, size=(40, d)), g.integers(0, 4, size=(40, d))
    _check(P, Q, seed=seed)
    hit, _ = offline_dominance_emptiness(P, Q, seed=seed)
    assert np.array_equal(hit, oracles.emptiness(P, Q))


# -- emptiness


def test_emptiness_examples():
    hit, _ = offline_dominance_emptiness([(0, 0, 0)], [(0, 0, 0), (5, 5, 5)])
    assert hit.tolist() == [True, True]
    hit, _ = offline_dominance_emptiness([(1, 0, 0), (0, 1, 0)], [(0, 0, 0)])
    assert hit.tolist() == [False]
    hit, _ = offline_dominance_emptiness(np.zeros((0, 4), int), [(1, 1, 1, 1)])
    assert hit.tolist() == [False]


@pytest.mark.parametrize("d", [3, 4, 5])
def test_emptiness_random(d):
    g = np.random.default_rng(50 + d)
    P = g.integers(0, 1 << 20, size=(3000, d))
    Q = g.integers(0, 1 << 20, size=(3000, d))
    hit, trace = offline_dominance_emptiness(P, Q)
    assert np.array_equal(hit, oracles.emptiness(P, Q))
    assert max(t["depth"] for t in trace) <= offline.MAX_DEPTH


def test_emptiness_excluding_own_copy():
    P = np.array([(1, 1, 1, 1), (5, 5, 5, 5)])
    keys = np.r_[0, 1, 0, 1]
    hit, _ = offline_dominance_emptiness(P, P, exclude_self_keys=keys)
    assert hit.tolist() == [False, True]


# -- determinism and debugging


def test_same_seed_same_run():
    g = np.random.default_rng(9)
    P = g.integers(0, 10**6, size=(3000, 4))
    Q = g.integers(0, 10**6, size=(3000, 4))
    a = offline_dominance(P, Q, seed=11)
    b = offline_dominance(P, Q, seed=11)
    assert a.trace == b.trace
    assert np.array_equal(a.pairs_input, b.pairs_input)
    assert np.array_equal(a.pairs_query, b.pairs_query)
    c = offline_dominance(P, Q, seed=12)
    assert c.as_set() == a.as_set()


def test_debug_checks_sub_instance_orders(monkeypatch):
    g = np.random.default_rng(10)
    P = g.integers(0, 500, size=(800, 4))
    Q = g.integers(0, 500, size=(800, 4))
    monkeypatch.setattr(offline, "DEBUG", True)
    assert offline_dominance(P, Q).as_set() == oracles.dominance_pairs(P, Q)
    inst = OfflineInstance.build(P, Q)
    assert inst.check_orders()
    inst.orders[0] = inst.orders[0][::-1].copy()
    assert not inst.check_orders()
    with pytest.raises(AssertionError):
        offline_dominance(inst)


def test_instance_and_contract_errors():
    inst = OfflineInstance.build([(1, 2, 3)], np.zeros((0, 3), int))
    assert (inst.n, inst.m, inst.d, inst.U) == (1, 0, 3, 4)
    assert offline_dominance(inst).k == 0
    with pytest.raises(ContractError):
        OfflineInstance.build([(1, 2, 3)], [(1, 2)])
    with pytest.raises(ContractError):
        offline_dominance_3d([(1, 2, 3, 4)], [(1, 2, 3, 4)])
    with pytest.raises(ContractError):
        offline_dominance_4d([(1, 2, 3)], [(1, 2, 3)])
    with pytest.raises(ContractError):
        higher_d_dominance([(1, 2, 3, 4)], [(1, 2, 3, 4)])
    assert higher_d_dominance([(1,) * 5], [(2,) * 5]).pairs() == [(0, 0)]
