from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loomlab import lp
from loomlab.framework import space_barrier
from loomlab.hcore import Hypergraph, complete
from loomlab.tiling import (bound_tiling, certificate_problems, column_from_walk, enum_cycle_columns,
                            frac_matching, frac_tiling, fractional_cover, split_walk, tiling_problems)

from _oracles import no_positive_closed_walk


def _walk_ok(walk, G, k, ell):
    edges = {frozenset(e) for e in G.edges}
    m = len(walk)
    step = k - ell
    if m % step:
        return False
    return all(frozenset(walk[(i + j) % m] for j in range(k)) in edges and
               len({walk[(i + j) % m] for j in range(k)}) == k for i in range(0, m, step))


def _check_tiling(G, ell, res):
    k = G.k
    cover = [Fraction(0)] * G.n
    for c, w in zip(res.tiling.columns, res.tiling.weights):
        assert w >= 0
        assert _walk_ok(c.walk, G, k, ell)
        for v in c.walk:
            cover[v] += w
    assert all(x == 1 for x in cover)


# LP

def test_lp_feasible():
    res = lp.feasibility([[1, 0], [0, 1], [1, 1]], [2, 3])
    assert res.feasible and lp.check_primal([[1, 0], [0, 1], [1, 1]], [2, 3], res.x)


def test_lp_infeasible_certificate():
    cols = [[1, 1], [2, 2]]
    res = lp.feasibility(cols, [1, 2])
    assert not res.feasible and lp.check_farkas(cols, [1, 2], res.y)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=6),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_lp_verdicts_certified(cols, b):
    res = lp.feasibility(cols, b)
    if res.feasible:
        assert lp.check_primal(cols, b, res.x)
    else:
        assert lp.check_farkas(cols, b, res.y)


# tilings

@pytest.mark.parametrize("n", [6, 7, 8, 10])
def test_complete_graph_feasible(n):
    G = complete(n, 3)
    res = frac_tiling(G, 1)
    assert res.feasible
    assert not tiling_problems(G, 1, res.tiling)
    _check_tiling(G, 1, res)


def test_barrier_infeasible_with_certificate():
    G = space_barrier(3, 1, 8, 1)
    res = frac_tiling(G, 1)
    assert res.status == "infeasible"
    assert sum(res.y) > 0
    assert not certificate_problems(G, 1, res.y, res.max_verts)
    # independent: no closed walk of any length has positive value
    assert no_positive_closed_walk(G.n, 3, G.edges, res.y)


def test_barrier_at_threshold_feasible():
    G = space_barrier(3, 1, 8, 2)
    res = frac_tiling(G, 1)
    assert res.feasible
    _check_tiling(G, 1, res)


def test_enum_agrees_with_colgen():
    for G in (complete(6, 3), space_barrier(3, 1, 6, 1)):
        a = frac_tiling(G, 1, method="colgen").status
        b = frac_tiling(G, 1, method="enum", max_verts=8).status
        assert b in (a, "unknown")


def test_enum_columns_are_walks():
    G = complete(5, 3)
    cs = enum_cycle_columns(G, 1, 10)
    assert cs.complete
    for c in cs.columns:
        assert _walk_ok(c.walk, G, 3, 1)
        assert sum(c.counts) == len(c.walk)


def test_empty_graph_infeasible():
    res = frac_tiling(Hypergraph.uniform(4, 3, []), 1)
    assert not res.feasible


@st.composite
def small_3graphs(draw):
    n = draw(st.integers(4, 7))
    all_e = list(combinations(range(n), 3))
    return Hypergraph.uniform(n, 3, draw(st.lists(st.sampled_from(all_e), unique=True, min_size=1)))


@given(small_3graphs())
@settings(max_examples=25, deadline=None)
def test_tiling_verdicts_verified(G):
    res = frac_tiling(G, 1)
    if res.feasible:
        _check_tiling(G, 1, res)
    else:
        assert res.status == "infeasible"
        assert no_positive_closed_walk(G.n, 3, G.edges, res.y)


def test_fractional_cover_rhs():
    G = complete(6, 3)
    res = fractional_cover(G, 1, [2] * 6)
    assert res.feasible
    assert res.tiling.coverage(6) == [2] * 6


def test_split_walk():
    seq = (0, 1, 2, 3, 4, 5) * 2  # two laps of C(3,1,3)
    a, b = split_walk(seq, 3, 1)
    assert sorted(a + b) == sorted(seq)
    assert split_walk((0, 1, 2, 3, 4, 5), 3, 1) is None


def test_bound_tiling_keeps_coverage():
    G = complete(6, 3)
    res = frac_tiling(G, 1)
    t2 = bound_tiling(res.tiling, G, 1, 6)
    assert t2.coverage(6) == [1] * 6
    # every long column is a walk that cannot be split further
    assert all(c.order <= 6 or split_walk(c.walk, 3, 1) is None for c in t2.columns)
    for c in t2.columns:
        assert _walk_ok(c.walk, G, 3, 1)


def test_column_from_walk():
    c = column_from_walk((0, 1, 2, 3, 4, 5), 6, 3, 1)
    assert c.counts == (1,) * 6 and c.t == 3


def test_frac_matching_triangle():
    # 2-graph triangle: perfect fractional matching with weights 1/2
    res = frac_matching(Hypergraph.uniform(3, 2, [(0, 1), (1, 2), (0, 2)]))
    assert res.feasible


def test_frac_matching_star():
    res = frac_matching(Hypergraph.uniform(4, 2, [(0, 1), (0, 2), (0, 3)]))
    assert not res.feasible
