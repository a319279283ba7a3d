import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from loomlab.cycwalk import build_cycle, cycle_graph
from loomlab.errors import PreconditionFailed
from loomlab.hcore import Hypergraph, complete
from loomlab.lattice import (INF, divisor_cycle, gcd_of, generators, hermite_rows, hom_columns, in_lattice,
                             lattice_complete, lattice_complete_from_columns, lattice_index)

from _oracles import cycle_colourings


def snf_complete(cols, dim, vF):
    """Oracle: span(cols) = {b : Σb ≡ 0 mod vF} iff full rank and index vF.

    Every column has coordinate sum vF, so the span sits inside the target;
    equal index then forces equality.
    """
    if not cols:
        return False
    M = Matrix(cols).T
    if M.rank() < dim:
        return False
    S = smith_normal_form(M, domain=ZZ)
    index = 1
    for i in range(dim):
        index *= abs(S[i, i])
    return index == vF


def colouring_gcd(seq, k, ell):
    """Oracle gcd over proper colourings with the fewest colours."""
    c = k
    while True:
        cols = cycle_colourings(seq, k, ell, c)
        if cols:
            break
        c += 1
    D = set()
    for col in cols:
        vals = list(col.values())
        D.add(abs(vals.count(0) - vals.count(1)))
    nz = [d for d in D if d]
    return c, (math.gcd(*nz) if nz else INF), cols


# Hermite basis

@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=5),
       st.lists(st.integers(-6, 6), min_size=3, max_size=3))
@settings(max_examples=150, deadline=None)
def test_membership_matches_sympy(vecs, b):
    rows = hermite_rows(vecs, 3)
    got = in_lattice(rows, b)
    # oracle: b in span iff appending it leaves rank and SNF invariants unchanged
    A = Matrix(vecs).T
    Ab = Matrix(vecs + [b]).T
    if A.rank() != Ab.rank():
        assert not got
        return
    r = A.rank()
    if r == 0:
        assert got == (not any(b))
        return
    sa = smith_normal_form(A, domain=ZZ)
    sb = smith_normal_form(Ab, domain=ZZ)
    prod_a = math.prod(abs(sa[i, i]) for i in range(r))
    prod_b = math.prod(abs(sb[i, i]) for i in range(r))
    assert got == (prod_a == prod_b)


def test_lattice_index():
    rows = hermite_rows([[2, 0], [0, 3]], 2)
    assert lattice_index(rows, 2) == 6
    assert lattice_index(hermite_rows([[1, 1]], 2), 2) is None


def test_generators_span_target():
    for n, vF in [(3, 6), (4, 5)]:
        rows = hermite_rows(generators(n, vF), n)
        assert lattice_index(rows, n) == vF


# completeness

def test_short_cycle_incomplete_on_single_edge():
    F = build_cycle(3, 1, 3)
    edge = complete(3, 3)
    res = lattice_complete(F, edge)
    assert res.verdict == "incomplete"
    cols, _ = hom_columns(F, edge)
    assert not snf_complete(cols, 3, F.order)
    assert res.witness is not None and not in_lattice(res.hnf, res.witness)


def test_divisor_cycle_complete_on_single_edge():
    dc = divisor_cycle(3, 1)
    F = dc.cycle
    edge = complete(3, 3)
    res = lattice_complete(F, edge)
    assert res.complete
    # oracle: homomorphisms into one edge are the proper 3-colourings
    _, _, cols = colouring_gcd(F.verts, 3, 1)
    vecs = sorted({tuple(list(c.values()).count(i) for i in range(3)) for c in cols})
    assert vecs == sorted(res.columns)
    assert snf_complete(vecs, 3, F.order)


@pytest.mark.parametrize("t", [3, 4, 5, 6, 7])
def test_cycle_lattices_vs_snf(t):
    F = build_cycle(3, 1, t)
    for G in (complete(3, 3), complete(4, 3)):
        cols, done = hom_columns(F, G)
        assert done
        assert lattice_complete(F, G).complete == snf_complete(cols, G.n, F.order)


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=5))
@settings(max_examples=100, deadline=None)
def test_lattice_from_columns_vs_snf(pairs):
    cols = [(a, b, 6 - a - b) for a, b in pairs if a + b <= 6]
    if not cols:
        return
    assert lattice_complete_from_columns(cols, 3, 6) == snf_complete(cols, 3, 6)


def test_lattice_from_columns_examples():
    assert lattice_complete_from_columns([(6, 0, 0), (5, 1, 0), (5, 0, 1)], 3, 6)
    assert not lattice_complete_from_columns([(2, 2, 2)], 3, 6)


def test_hom_columns_uniformity_mismatch():
    with pytest.raises(PreconditionFailed):
        hom_columns(build_cycle(3, 1, 3), complete(4, 2))


# gcd

@pytest.mark.parametrize("t", [3, 4, 5, 6, 7, 8])
def test_cycle_gcd_vs_exhaustive(t):
    F = build_cycle(3, 1, t)
    rep = gcd_of(F)
    chi, g, _ = colouring_gcd(F.verts, 3, 1)
    assert rep.chi == chi and rep.gcd == g


def test_gcd_short_cycle_is_inf():
    assert gcd_of(build_cycle(3, 1, 3)).gcd == INF


def test_gcd_divisor_cycle_is_one():
    dc = divisor_cycle(3, 1)
    assert dc.report.gcd == 1
    assert colouring_gcd(dc.cycle.verts, 3, 1)[1] == 1
    assert dc.colouring.is_proper(dc.cycle.windows)


def test_gcd_hypergraph_input_agrees():
    F = build_cycle(3, 1, 4)
    a = gcd_of(F)
    b = gcd_of(cycle_graph(3, 1, 4))
    assert (a.chi, a.gcd) == (b.chi, b.gcd)


def test_gcd_report_dict():
    assert gcd_of(build_cycle(3, 1, 3)).to_dict()["gcd"] == "inf"


@pytest.mark.parametrize("k,ell", [(3, 1), (5, 3), (5, 2)])
def test_divisor_cycle_shape(k, ell):
    dc = divisor_cycle(k, ell, with_report=(k == 3))
    F = dc.cycle
    m = math.ceil(k / (k - ell))
    assert len(F.windows) == k * k * ell + m
    assert dc.colouring.is_proper(F.windows)


def test_divisor_cycle_rejects_divisible():
    with pytest.raises(PreconditionFailed):
        divisor_cycle(4, 2)
