import json
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loomlab.hcore import (Hypergraph, HypergraphError, ParseError, blow_up, bounded_closure, complete,
                           complete_bounded, degree_counts, from_dict, from_json, induced, link,
                           min_degree, shadow, union)

from _oracles import min_codegree


@st.composite
def uniform_graphs(draw, max_n=7, ks=(2, 3)):
    k = draw(st.sampled_from(ks))
    n = draw(st.integers(k, max_n))
    all_e = list(combinations(range(n), k))
    chosen = draw(st.lists(st.sampled_from(all_e), unique=True, max_size=len(all_e)))
    return Hypergraph.uniform(n, k, chosen)


def test_edges_are_normalised():
    G = Hypergraph.uniform(4, 3, [(2, 0, 1), (3, 1, 0)])
    assert G.sorted_edges == [(0, 1, 2), (0, 1, 3)]


@pytest.mark.parametrize("n,k,edges", [(3, 3, [(0, 1, 1)]), (3, 2, [(0, 3)]), (4, 3, [(0, 1)])])
def test_bad_edges_rejected(n, k, edges):
    with pytest.raises(HypergraphError):
        Hypergraph.uniform(n, k, edges)


def test_bounded_levels():
    G = complete_bounded(4, 3)
    assert len(G.edges) == 4 + 6 + 4
    assert G.uniform_part() == complete(4, 3)
    assert len(G.level(1).edges) == 4


def test_json_roundtrip():
    G = complete_bounded(5, 3, levels=[1, 3])
    assert from_json(G.to_json()) == G


@pytest.mark.parametrize("text,frag", [
    ('{"n": 3, "k": 2}', "edges"),
    ('{"n": 3, "k": 2, "edges": [[0, 5]]}', "edges[0][1]"),
    ('{"n": 3, "k": 2, "edges": [[0, 1], [1, 0]]}', "duplicate"),
    ('{"n": 3, "k": 2, "edges": [[0, 1, 2]]}', "size"),
    ('[1, 2]', "object"),
    ('{"n": 3,', "line 1"),
])
def test_parse_errors_name_position(text, frag):
    with pytest.raises(ParseError) as exc:
        from_json(text)
    assert frag in str(exc.value)


def test_from_dict_ignores_extra_keys():
    G = from_dict({"n": 3, "k": 3, "edges": [[0, 1, 2]], "report": {"x": 1}})
    assert len(G.edges) == 1


# [DERIVED] hand counts
def test_min_degree_complete():
    rep = min_degree(complete(6, 3), 2)
    assert rep.min_deg == 4 and rep.ratio == 1


def test_min_degree_star():
    G = Hypergraph.uniform(5, 3, [e for e in combinations(range(5), 3) if 0 in e])
    rep = min_degree(G, 2)
    assert rep.min_deg == 1  # {1,2} lies only in {0,1,2}
    assert rep.ratio == Fraction(1, 3)
    assert min_degree(G, 1).min_deg == 3


def test_min_degree_bounded_needs_level():
    with pytest.raises(HypergraphError):
        min_degree(complete_bounded(4, 3), 1)
    assert min_degree(complete_bounded(4, 3), 1, level=3).min_deg == 3


def test_min_degree_d_range():
    with pytest.raises(HypergraphError):
        min_degree(complete(5, 3), 3)


def test_shadow_and_closure():
    G = Hypergraph.uniform(5, 3, [(0, 1, 2)])
    assert shadow(G, 2).sorted_edges == [(0, 1), (0, 2), (1, 2)]
    B = bounded_closure(G, 1)
    assert B.bounded and len(B.edges) == 4


def test_link_keeps_labels():
    L = link(complete(4, 3), [0])
    assert L.n == 4 and L.k == 2 and len(L.edges) == 3 and all(0 not in e for e in L.edges)


def test_induced_relabels():
    G = Hypergraph.uniform(5, 2, [(1, 3), (3, 4), (0, 2)])
    H = induced(G, [1, 3, 4])
    assert H.sorted_edges == [(0, 1), (1, 2)]


def test_blow_up_counts():
    R = Hypergraph.uniform(3, 2, [(0, 1), (1, 2)])
    G, clusters = blow_up(R, [2, 3, 1])
    assert clusters == [[0, 1], [2, 3, 4], [5]]
    assert len(G.edges) == 2 * 3 + 3 * 1


def test_union():
    a = Hypergraph.uniform(4, 2, [(0, 1)])
    b = Hypergraph.uniform(4, 2, [(2, 3), (0, 1)])
    assert len(union(4, 2, [a, b]).edges) == 2


# properties

@given(uniform_graphs())
@settings(max_examples=60, deadline=None)
def test_min_degree_matches_oracle(G):
    for d in range(1, G.k):
        rep = min_degree(G, d)
        assert rep.min_deg == min_codegree(G.n, G.k, G.edges, d)
        assert rep.ratio == Fraction(rep.min_deg, comb(G.n - d, G.k - d))
        assert degree_counts(G, d)[rep.argmin] == rep.min_deg


@given(uniform_graphs())
@settings(max_examples=60, deadline=None)
def test_degree_monotone_under_edge_addition(G):
    full = complete(G.n, G.k)
    for d in range(1, G.k):
        assert min_degree(G, d).min_deg <= min_degree(full, d).min_deg


@given(uniform_graphs())
@settings(max_examples=60, deadline=None)
def test_roundtrip_property(G):
    assert from_json(json.dumps(G.to_dict())) == G


@given(uniform_graphs(ks=(3,)))
@settings(max_examples=40, deadline=None)
def test_degree_handshake(G):
    # Σ_S deg(S) = |E|·C(k, d)
    for d in range(1, G.k):
        assert sum(degree_counts(G, d).values()) == len(G.edges) * comb(G.k, d)
