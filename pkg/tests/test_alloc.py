import copy
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loomlab.alloc import (BlowupSpec, CoverSpec, Pool, assemble_chain, balancing_matching, cover_problems,
                           find_site, hamilton_path_allocation, lattice_data, matching_plan,
                           path_allocation_problems, perfect_tiling_allocation, splice_cycle,
                           tiling_allocation_problems)
from loomlab.cycwalk import CyclePath
from loomlab.errors import CoverInvalid, ImbalanceTooLarge, ParamsTooSmall, PreconditionFailed
from loomlab.experiments import random_blowup, random_path_ends
from loomlab.framework import planted_cover
from loomlab.hcore import Hypergraph, complete, complete_bounded
from loomlab.lattice import lattice_complete_from_columns

from _oracles import is_ell_cycle, is_ell_path

K5 = complete_bounded(5, 3)


def blowup_edge_ok(window, spec):
    """Oracle: a window is an edge of the blow-up iff its clusters are distinct and form an R-edge."""
    where = {v: x for x, c in enumerate(spec.clusters) for v in c}
    xs = [where[v] for v in window]
    return len(set(xs)) == len(xs) and tuple(sorted(xs)) in spec.R.edges


def check_path(spec, ell, f1, f2, seq):
    k = spec.R.k
    allv = sorted(v for c in spec.clusters for v in c)
    assert sorted(seq) == allv
    assert tuple(seq[:ell]) == tuple(f1) and tuple(seq[-ell:]) == tuple(f2)
    windows = [seq[i:i + k] for i in range(0, len(seq) - k + 1, k - ell)]
    assert all(blowup_edge_ok(w, spec) for w in windows)
    assert is_ell_path(seq, k, ell, [frozenset(w) for w in windows])


def check_tiling(spec, ell, cycles):
    k = spec.R.k
    seen = [v for C in cycles for v in C.verts]
    assert sorted(seen) == sorted(v for c in spec.clusters for v in c)
    for C in cycles:
        m = len(C.verts)
        windows = [tuple(C.verts[(i + j) % m] for j in range(k)) for i in range(0, m, k - ell)]
        assert all(blowup_edge_ok(w, spec) for w in windows)
        assert is_ell_cycle(C.verts, k, ell, windows)


# matching

def test_matching_plan_closed_form():
    plan = matching_plan([3, 3, 3, 3], 3)
    assert len(plan) == 4 and sorted(plan) == [0, 1, 2, 3]


def test_matching_plan_imbalance():
    with pytest.raises(ImbalanceTooLarge):
        matching_plan([10, 1, 1, 0], 3)


@given(st.lists(st.integers(1, 30), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_balancing_matching_property(sizes):
    total = sum(sizes)
    if total % 3 or max(sizes) > total // 3:
        with pytest.raises((ImbalanceTooLarge, PreconditionFailed)):
            matching_plan(sizes, 3)
        return
    clusters, s = [], 0
    for z in sizes:
        clusters.append(list(range(s, s + z)))
        s += z
    M = balancing_matching(clusters, 3)
    used = sorted(v for e in M for v in e)
    assert used == list(range(total))
    where = {v: x for x, c in enumerate(clusters) for v in c}
    assert all(len({where[v] for v in e}) == 3 for e in M)


def test_balancing_matching_accepts_spec():
    spec = BlowupSpec(complete(4, 3), [[0, 1], [2, 3], [4], [5]])
    M = balancing_matching(spec)
    assert sorted(v for e in M for v in e) == list(range(6))


def test_pool_order_and_exhaustion():
    p = Pool([[5, 3, 4]])
    assert [p.take(0), p.take(0), p.take(0)] == [3, 4, 5]
    with pytest.raises(ParamsTooSmall):
        p.take(0)


# lattice data of the reduced graph

def test_lattice_data_complete():
    L = lattice_data(K5, 1)
    assert lattice_complete_from_columns(L.basis, 5, L.vD)
    assert L.vD == 2 * L.t


# tiling allocation

@pytest.mark.parametrize("seed", range(6))
def test_tiling_allocation_random(seed):
    spec = random_blowup(K5, 1, random.Random(seed), m_range=(20, 40))
    res = perfect_tiling_allocation(spec, 1)
    assert not tiling_allocation_problems(spec, 1, res.cycles)
    check_tiling(spec, 1, res.cycles)


def test_tiling_allocation_preconditions():
    spec = random_blowup(K5, 1, random.Random(0), m_range=(20, 20))
    spec.clusters[0].append(10_000)  # odd order
    with pytest.raises(PreconditionFailed):
        perfect_tiling_allocation(spec, 1)
    disconnected = Hypergraph.bounded_graph(6, 3, [(0, 1, 2), (3, 4, 5), (0,), (3,)])
    sizes = [[i * 10 + j for j in range(10)] for i in range(6)]
    with pytest.raises(PreconditionFailed):
        perfect_tiling_allocation(BlowupSpec(disconnected, sizes), 1)


def test_tiling_allocation_rejects_exceptional():
    spec = random_blowup(K5, 1, random.Random(1), exceptional=4)
    with pytest.raises(PreconditionFailed):
        perfect_tiling_allocation(spec, 1)


# path allocation

@pytest.mark.parametrize("seed", range(6))
def test_path_allocation_random(seed):
    rng = random.Random(seed)
    spec = random_blowup(K5, 1, rng, m_range=(20, 40), exceptional=4)
    f1, f2 = random_path_ends(spec, 1, rng)
    res = hamilton_path_allocation(spec, 1, f1, f2)
    assert not path_allocation_problems(spec, 1, f1, f2, res.path)
    check_path(spec, 1, f1, f2, res.path.verts)


def test_path_allocation_without_exceptional():
    rng = random.Random(7)
    spec = random_blowup(K5, 1, rng, m_range=(20, 30))
    if (spec.n - 3) % 2:
        spec.clusters[0].append(spec.n)
    f1, f2 = random_path_ends(spec, 1, rng)
    res = hamilton_path_allocation(spec, 1, f1, f2)
    check_path(spec, 1, f1, f2, res.path.verts)


def test_path_allocation_bad_ends():
    rng = random.Random(3)
    spec = random_blowup(K5, 1, rng, exceptional=4)
    with pytest.raises(PreconditionFailed):
        hamilton_path_allocation(spec, 1, (0,), (0,))
    with pytest.raises(PreconditionFailed):
        hamilton_path_allocation(spec, 1, (spec.clusters[4][0],), (0,))  # the exceptional vertex


# splicing

def test_splice_cycle():
    # clusters: 0 -> {0, 10, 20...}; a 1-path in the blow-up of K(3,3) with clusters by v % 3
    cluster_of = {v: v % 3 for v in range(30)}
    P = CyclePath(3, 1, "path", (0, 1, 2, 3, 4, 5, 6))
    C = CyclePath(3, 1, "cycle", (9, 10, 11, 12, 13, 14))
    pos, rot = find_site(P, C, cluster_of, None)
    Q = splice_cycle(P, rot, pos, cluster_of)
    assert sorted(Q.verts) == sorted(P.verts + C.verts)
    assert Q.verts[0] == 0 and Q.verts[-1] == 6
    windows = [Q.verts[i:i + 3] for i in range(0, len(Q.verts) - 2, 2)]
    assert all(len({cluster_of[v] for v in w}) == 3 for w in windows)
    assert is_ell_path(Q.verts, 3, 1, [frozenset(w) for w in windows])


def test_splice_rejects_mismatch():
    cluster_of = {v: v % 3 for v in range(30)}
    P = CyclePath(3, 1, "path", (0, 1, 2, 3, 4, 5, 6))
    C = CyclePath(3, 1, "cycle", (9, 10, 11, 12, 13, 14))
    with pytest.raises(PreconditionFailed):
        splice_cycle(P, C, 2, cluster_of)


# covers

@pytest.fixture(scope="module")
def small_cover():
    return planted_cover(3, 1, 3, 20, 4, seed=5)


def test_planted_cover_valid(small_cover):
    G, cover = small_cover
    assert cover_problems(cover, G) == []


def test_cover_roundtrip(small_cover):
    _, cover = small_cover
    again = CoverSpec.from_dict(cover.to_dict())
    assert again.to_dict() == cover.to_dict()


@pytest.mark.parametrize("corrupt,label", [
    (lambda c: c.W[0][0].pop(), "(C2)"),
    (lambda c: c.V[0][c.V_exceptional[0]].append(c.V[1][0][0]), "(C1)"),
    (lambda c: c.hit_left[0].pop(next(iter(c.hit_left[0]))), "(C3)"),
])
def test_cover_corruptions_detected(small_cover, corrupt, label):
    G, cover = small_cover
    bad = copy.deepcopy(cover)
    corrupt(bad)
    assert any(label in p for p in cover_problems(bad, G))


def test_cover_blowup_mismatch_detected(small_cover):
    G, cover = small_cover
    e = next(iter(G.edges))
    H = Hypergraph(G.n, G.k, G.edges - {e})
    assert cover_problems(cover, H)
    with pytest.raises(CoverInvalid):
        assemble_chain(H, cover, 1)


@pytest.mark.slow
def test_assemble_chain_planted():
    G, cover = planted_cover(3, 1, 3, 40, 7, seed=11)
    res = assemble_chain(G, cover, 1)
    assert is_ell_cycle(res.cycle.verts, 3, 1, G.edges, n=G.n)
    assert all(len(t) <= 2 * (3 - 1) - 2 for t in res.trimmed)
