import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loomlab.errors import PreconditionFailed
from loomlab.hcore import Hypergraph, complete, link
from loomlab.squash import (BlockPartition, closed_form, concentration_experiment,
                            degree_preservation_experiment, expectation_exact, partition_count, partitions,
                            squash, trial_rng)


def squash_oracle(H, blocks):
    """Definition: a k-set of blocks is an edge iff the union of those blocks is an edge."""
    edges = {frozenset(e) for e in H.edges}
    k = H.k // len(blocks[0])
    return {I for I in combinations(range(len(blocks)), k)
            if frozenset(v for i in I for v in blocks[i]) in edges}


@st.composite
def graph_and_partition(draw, q=2):
    N = draw(st.sampled_from([4, 6, 8]))
    K = draw(st.sampled_from([K for K in range(q, N, q)]))
    all_e = list(combinations(range(N), K))
    chosen = draw(st.lists(st.sampled_from(all_e), unique=True, max_size=20))
    perm = draw(st.permutations(list(range(N))))
    return Hypergraph.uniform(N, K, chosen), BlockPartition.from_permutation(perm, q)


# [DERIVED] single-edge instance: C(3,2)/C(6,4) = 3/15
def test_single_edge_expectation():
    H = Hypergraph.uniform(6, 4, [(0, 1, 2, 3)])
    assert expectation_exact(H, 2) == Fraction(1, 5)
    assert closed_form(H, 2) == Fraction(math.comb(3, 2), math.comb(6, 4))


def test_partition_enumeration_count():
    for N, q in [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3)]:
        parts = list(partitions(N, q))
        assert len(parts) == partition_count(N, q)
        assert len({p.blocks for p in parts}) == len(parts)


def test_block_partition_validation():
    with pytest.raises(PreconditionFailed):
        BlockPartition(2, ((0, 1), (1, 2)))
    with pytest.raises(PreconditionFailed):
        BlockPartition.from_permutation([0, 1, 2], 2)


def test_squash_identity_q1():
    H = Hypergraph.uniform(5, 3, [(0, 1, 2), (1, 3, 4)])
    Q = BlockPartition.from_permutation(list(range(5)), 1)
    assert squash(H, Q) == H


def test_squash_rejects_bad_q():
    with pytest.raises(PreconditionFailed):
        squash(Hypergraph.uniform(6, 3, []), BlockPartition.from_permutation(list(range(6)), 2))


@given(graph_and_partition())
@settings(max_examples=100, deadline=None)
def test_squash_matches_definition(data):
    H, Q = data
    S = squash(H, Q)
    assert set(S.edges) == {tuple(sorted(I)) for I in squash_oracle(H, Q.blocks)}
    assert len(S.edges) <= len(H.edges)


@given(st.sampled_from([(4, 2), (6, 2), (6, 4), (8, 4)]), st.permutations(list(range(8))))
@settings(max_examples=30, deadline=None)
def test_squash_complete_is_complete(NK, perm):
    N, K = NK
    perm = [v for v in perm if v < N]
    S = squash(complete(N, K), BlockPartition.from_permutation(perm, 2))
    assert len(S.edges) == math.comb(N // 2, K // 2)


@given(graph_and_partition())
@settings(max_examples=60, deadline=None)
def test_squash_commutes_with_link(data):
    H, Q = data
    n, k = Q.n, H.k // Q.q
    if k < 2:
        return
    S = squash(H, Q)
    lhs = link(S, (0,))
    # squash the link of block 0 over the remaining blocks
    LH = {frozenset(e) for e in link(H, Q.blocks[0]).edges}
    want = {J for J in combinations(range(1, n), k - 1)
            if frozenset(v for j in J for v in Q.blocks[j]) in LH}
    assert set(lhs.edges) == want


@pytest.mark.parametrize("N", [2, 4])
def test_expectation_closed_form_exhaustive(N):
    for K in range(2, N + 1, 2):
        ks = list(combinations(range(N), K))
        for bits in range(1, 1 << len(ks)):
            H = Hypergraph.uniform(N, K, [e for i, e in enumerate(ks) if bits >> i & 1])
            assert expectation_exact(H, 2) == closed_form(H, 2)


def test_expectation_linear_over_edges_qn8():
    rng = random.Random(0)
    ks = list(combinations(range(8), 4))
    single = {e: expectation_exact(Hypergraph.uniform(8, 4, [e]), 2) for e in ks}
    assert len(set(single.values())) == 1  # symmetric
    for _ in range(5):
        E = rng.sample(ks, rng.randint(1, 20))
        assert expectation_exact(Hypergraph.uniform(8, 4, E), 2) == sum(single[e] for e in E)


def test_expectation_cap():
    with pytest.raises(PreconditionFailed):
        expectation_exact(Hypergraph.uniform(14, 2, [(0, 1)]), 2)


def test_trial_rng_deterministic():
    assert trial_rng(5, 3).random() == trial_rng(5, 3).random()
    assert trial_rng(5, 3).random() != trial_rng(5, 4).random()


def test_concentration_reproducible_and_bounded():
    rng = random.Random(1)
    N = 24
    H = Hypergraph.uniform(N, 4, [e for e in combinations(range(N), 4) if rng.random() < 0.3])
    a = concentration_experiment(H, 2, 0.05, 50, seed=9)
    b = concentration_experiment(H, 2, 0.05, 50, seed=9)
    assert a.rows == b.rows
    assert a.expected == closed_form(H, 2)
    assert a.frequency <= 1
    with pytest.raises(PreconditionFailed):
        concentration_experiment(H, 2, 0.05, 0)


def test_degree_preservation_complete():
    rep = degree_preservation_experiment(complete(12, 4), 2, 1, 0.1, 10, seed=0)
    assert rep.rho == 1 and all(r == 1 for r in rep.ratios)


def test_degree_preservation_q1_identity():
    rng = random.Random(2)
    H = Hypergraph.uniform(7, 3, [e for e in combinations(range(7), 3) if rng.random() < 0.7])
    rep = degree_preservation_experiment(H, 1, 1, 0.1, 5, seed=0)
    assert all(r == rep.rho for r in rep.ratios)


def test_degree_preservation_bad_d():
    with pytest.raises(PreconditionFailed):
        degree_preservation_experiment(complete(8, 4), 2, 2, 0.1, 3)
