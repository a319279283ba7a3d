"""Experiment suites behind ``loomlab experiment``.

Each suite returns ``(rows, summary)``; rows become ``results.csv`` and the
summary goes into ``summary.json``.  Nothing time-dependent is recorded, so
two runs with the same seed produce identical files.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .alloc import (BlowupSpec, hamilton_path_allocation, path_allocation_problems,
                    perfect_tiling_allocation, tiling_allocation_problems)
from .cycwalk import lam
from .framework import brute_hamilton, check_framework, hamcon_check, space_barrier, thresholds
from .hcore import Hypergraph, bounded_closure, complete_bounded, min_degree
from .squash import closed_form, expectation_exact


def random_blowup(R: Hypergraph, ell: int, rng: random.Random, m_range=(30, 60),
                  eta: Fraction = Fraction(1, 10), exceptional: int | None = None) -> BlowupSpec:
    """Clusters of size in ``[(1-η)m, (1+η)m]`` with ``m`` drawn from ``m_range``.

    Sizes are nudged so that the order suits a perfect tiling (no exceptional
    cluster) or a Hamilton path (with one).
    """
    step = R.k - ell
    m = rng.randint(*m_range)
    lo, hi = math.ceil((1 - eta) * m), math.floor((1 + eta) * m)
    sizes = [1 if x == exceptional else rng.randint(lo, hi) for x in range(R.n)]
    target = R.k % step if exceptional is not None else 0
    regular = [x for x in range(R.n) if x != exceptional]
    while sum(sizes) % step != target:
        x = rng.choice(regular)
        if sizes[x] < hi:
            sizes[x] += 1
    clusters, start = [], 0
    for s in sizes:
        clusters.append(list(range(start, start + s)))
        start += s
    return BlowupSpec(R, clusters, exceptional, m, eta)


def random_path_ends(spec: BlowupSpec, ell: int, rng: random.Random) -> tuple[tuple, tuple]:
    """Disjoint ℓ-tuples in distinct regular clusters spanning an edge of ``R``."""
    regular = [x for x in range(spec.R.n) if x != spec.exceptional]
    while True:
        xs = rng.sample(regular, 2 * ell)
        f1 = tuple(rng.choice(spec.clusters[x]) for x in xs[:ell])
        f2 = tuple(rng.choice(spec.clusters[x]) for x in xs[ell:])
        if all(any(set(xs[i * ell:(i + 1) * ell]) <= set(e) for e in spec.R.level(spec.R.k).edges)
               for i in range(2)):
            return f1, f2


# ---------------------------------------------------------------------------
# Suites


def suite_threshold_constants(seed: int, budget: int):
    rows = []
    for k in range(3, 10):
        for ell in range(1, k - 1):
            t = thresholds(k, ell)
            rows.append({"k": k, "l": ell, "applicable": t.applicable, "lambda": t.lam,
                         "delta_codegree": t.delta_codegree, "delta_k_minus_2": t.delta_k_minus_2})
    return rows, {"rows": len(rows), "applicable": sum(r["applicable"] for r in rows)}


def suite_barrier_sweep(seed: int, budget: int, k: int = 3, ell: int = 1):
    rows = []
    agree = True
    for n in range(8, 13, 2):
        bar = math.ceil(lam(k, ell) * n)
        for a in range(1, n - k + 2):
            found = brute_hamilton(space_barrier(k, ell, n, a), ell, budget=budget) is not None
            expected = a >= bar
            agree &= found == expected
            rows.append({"k": k, "l": ell, "n": n, "a": a, "threshold_a": bar,
                         "found": found, "expected": expected})
    return rows, {"rows": len(rows), "all_agree": agree}


def _graphs_on(s: int, k: int):
    ks = list(combinations(range(s), k))
    for bits in range(1 << len(ks)):
        yield Hypergraph.uniform(s, k, (e for i, e in enumerate(ks) if bits >> i & 1))


def suite_framework_smalln(seed: int, budget: int, s: int = 5, k: int = 3, ell: int = 1,
                           min_codeg: int = 2):
    family = [G for G in _graphs_on(s, k) if G.edges and min_degree(G, k - 1).min_deg >= min_codeg]
    verdict = check_framework(family, None, ell)
    rows = []
    hamcon_pass = 0
    for i, G in enumerate(family):
        h = hamcon_check(bounded_closure(G, ell), ell)
        hamcon_pass += h.passed
        rows.append({"index": i, "edges": len(G.edges), "min_codegree": min_degree(G, k - 1).min_deg,
                     "hamcon": h.passed})
    summary = {"members": len(family), "f1": verdict.f1, "f2": verdict.f2, "f3": verdict.f3,
               "twin_extensions": verdict.extensions, "hamcon_passed": hamcon_pass}
    return rows, summary


def _all_uniform(N: int, k: int):
    ks = list(combinations(range(N), k))
    for bits in range(1, 1 << len(ks)):
        yield Hypergraph.uniform(N, k, (e for i, e in enumerate(ks) if bits >> i & 1))


def suite_squash(seed: int, budget: int, q: int = 2, random_per_size: int = 20):
    rng = random.Random(seed)
    rows = []
    agree = True

    def record(H, how):
        nonlocal agree
        ex, cf = expectation_exact(H, q), closed_form(H, q)
        agree &= ex == cf
        rows.append({"qn": H.n, "qk": H.k, "edges": len(H.edges), "how": how,
                     "expectation": ex, "closed_form": cf, "agree": ex == cf})

    for N in (2, 4, 6):
        for K in range(q, N + 1, q):
            for H in _all_uniform(N, K):
                record(H, "exhaustive")
    # qn = 8: the expectation is additive over edges, so single edges settle
    # every H; random H are spot checks of that additivity
    N = 4 * q
    for K in range(q, N, q):
        for e in combinations(range(N), K):
            record(Hypergraph.uniform(N, K, [e]), "single-edge")
        ks = list(combinations(range(N), K))
        for _ in range(random_per_size):
            record(Hypergraph.uniform(N, K, rng.sample(ks, rng.randint(1, len(ks)))), "random")
    return rows, {"rows": len(rows), "all_agree": agree}


def suite_alloc_smoke(seed: int, budget: int, instances: int = 5, k: int = 3, ell: int = 1):
    rng = random.Random(seed)
    R = complete_bounded(5, k)
    rows = []
    ok = True
    for i in range(instances):
        spec = random_blowup(R, ell, rng)
        res = perfect_tiling_allocation(spec, ell)
        valid = not tiling_allocation_problems(spec, ell, res.cycles)
        ok &= valid
        rows.append({"kind": "tiling", "index": i, "n": spec.n, "pieces": len(res.cycles), "valid": valid})
    for i in range(instances):
        spec = random_blowup(R, ell, rng, exceptional=R.n - 1)
        f1, f2 = random_path_ends(spec, ell, rng)
        res = hamilton_path_allocation(spec, ell, f1, f2)
        valid = not path_allocation_problems(spec, ell, f1, f2, res.path)
        ok &= valid
        rows.append({"kind": "path", "index": i, "n": spec.n, "pieces": 1, "valid": valid})
    return rows, {"rows": len(rows), "all_valid": ok}


SUITES = {
    "threshold-constants": suite_threshold_constants,
    "barrier-sweep": suite_barrier_sweep,
    "framework-smalln": suite_framework_smalln,
    "squash-suite": suite_squash,
    "alloc-smoke": suite_alloc_smoke,
}


def run_suite(name: str, seed: int, budget: int):
    return SUITES[name](seed, budget)
