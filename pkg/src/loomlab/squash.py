"""Squashed hypergraphs over block partitions, exact expectations and Monte Carlo experiments."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .errors import PreconditionFailed
from .hcore import Hypergraph, min_degree

EXHAUSTIVE_CAP = 12


@dataclass(frozen=True)
class BlockPartition:
    q: int
    blocks: tuple  # tuple of sorted q-tuples

    def __post_init__(self):
        if self.q < 1:
            raise PreconditionFailed(f"block size {self.q} < 1")
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        seen = [v for b in blocks for v in b]
        if any(len(b) != self.q for b in blocks):
            raise PreconditionFailed(f"every block must have {self.q} vertices")
        if sorted(seen) != list(range(len(seen))):
            raise PreconditionFailed("blocks must partition 0..qn-1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_permutation(cls, perm: Sequence[int], q: int) -> "BlockPartition":
        """Consecutive ``q``-blocks of a permutation."""
        if len(perm) % q:
            raise PreconditionFailed(f"{len(perm)} vertices do not split into blocks of {q}")
        return cls(q, tuple(tuple(perm[i:i + q]) for i in range(0, len(perm), q)))

    @classmethod
    def random(cls, N: int, q: int, rng: random.Random) -> "BlockPartition":
        perm = list(range(N))
        rng.shuffle(perm)
        return cls.from_permutation(perm, q)

    def to_dict(self) -> dict:
        return {"q": self.q, "blocks": [list(b) for b in self.blocks]}


def squash(H: Hypergraph, Q: BlockPartition) -> Hypergraph:
    """``k``-graph on the blocks: ``I`` is an edge iff the union of its blocks is an edge of ``H``."""
    H = H.uniform_part()
    q = Q.q
    if H.n != q * Q.n:
        raise PreconditionFailed(f"partition covers {q * Q.n} vertices, graph has {H.n}")
    if H.k % q:
        raise PreconditionFailed(f"uniformity {H.k} is not divisible by q={q}")
    k = H.k // q
    if math.comb(Q.n, k) < len(H.edges):
        bm = [sum(1 << v for v in b) for b in Q.blocks]
        masks = H.masks
        edges = [I for I in combinations(range(Q.n), k) if sum(bm[i] for i in I) in masks]
        return Hypergraph.uniform(Q.n, k, edges)
    where = {v: i for i, b in enumerate(Q.blocks) for v in b}
    edges = []
    for e in H.edges:
        touched = {where[v] for v in e}
        if len(touched) == k:  # k blocks with qk vertices: each block lies inside e
            edges.append(tuple(touched))
    return Hypergraph.uniform(Q.n, k, edges)


def partitions(N: int, q: int) -> Iterator[BlockPartition]:
    """All partitions of ``0..N-1`` into ``q``-blocks (smallest free vertex opens a block)."""
    if N % q:
        raise PreconditionFailed(f"{N} is not divisible by {q}")

    def rec(free):
        if not free:
            yield []
            return
        first, rest = free[0], free[1:]
        for mates in combinations(rest, q - 1):
            left = [v for v in rest if v not in mates]
            for tail in rec(left):
                yield [(first,) + mates] + tail

    for blocks in rec(list(range(N))):
        yield BlockPartition(q, tuple(blocks))


def partition_count(N: int, q: int) -> int:
    n = N // q
    return math.factorial(N) // (math.factorial(q) ** n * math.factorial(n))


def closed_form(H: Hypergraph, q: int) -> Fraction:
    """``C(n, k)·|H| / C(qn, qk)``."""
    H = H.uniform_part()
    n, k = H.n // q, H.k // q
    return Fraction(math.comb(n, k) * len(H.edges), math.comb(H.n, H.k))


def expectation_exact(H: Hypergraph, q: int, cap: int = EXHAUSTIVE_CAP) -> Fraction:
    """Average of ``|H_Q|`` over all ``q``-block partitions (exhaustive)."""
    H = H.uniform_part()
    if H.n > cap:
        raise PreconditionFailed(f"qn={H.n} exceeds the exhaustive cap {cap}")
    if H.n % q or H.k % q:
        raise PreconditionFailed(f"q={q} must divide both v(H)={H.n} and k={H.k}")
    total = 0
    count = 0
    for Q in partitions(H.n, q):
        total += len(squash(H, Q).edges)
        count += 1
    if count != partition_count(H.n, q):
        raise AssertionError("partition enumeration is inconsistent with the count formula")
    return Fraction(total, count)


def trial_rng(seed: int, index: int) -> random.Random:
    """Independent deterministic stream per ``(seed, trial index)``."""
    return random.Random(f"{seed}:{index}")


@dataclass
class ConcentrationReport:
    n: int
    k: int
    q: int
    eps: float
    trials: int
    violations: int
    expected: Fraction  # C(n,k)|H|/C(qn,qk)
    threshold: float  # expected - eps·n^k
    bound: float  # 2 exp(-eps² n / (16 q))
    rows: list  # (trial, |H_Q|)

    @property
    def frequency(self) -> float:
        return self.violations / self.trials

    @property
    def consistent(self) -> bool:
        return self.frequency <= self.bound

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "q": self.q, "eps": self.eps, "trials": self.trials,
                "violations": self.violations, "frequency (float)": self.frequency,
                "expected": str(self.expected), "threshold (float)": self.threshold,
                "bound (float)": self.bound, "consistent": self.consistent}


def concentration_experiment(H: Hypergraph, q: int, eps: float, trials: int, seed: int = 0) -> ConcentrationReport:
    """Fraction of random partitions with ``|H_Q|`` below the expectation minus ``eps·n^k``."""
    if trials < 1:
        raise PreconditionFailed("trials must be at least 1")
    H = H.uniform_part()
    if H.n % q or H.k % q:
        raise PreconditionFailed(f"q={q} must divide both v(H)={H.n} and k={H.k}")
    n, k = H.n // q, H.k // q
    expected = closed_form(H, q)
    threshold = float(expected) - eps * n ** k
    rows = []
    bad = 0
    for i in range(trials):
        Q = BlockPartition.random(H.n, q, trial_rng(seed, i))
        m = len(squash(H, Q).edges)
        rows.append((i, m))
        bad += m < threshold
    bound = 2 * math.exp(-eps * eps * n / (16 * q))
    return ConcentrationReport(n, k, q, eps, trials, bad, expected, threshold, bound, rows)


@dataclass
class DegreeReport:
    d: int
    rho: Fraction  # δ_{qd}(H) as a ratio
    ratios: list  # min d-degree ratio of each squash
    eps: float

    @property
    def within(self) -> float:
        """Fraction of trials whose ratio is at least ``rho - eps``."""
        return sum(r >= self.rho - Fraction(self.eps) for r in self.ratios) / len(self.ratios)

    def to_dict(self) -> dict:
        drops = [float(self.rho - r) for r in self.ratios]
        return {"d": self.d, "rho": str(self.rho), "ratios": [str(r) for r in self.ratios],
                "max_drop (float)": max(drops), "mean_drop (float)": sum(drops) / len(drops),
                "within_eps (float)": self.within}


def degree_preservation_experiment(H: Hypergraph, q: int, d: int, eps: float, trials: int,
                                   seed: int = 0) -> DegreeReport:
    """Minimum ``d``-degree ratio of random squashes against ``δ_{qd}(H)``."""
    if trials < 1:
        raise PreconditionFailed("trials must be at least 1")
    H = H.uniform_part()
    if H.n % q or H.k % q:
        raise PreconditionFailed(f"q={q} must divide both v(H)={H.n} and k={H.k}")
    k = H.k // q
    if not 1 <= d < k:
        raise PreconditionFailed(f"d={d} outside 1..{k - 1}")
    rho = min_degree(H, q * d).ratio
    ratios = []
    for i in range(trials):
        Q = BlockPartition.random(H.n, q, trial_rng(seed, i))
        ratios.append(min_degree(squash(H, Q), d).ratio)
    return DegreeReport(d, rho, ratios, eps)
