"""Hypergraph representation and elementary operations.

Vertices are the integers ``0..n-1``.  Edges are stored as sorted tuples.
A graph is either ``k``-uniform or ``k``-bounded (edges of sizes ``1..k``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .errors import PreconditionFailed


class HypergraphError(PreconditionFailed):
    """Raised for malformed graphs or invalid operation arguments."""


class ParseError(HypergraphError):
    """Raised by the JSON reader; the message names the offending position."""


def _norm_edge(e: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(e))


@dataclass(frozen=True)
class Hypergraph:
    n: int
    k: int
    edges: frozenset = field(default_factory=frozenset)
    bounded: bool = False

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise HypergraphError(f"bad parameters n={self.n} k={self.k}")
        edges = frozenset(_norm_edge(e) for e in self.edges)
        for e in edges:
            if len(set(e)) != len(e):
                raise HypergraphError(f"edge {e} repeats a vertex")
            if e and (e[0] < 0 or e[-1] >= self.n):
                raise HypergraphError(f"edge {e} leaves 0..{self.n - 1}")
            if self.bounded:
                if not 1 <= len(e) <= self.k:
                    raise HypergraphError(f"edge {e} has size outside 1..{self.k}")
            elif len(e) != self.k:
                raise HypergraphError(f"edge {e} is not a {self.k}-set")
        object.__setattr__(self, "edges", edges)

    # -- constructors -----------------------------------------------------

    @classmethod
    def uniform(cls, n: int, k: int, edges: Iterable[Iterable[int]] = ()) -> "Hypergraph":
        return cls(n, k, frozenset(_norm_edge(e) for e in edges))

    @classmethod
    def bounded_graph(cls, n: int, k: int, edges: Iterable[Iterable[int]] = ()) -> "Hypergraph":
        return cls(n, k, frozenset(_norm_edge(e) for e in edges), bounded=True)

    # -- basic accessors --------------------------------------------------

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return _norm_edge(e) in self.edges

    @cached_property
    def sorted_edges(self) -> list[tuple[int, ...]]:
        return sorted(self.edges)

    @cached_property
    def masks(self) -> frozenset:
        # Bitmask per edge; used by the search kernels for O(1) containment.
        return frozenset(sum(1 << v for v in e) for e in self.edges)

    @cached_property
    def incidence(self) -> dict[int, list[tuple[int, ...]]]:
        inc: dict[int, list[tuple[int, ...]]] = {v: [] for v in range(self.n)}
        for e in self.sorted_edges:
            for v in e:
                inc[v].append(e)
        return inc

    def has_edge(self, e: Iterable[int]) -> bool:
        return _norm_edge(e) in self.edges

    def has_mask(self, mask: int) -> bool:
        return mask in self.masks

    def level(self, i: int) -> "Hypergraph":
        """The ``i``-uniform level of a bounded graph (as a uniform graph)."""
        if not self.bounded:
            if i != self.k:
                raise HypergraphError(f"uniform {self.k}-graph has no level {i}")
            return self
        return Hypergraph(self.n, i, frozenset(e for e in self.edges if len(e) == i))

    def uniform_part(self) -> "Hypergraph":
        return self.level(self.k)

    def non_isolated(self) -> set[int]:
        return {v for e in self.edges for v in e}

    def remove_vertices(self, X: Iterable[int]) -> "Hypergraph":
        """``G - X`` relabelled onto ``0..n-|X|-1`` (order preserved)."""
        X = set(X)
        keep = [v for v in range(self.n) if v not in X]
        return induced(self, keep)

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "bounded": self.bounded,
                "edges": [list(e) for e in self.sorted_edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def from_dict(data: dict) -> Hypergraph:
    for key in ("n", "k", "edges"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    n, k = data["n"], data["k"]
    bounded = bool(data.get("bounded", False))
    if not isinstance(n, int) or not isinstance(k, int) or n < 0 or k < 1:
        raise ParseError(f"bad header n={n!r} k={k!r}")
    seen: dict[tuple[int, ...], int] = {}
    for i, raw in enumerate(data["edges"]):
        if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
            raise ParseError(f"edges[{i}]: not a list of integers")
        for j, v in enumerate(raw):
            if not 0 <= v < n:
                raise ParseError(f"edges[{i}][{j}]: vertex {v} out of range 0..{n - 1}")
        if len(set(raw)) != len(raw):
            raise ParseError(f"edges[{i}]: repeated vertex in {raw}")
        if bounded:
            if not 1 <= len(raw) <= k:
                raise ParseError(f"edges[{i}]: size {len(raw)} outside 1..{k}")
        elif len(raw) != k:
            raise ParseError(f"edges[{i}]: size {len(raw)} != k={k}")
        e = _norm_edge(raw)
        if e in seen:
            raise ParseError(f"edges[{i}]: duplicate of edges[{seen[e]}]")
        seen[e] = i
    return Hypergraph(n, k, frozenset(seen), bounded=bounded)


def from_json(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    return from_dict(data)


# -- standard graphs ------------------------------------------------------

def complete(n: int, k: int) -> Hypergraph:
    return Hypergraph.uniform(n, k, combinations(range(n), k))


def complete_bounded(n: int, k: int, levels: Sequence[int] | None = None) -> Hypergraph:
    """Complete ``[k]``-graph on ``n`` vertices with the given levels (default ``1..k``)."""
    levels = range(1, k + 1) if levels is None else levels
    edges = [e for i in levels for e in combinations(range(n), i)]
    return Hypergraph.bounded_graph(n, k, edges)


def bounded_closure(G: Hypergraph, ell: int) -> Hypergraph:
    """``G ∪ ∂_ℓ(G)`` as a ``[k]``-graph."""
    base = G.uniform_part()
    edges = set(base.edges) | set(shadow(base, ell).edges)
    return Hypergraph.bounded_graph(G.n, G.k, edges)


# -- degrees --------------------------------------------------------------

@dataclass(frozen=True)
class DegreeReport:
    d: int
    min_deg: int
    ratio: Fraction
    argmin: tuple[int, ...]


def degree_counts(G: Hypergraph, d: int) -> dict[tuple[int, ...], int]:
    counts = {S: 0 for S in combinations(range(G.n), d)}
    for e in G.edges:
        for S in combinations(e, d):
            counts[S] += 1
    return counts


def min_degree(G: Hypergraph, d: int, level: int | None = None) -> DegreeReport:
    """Minimum ``d``-degree of a uniform graph (or of one level of a bounded graph)."""
    if G.bounded:
        if level is None:
            raise HypergraphError("bounded graph: select a uniform level first")
        G = G.level(level)
    k = G.k
    if not 1 <= d <= k - 1:
        raise HypergraphError(f"d={d} outside 1..{k - 1}")
    if G.n < k:
        raise HypergraphError(f"need n >= k, got n={G.n} k={k}")
    counts = degree_counts(G, d)
    argmin = min(counts, key=lambda S: (counts[S], S))
    low = counts[argmin]
    return DegreeReport(d, low, Fraction(low, comb(G.n - d, k - d)), argmin)


# -- derived graphs -------------------------------------------------------

def shadow(G: Hypergraph, ell: int) -> Hypergraph:
    base = G.uniform_part()
    if not 1 <= ell < base.k:
        raise HypergraphError(f"shadow level {ell} must lie in 1..{base.k - 1}")
    return Hypergraph.uniform(G.n, ell, {S for e in base.edges for S in combinations(e, ell)})


def link(G: Hypergraph, X: Iterable[int]) -> Hypergraph:
    """Link graph of ``X``: edges ``Y ⊆ V∖X`` with ``X ∪ Y ∈ G``.

    Vertices keep their labels; members of ``X`` are isolated in the result.
    """
    X = frozenset(X)
    if G.bounded:
        G = G.uniform_part()
    if len(X) >= G.k:
        raise HypergraphError(f"|X|={len(X)} must be < k={G.k}")
    edges = [tuple(v for v in e if v not in X) for e in G.edges if X.issubset(e)]
    return Hypergraph.uniform(G.n, G.k - len(X), edges)


def induced(G: Hypergraph, S: Iterable[int]) -> Hypergraph:
    """``G[S]`` relabelled so that the ``i``-th smallest member of ``S`` becomes ``i``."""
    S = sorted(set(S))
    for v in S:
        if not 0 <= v < G.n:
            raise HypergraphError(f"vertex {v} not in graph")
    pos = {v: i for i, v in enumerate(S)}
    edges = [tuple(pos[v] for v in e) for e in G.edges if all(v in pos for v in e)]
    return Hypergraph(len(S), G.k, frozenset(edges), bounded=G.bounded)


def blow_up(R: Hypergraph, sizes: Sequence[int]) -> tuple[Hypergraph, list[list[int]]]:
    """Complete blow-up ``R(𝒱)``; clusters are consecutive vertex ranges."""
    if len(sizes) != R.n:
        raise HypergraphError(f"need {R.n} cluster sizes, got {len(sizes)}")
    if any(s <= 0 for s in sizes):
        raise HypergraphError("cluster sizes must be positive")
    clusters, start = [], 0
    for s in sizes:
        clusters.append(list(range(start, start + s)))
        start += s
    edges = [t for e in R.edges for t in product(*(clusters[x] for x in e))]
    return Hypergraph(start, R.k, frozenset(_norm_edge(t) for t in edges), bounded=R.bounded), clusters


def union(n: int, k: int, graphs: Iterable[Hypergraph], bounded: bool = False) -> Hypergraph:
    edges: set = set()
    for H in graphs:
        edges |= H.edges
    return Hypergraph(n, k, frozenset(edges), bounded=bounded)
