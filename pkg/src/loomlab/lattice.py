"""F-lattices of cycle homomorphisms, colour-class gcds and the divisor cycle.

The lattice ``L_F(G)`` is the integer span of the indicator vectors of all
homomorphisms ``F -> G``.  It always sits inside ``{b : Σb ≡ 0 mod v(F)}``
and is *complete* when it equals that lattice.  Membership is decided on a
Hermite basis computed with Python integers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .cycwalk import (Colouring, CyclePath, WalkGraph, complete_partite,
                      min_cycle_edges, partite_spanning_path, validate)
from .errors import BudgetExceeded, PreconditionFailed
from .hcore import Hypergraph, complete

INF = math.inf


# ---------------------------------------------------------------------------
# Hermite basis


def hermite_rows(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite normal form of the integer span of ``vectors``.

    Rows are in echelon form with strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into ``[0, pivot)``.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not live:
            col += 1
            continue
        # Euclid on column `col` until a single row keeps a nonzero entry
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                f = r[col] // p[col]
                r = [a - f * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        rows = rest
        col += 1
    # reduce entries above pivots
    piv = [next(j for j, a in enumerate(r) if a) for r in basis]
    for i in range(len(basis)):
        for j in range(i):
            c = piv[i]
            f = basis[j][c] // basis[i][c]
            if f:
                basis[j] = [a - f * b for a, b in zip(basis[j], basis[i])]
    return basis


def in_lattice(rows: list[list[int]], b: Sequence[int]) -> bool:
    r = list(map(int, b))
    for row in rows:
        c = next(j for j, a in enumerate(row) if a)
        if r[c] % row[c]:
            return False
        f = r[c] // row[c]
        if f:
            r = [a - f * x for a, x in zip(r, row)]
    return not any(r)


def lattice_index(rows: list[list[int]], dim: int) -> int | None:
    """Index of the lattice in ``Z^dim``, or ``None`` if it has lower rank."""
    if len(rows) < dim:
        return None
    out = 1
    for row in rows:
        out *= next(a for a in row if a)
    return out


# ---------------------------------------------------------------------------
# Homomorphism columns


def cycle_edges(F: CyclePath) -> int:
    if F.kind != "cycle":
        raise PreconditionFailed("F must be a cycle")
    return F.order // (F.k - F.ell)


def hom_columns(F: CyclePath, G: Hypergraph, budget: int = 2_000_000) -> tuple[list[tuple], bool]:
    """Distinct indicator vectors of ``Hom(F, G)`` for an ℓ-cycle ``F``.

    Returns ``(columns, complete)``; ``complete`` is False on budget exhaustion.
    """
    G = G.uniform_part()
    if G.k != F.k:
        raise PreconditionFailed(f"F is {F.k}-uniform but G is {G.k}-uniform")
    t = cycle_edges(F)
    if not G.edges:
        return [], True
    wg = WalkGraph(G, F.ell)
    zero = (0,) * G.n
    found: set = set()
    used = 0
    for s in wg.states:
        layer = {(s, zero)}
        for _ in range(t):
            nxt = set()
            for state, counts in layer:
                for X, s2 in wg.trans[state]:
                    c = list(counts)
                    for v in X:
                        c[v] += 1
                    nxt.add((s2, tuple(c)))
            used += len(nxt)
            if used > budget:
                return sorted(found), False
            layer = nxt
        found.update(c for s2, c in layer if s2 == s)
    return sorted(found), True


@dataclass
class LatticeBasis:
    vF: int
    columns: list[tuple]
    hnf: list[list[int]]
    verdict: str  # "complete" | "incomplete" | "unknown"
    witness: tuple | None = None  # a vector with Σ ≡ 0 mod vF outside the lattice

    @property
    def complete(self) -> bool:
        return self.verdict == "complete"

    def to_dict(self) -> dict:
        return {"vF": self.vF, "columns": [list(c) for c in self.columns], "hnf": self.hnf,
                "verdict": self.verdict,
                "witness": None if self.witness is None else list(self.witness)}


def generators(n: int, vF: int) -> list[tuple]:
    """``vF·e_1`` and ``e_i - e_1``: they generate ``{b : Σb ≡ 0 mod vF}``."""
    out = [tuple(vF if j == 0 else 0 for j in range(n))]
    for i in range(1, n):
        out.append(tuple(1 if j == i else (-1 if j == 0 else 0) for j in range(n)))
    return out


def lattice_complete(F: CyclePath, G: Hypergraph, budget: int = 2_000_000) -> LatticeBasis:
    cols, done = hom_columns(F, G, budget)
    vF = F.order
    rows = hermite_rows(cols, G.n)
    for g in generators(G.n, vF):
        if not in_lattice(rows, g):
            return LatticeBasis(vF, cols, rows, "incomplete", g)
    # membership is monotone in the column set, so a partial list still proves completeness
    return LatticeBasis(vF, cols, rows, "complete")


def lattice_complete_from_columns(cols: Sequence[Sequence[int]], n: int, vF: int) -> bool:
    rows = hermite_rows(cols, n)
    return all(in_lattice(rows, g) for g in generators(n, vF))


# ---------------------------------------------------------------------------
# Colourings and gcd


@dataclass
class GcdReport:
    chi: int
    D: frozenset
    gcd: float | int  # math.inf when D ⊆ {0}

    def to_dict(self) -> dict:
        return {"chi": self.chi, "D": sorted(self.D),
                "gcd": "inf" if self.gcd == INF else self.gcd}


def _gcd_of_set(D) -> float | int:
    nz = [d for d in D if d]
    return math.gcd(*nz) if nz else INF


def _cycle_differences(k: int, ell: int, t: int, c: int, budget: int) -> frozenset:
    """``{| |φ⁻¹(1)| - |φ⁻¹(2)| |}`` over proper ``c``-colourings of the ℓ-cycle with ``t`` edges.

    A proper colouring of the cycle is the same thing as a closed walk with
    ``t`` steps in the complete ``k``-graph on the colours, so this is the walk
    DP with the class-1 minus class-2 count attached to each state.
    """
    wg = WalkGraph(complete(c, k), ell)
    out = set()
    used = 0
    for s in wg.states:
        layer = {(s, 0)}
        for _ in range(t):
            nxt = set()
            for state, diff in layer:
                for X, s2 in wg.trans[state]:
                    nxt.add((s2, diff + X.count(0) - X.count(1)))
            used += len(nxt)
            if used > budget:
                raise BudgetExceeded(f"gcd DP exceeded {budget} entries")
            layer = nxt
        out.update(abs(d) for s2, d in layer if s2 == s)
    return frozenset(out)


def _exhaustive_differences(F: Hypergraph, c: int, budget: int) -> frozenset | None:
    """Backtracking over proper ``c``-colourings; ``None`` if there is none."""
    n = F.n
    inc = F.incidence
    col = [-1] * n
    out = set()
    nodes = 0

    def ok(v):
        for e in inc[v]:
            seen = set()
            for u in e:
                if col[u] >= 0:
                    if col[u] in seen:
                        return False
                    seen.add(col[u])
        return True

    def rec(v):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"colouring search exceeded {budget} nodes")
        if v == n:
            out.add(abs(col.count(0) - col.count(1)))
            return
        for a in range(c):
            col[v] = a
            if ok(v):
                rec(v + 1)
        col[v] = -1

    rec(0)
    return frozenset(out) if out else None


def gcd_of(F: CyclePath | Hypergraph, budget: int = 5_000_000) -> GcdReport:
    """Chromatic number, difference set ``D`` and ``gcd(F)`` (``inf`` when ``D ⊆ {0}``)."""
    if isinstance(F, CyclePath):
        if F.kind != "cycle":
            raise PreconditionFailed("gcd_of takes a cycle or a hypergraph")
        k, ell, t = F.k, F.ell, cycle_edges(F)
        c = k
        while True:
            D = _cycle_differences(k, ell, t, c, budget)
            if D:
                return GcdReport(c, D, _gcd_of_set(D))
            c += 1
    G = F.uniform_part()
    if not G.edges:
        D = _exhaustive_differences(G, 1, budget)
        return GcdReport(1, D, _gcd_of_set(D))
    c = G.k  # every edge is rainbow
    while True:
        D = _exhaustive_differences(G, c, budget)
        if D is not None:
            return GcdReport(c, D, _gcd_of_set(D))
        c += 1


# ---------------------------------------------------------------------------
# Divisor cycle


@dataclass
class DivisorCycle:
    cycle: CyclePath
    colouring: Colouring  # proper k-colouring, colours 1..k
    report: GcdReport


def divisor_cycle(k: int, ell: int, budget: int = 10_000_000, with_report: bool = True) -> DivisorCycle:
    """The ``k``-partite ℓ-cycle with ``k²ℓ + ⌈k/(k-ℓ)⌉`` edges and ``gcd = 1``.

    A complete ``k``-partite graph with parts ``kℓ(k-ℓ)+1`` gets ``q`` extra
    vertices ``u_j`` in the parts after the first ℓ; a spanning rainbow path
    that ends in the first ℓ parts and starts right after the ``u_j`` closes
    into a Hamilton cycle once the ``u_j`` are appended.
    """
    if not 1 <= ell <= k - 1:
        raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
    if k % (k - ell) == 0:
        raise PreconditionFailed(f"k-ℓ={k - ell} divides k={k}")
    m = math.ceil(k / (k - ell))
    q = m * (k - ell) - k
    big = k * ell * (k - ell) + 1
    sizes = [big] * k
    f1 = [((ell + q + i) % k) * big for i in range(ell)]
    f2 = [(i % k) * big + 1 for i in range(ell)]
    P = partite_spanning_path(sizes, f1, f2, ell, budget)
    n = big * k
    u = [n + j for j in range(q)]
    seq = tuple(P.verts) + tuple(u)
    C = validate(CyclePath(k, ell, "cycle", seq))
    colours = [0] * (n + q)
    for v in range(n):
        colours[v] = v // big + 1
    for j, v in enumerate(u):
        colours[v] = (ell + j) % k + 1
    col = Colouring(tuple(colours))
    if not col.is_proper(C.windows):
        raise AssertionError("divisor cycle colouring is not proper")
    if with_report:
        report = gcd_of(C, budget)
    else:
        sizes_ = col.class_sizes
        D = frozenset(abs(a - b) for a, b in combinations(sizes_, 2))
        report = GcdReport(k, D, _gcd_of_set(D))
    return DivisorCycle(C, col, report)
