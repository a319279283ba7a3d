"""Fractional ℓ-cycle tilings.

A column is the indicator vector ``1_φ`` of a cycle homomorphism, i.e. the
vertex multiplicities of a closed ℓ-walk.  ``frac_tiling`` decides
``{M ω = 1, ω >= 0}`` exactly by column generation: the restricted master is
solved by the rational simplex in :mod:`loomlab.lp`, and the pricing problem
(find a closed walk whose column has positive value under the Farkas vector) is
a max-weight closed-walk dynamic program on the transition digraph.  When
pricing finds nothing, the Farkas vector certifies infeasibility against every
closed walk of at most ``max_verts`` vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lp
from .cycwalk import WalkGraph, min_cycle_edges, walk_problems
from .errors import BudgetExceeded, PreconditionFailed
from .hcore import Hypergraph


@dataclass(frozen=True)
class IndicatorColumn:
    counts: tuple  # |φ⁻¹(v)| for every vertex v
    t: int  # number of cycle edges
    walk: tuple  # cyclic vertex sequence of one witnessing closed walk

    @property
    def order(self) -> int:
        return sum(self.counts)


@dataclass
class ColumnSet:
    columns: list[IndicatorColumn]
    complete: bool  # False when the budget truncated the enumeration


@dataclass
class FracTiling:
    columns: list[IndicatorColumn]
    weights: list[Fraction]

    def coverage(self, n: int) -> list[Fraction]:
        out = [Fraction(0)] * n
        for c, w in zip(self.columns, self.weights):
            for v, a in enumerate(c.counts):
                if a:
                    out[v] += w * a
        return out

    def to_dict(self) -> dict:
        return {"columns": [list(c.counts) for c in self.columns],
                "walks": [list(c.walk) for c in self.columns],
                "weights": [str(w) for w in self.weights]}


@dataclass
class TilingResult:
    status: str  # "feasible" | "infeasible" | "unknown"
    tiling: FracTiling | None = None
    y: list[Fraction] | None = None  # Farkas certificate
    max_verts: int = 0
    rounds: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_dict(self) -> dict:
        out = {"status": self.status, "max_verts": self.max_verts}
        if self.tiling is not None:
            out["tiling"] = self.tiling.to_dict()
        if self.y is not None:
            out["certificate"] = [str(v) for v in self.y]
        return out


def default_max_verts(G: Hypergraph, ell: int) -> int:
    return G.k ** 2 * G.n ** ell


def _counts(seq: Sequence[int], n: int) -> tuple:
    c = [0] * n
    for v in seq:
        c[v] += 1
    return tuple(c)


def column_from_walk(seq: Sequence[int], n: int, k: int, ell: int) -> IndicatorColumn:
    return IndicatorColumn(_counts(seq, n), len(seq) // (k - ell), tuple(seq))


# ---------------------------------------------------------------------------
# Exhaustive enumeration


def enum_cycle_columns(G: Hypergraph, ell: int, max_verts: int | None = None,
                       budget: int = 2_000_000) -> ColumnSet:
    """All distinct indicator columns of closed ℓ-walks on at most ``max_verts`` vertices.

    Breadth-first over ``(state, count vector)`` from every start state.  If
    more than ``budget`` DP entries would be created the partial list is
    returned with ``complete=False``.
    """
    wg = WalkGraph(G, ell)
    k, n, step = wg.k, G.n, wg.step
    if max_verts is None:
        max_verts = default_max_verts(G, ell)
    T = max_verts // step
    tmin = min_cycle_edges(k, ell)
    found: dict[tuple, IndicatorColumn] = {}
    used = 0
    complete = True
    zero = (0,) * n
    for s in wg.states:
        layer = {(s, zero): ()}
        for t in range(1, T + 1):
            nxt: dict = {}
            for (state, counts), blocks in layer.items():
                for X, s2 in wg.trans[state]:
                    c = list(counts)
                    for v in X:
                        c[v] += 1
                    key = (s2, tuple(c))
                    if key not in nxt:
                        nxt[key] = blocks + (X,)
            used += len(nxt)
            if used > budget:
                complete = False
                break
            for (state, counts), blocks in nxt.items():
                if t >= tmin and state == s and counts not in found:
                    found[counts] = IndicatorColumn(counts, t, WalkGraph.sequence(s, blocks))
            layer = nxt
        if not complete:
            break
    cols = [found[c] for c in sorted(found)]
    return ColumnSet(cols, complete)


# ---------------------------------------------------------------------------
# Pricing


def best_closed_walk(wg: WalkGraph, weights: Sequence[Fraction], max_steps: int):
    """Closed walk with ``tmin <= t <= max_steps`` steps maximising ``Σ w(v)·mult(v) / t``.

    Normalising by ``t`` favours short cycles without changing the sign of
    the optimum.  Returns ``(value, sequence)`` with the unnormalised value, or
    ``None`` when there is no closed walk.
    """
    denom = 1
    for w in weights:
        denom = math.lcm(denom, Fraction(w).denominator)
    iw = [int(Fraction(w) * denom) for w in weights]
    # group transitions by (state, next state), keeping the heaviest block
    arcs: dict[tuple, dict[tuple, tuple[int, tuple]]] = {}
    for s, lst in wg.trans.items():
        best: dict = {}
        for X, s2 in lst:
            val = sum(iw[v] for v in X)
            if s2 not in best or val > best[s2][0]:
                best[s2] = (val, X)
        arcs[s] = best
    tmin = min_cycle_edges(wg.k, wg.ell)
    champion = None
    for s in wg.states:
        layer = {s: 0}
        back = []
        for t in range(1, max_steps + 1):
            nxt: dict = {}
            par: dict = {}
            for u, val in layer.items():
                for u2, (a, X) in arcs[u].items():
                    v2 = val + a
                    if u2 not in nxt or v2 > nxt[u2]:
                        nxt[u2] = v2
                        par[u2] = (u, X)
            back.append(par)
            layer = nxt
            if t >= tmin and s in layer:
                val = layer[s]
                if champion is None or Fraction(val, t) > Fraction(champion[0], champion[2]):
                    champion = (val, s, t, back[:])
    if champion is None:
        return None
    val, s, t, back = champion
    blocks = []
    u = s
    for j in range(t - 1, -1, -1):
        u, X = back[j][u]
        blocks.append(X)
    seq = WalkGraph.sequence(s, blocks[::-1])
    return Fraction(val, denom), seq


# ---------------------------------------------------------------------------
# Feasibility


def frac_tiling(G: Hypergraph, ell: int, max_verts: int | None = None,
                max_rounds: int = 10_000, method: str = "colgen",
                budget: int = 2_000_000) -> TilingResult:
    """Decide whether ``G`` has a perfect fractional ℓ-cycle tiling.

    ``method="colgen"`` prices closed walks of at most ``max_verts`` vertices by
    dynamic programming; ``method="enum"`` builds the full column matrix first
    (exponential, only for tiny graphs) and may answer ``unknown``.
    """
    G = G.uniform_part()
    n, k = G.n, G.k
    if not 1 <= ell <= k - 1:
        raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
    if max_verts is None:
        max_verts = default_max_verts(G, ell)
    ones = [1] * n
    if method == "enum":
        cs = enum_cycle_columns(G, ell, max_verts, budget)
        res = lp.feasibility([c.counts for c in cs.columns], ones)
        if res.feasible:
            return _feasible(cs.columns, res.x, max_verts, 1)
        if not cs.complete:
            return TilingResult("unknown", max_verts=max_verts)
        return TilingResult("infeasible", y=res.y, max_verts=max_verts, rounds=1)
    if method != "colgen":
        raise PreconditionFailed(f"unknown method {method!r}")

    return fractional_cover(G, ell, ones, max_verts, max_rounds)


def fractional_cover(G: Hypergraph, ell: int, rhs: Sequence[int | Fraction],
                     max_verts: int | None = None, max_rounds: int = 10_000) -> TilingResult:
    """Nonnegative combination of closed-walk columns equal to ``rhs`` (column generation)."""
    G = G.uniform_part()
    n, k = G.n, G.k
    if max_verts is None:
        max_verts = default_max_verts(G, ell)
    wg = WalkGraph(G, ell)
    T = max_verts // (k - ell)
    cols: list[IndicatorColumn] = []
    seen: set = set()
    for rounds in range(1, max_rounds + 1):
        res = lp.feasibility([c.counts for c in cols], rhs)
        if res.feasible:
            return _feasible(cols, res.x, max_verts, rounds)
        priced = best_closed_walk(wg, res.y, T)
        if priced is None or priced[0] <= 0:
            return TilingResult("infeasible", y=res.y, max_verts=max_verts, rounds=rounds)
        col = column_from_walk(priced[1], n, k, ell)
        if col.counts in seen:  # cannot happen with a correct Farkas vector
            raise RuntimeError("pricing returned a column already in the master")
        seen.add(col.counts)
        cols.append(col)
    raise BudgetExceeded(f"column generation did not settle in {max_rounds} rounds")


def _feasible(cols, x, max_verts, rounds):
    keep = [(c, w) for c, w in zip(cols, x) if w]
    tiling = FracTiling([c for c, _ in keep], [w for _, w in keep])
    return TilingResult("feasible", tiling=tiling, max_verts=max_verts, rounds=rounds)


def tiling_problems(G: Hypergraph, ell: int, tiling: FracTiling) -> list[str]:
    """Independent check of a perfect fractional tiling."""
    G = G.uniform_part()
    out = []
    for i, (c, w) in enumerate(zip(tiling.columns, tiling.weights)):
        if w < 0:
            out.append(f"column {i} has negative weight")
        probs = walk_problems(c.walk, G, G.k, ell)
        if probs:
            out.append(f"column {i}: {probs[0]}")
        if _counts(c.walk, G.n) != tuple(c.counts):
            out.append(f"column {i}: counts disagree with the walk")
    cov = tiling.coverage(G.n)
    bad = [v for v, a in enumerate(cov) if a != 1]
    if bad:
        out.append(f"vertices {bad[:5]} are not covered exactly once")
    return out


def certificate_problems(G: Hypergraph, ell: int, y: Sequence[Fraction],
                         max_verts: int | None = None) -> list[str]:
    """Re-verify a Farkas vector: ``Σ y > 0`` and no closed walk has positive value."""
    G = G.uniform_part()
    if max_verts is None:
        max_verts = default_max_verts(G, ell)
    out = []
    if sum(y) <= 0:
        out.append("certificate has Σy <= 0")
    wg = WalkGraph(G, ell)
    best = best_closed_walk(wg, y, max_verts // (G.k - ell))
    if best is not None and best[0] > 0:
        out.append(f"closed walk {best[1]} has value {best[0]} > 0")
    return out


# ---------------------------------------------------------------------------
# Bounded tilings


def _states(seq: Sequence[int], k: int, ell: int) -> list[tuple]:
    step = k - ell
    m = len(seq)
    return [tuple(seq[(i * step + j) % m] for j in range(ell)) for i in range(m // step)]


def split_walk(seq: Sequence[int], k: int, ell: int) -> tuple[tuple, tuple] | None:
    """Split a closed walk at a repeated state into two closed walks, or ``None``.

    If the states before steps ``i < j`` agree, steps ``i..j-1`` form one
    closed walk and the remaining steps another; both must keep at least the
    minimum cycle length.
    """
    step = k - ell
    t = len(seq) // step
    tmin = min_cycle_edges(k, ell)
    st = _states(seq, k, ell)
    first: dict = {}
    for j, s in enumerate(st):
        for i in first.get(s, ()):
            if j - i >= tmin and t - (j - i) >= tmin:
                a = tuple(seq[i * step: j * step])
                b = tuple(seq[j * step:]) + tuple(seq[: i * step])
                return a, b
        first.setdefault(s, []).append(j)
    return None


def bound_tiling(tiling: FracTiling, G: Hypergraph, ell: int,
                 max_verts: int | None = None) -> FracTiling:
    """Rewrite a tiling so every column comes from a walk of at most ``max_verts`` vertices."""
    G = G.uniform_part()
    k, n = G.k, G.n
    if max_verts is None:
        max_verts = default_max_verts(G, ell)
    todo = list(zip(tiling.columns, tiling.weights))
    merged: dict[tuple, list] = {}
    while todo:
        c, w = todo.pop()
        if c.order > max_verts:
            parts = split_walk(c.walk, k, ell)
            if parts is not None:
                todo.extend((column_from_walk(p, n, k, ell), w) for p in parts)
                continue
        if c.counts in merged:
            merged[c.counts][1] += w
        else:
            merged[c.counts] = [c, w]
    keys = sorted(merged)
    return FracTiling([merged[key][0] for key in keys], [merged[key][1] for key in keys])


# ---------------------------------------------------------------------------
# Fractional matchings


@dataclass
class MatchingResult:
    feasible: bool
    weights: dict | None = None  # edge -> weight
    y: list[Fraction] | None = None


def frac_matching(P: Hypergraph) -> MatchingResult:
    P = P.uniform_part()
    edges = P.sorted_edges
    cols = [[1 if v in e else 0 for v in range(P.n)] for e in edges]
    res = lp.feasibility(cols, [1] * P.n)
    if res.feasible:
        return MatchingResult(True, {e: w for e, w in zip(edges, res.x) if w})
    return MatchingResult(False, y=res.y)
