"""Threshold constants, property graphs, framework checks, extremal constructions and brute-force oracles."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Sequence

from .cycwalk import (CyclePath, adherence, components, is_ell_connected, lam,
                      min_cycle_edges, spans, validate)
from .errors import BudgetExceeded, CapExceeded, PreconditionFailed
from .hcore import (DegreeReport, Hypergraph, bounded_closure, complete_bounded,
                    degree_counts, induced, min_degree)
from .tiling import frac_tiling


# ---------------------------------------------------------------------------
# Thresholds


@dataclass(frozen=True)
class ThresholdTable:
    k: int
    ell: int
    applicable: bool  # False when k-ℓ divides k
    lam: Fraction | None
    delta_codegree: Fraction | None
    delta_k_minus_2: Fraction | None

    def to_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)
        return {"k": self.k, "l": self.ell, "applicable": self.applicable, "lambda": s(self.lam),
                "delta_codegree": s(self.delta_codegree), "delta_k_minus_2": s(self.delta_k_minus_2)}


def thresholds(k: int, ell: int) -> ThresholdTable:
    if not 1 <= ell <= k - 2:
        raise PreconditionFailed(f"need 1 <= ℓ <= k-2, got k={k} ℓ={ell}")
    if k % (k - ell) == 0:
        return ThresholdTable(k, ell, False, None, None, None)
    lm = lam(k, ell)
    d = 1 - (1 - lm) ** 2
    if ell == k - 2 and k % 2 == 1:
        d = max(Fraction(1, 4), d)
    return ThresholdTable(k, ell, True, lm, lm, d)


# ---------------------------------------------------------------------------
# Predicates and property graphs

Predicate = Callable[[Hypergraph], bool]
_REGISTRY: dict[str, Callable[..., Predicate]] = {}


def register_predicate(name: str, factory: Callable[..., Predicate]) -> None:
    """``factory(*args)`` receives the ``:``-separated arguments as strings."""
    _REGISTRY[name] = factory


def _closure(H: Hypergraph, ell: int) -> Hypergraph:
    return H if H.bounded else bounded_closure(H, ell)


def _deg(d, delta):
    d, delta = int(d), Fraction(delta)

    def pred(H):
        U = H.uniform_part()
        if U.n < U.k:
            return False
        return min_degree(U, d).ratio >= delta
    return pred


def _dcon(ell):
    ell = int(ell)
    return lambda H: adherence(_closure(H, ell), ell).dcon


def _dspa(ell):
    ell = int(ell)

    def pred(H):
        A = adherence(_closure(H, ell), ell).graph
        return frac_tiling(A, ell).feasible
    return pred


register_predicate("true", lambda: (lambda H: True))
register_predicate("nonempty", lambda: (lambda H: bool(H.uniform_part().edges)))
register_predicate("deg", _deg)
register_predicate("dcon", _dcon)
register_predicate("dspa", _dspa)
register_predicate("lconn", lambda ell: (lambda H: is_ell_connected(H.uniform_part(), int(ell))))
register_predicate("fractiling", lambda ell: (lambda H: frac_tiling(H, int(ell)).feasible))


def predicate(spec: str | Predicate) -> Predicate:
    """Parse ``name:arg:...``, conjunctions ``A&B`` and ``del:q:<inner>``."""
    if callable(spec):
        return spec
    spec = spec.strip()
    if spec.startswith("del:"):
        _, q, inner = spec.split(":", 2)
        q = int(q)
        inner_p = predicate(inner)
        return lambda H: del_q_closure(H, inner_p, q).passed
    if "&" in spec:
        parts = [predicate(p) for p in spec.split("&")]
        return lambda H: all(p(H) for p in parts)
    name, *args = spec.split(":")
    if name not in _REGISTRY:
        raise PreconditionFailed(f"unknown predicate {name!r}")
    return _REGISTRY[name](*args)


@dataclass
class PropertyGraph:
    graph: Hypergraph
    exact: bool
    evaluated: int  # number of s-sets tested

    def to_dict(self) -> dict:
        return {"graph": self.graph.to_dict(), "exact": self.exact, "evaluated": self.evaluated}


def property_graph(G: Hypergraph, pred, s: int, limit: int = 10**6, samples: int = 2000,
                   seed: int = 0) -> PropertyGraph:
    """``s``-graph of the ``s``-sets ``S`` with ``G[S]`` in the property.

    Exhaustive when ``C(n, s) <= limit``; otherwise only ``samples`` random
    sets are tested and the result is flagged inexact.
    """
    if not 1 <= s <= G.n:
        raise PreconditionFailed(f"s={s} outside 1..{G.n}")
    p = predicate(pred)
    if math.comb(G.n, s) <= limit:
        sets: Iterable = combinations(range(G.n), s)
        exact = True
    else:
        rng = random.Random(seed)
        sets = sorted({tuple(sorted(rng.sample(range(G.n), s))) for _ in range(samples)})
        exact = False
    edges = []
    count = 0
    for S in sets:
        count += 1
        if p(induced(G, S)):
            edges.append(S)
    return PropertyGraph(Hypergraph.uniform(G.n, s, edges), exact, count)


@dataclass
class RobustnessReport:
    degree: DegreeReport | None
    bar: Fraction  # required minimum r-degree
    verdict: str  # pass | fail | estimated-pass | estimated-fail
    interval: tuple | None = None  # 95% interval for the passing fraction when sampled

    def to_dict(self) -> dict:
        out = {"bar": str(self.bar), "verdict": self.verdict}
        if self.degree is not None:
            out.update(r=self.degree.d, min_deg=self.degree.min_deg, ratio=str(self.degree.ratio),
                       argmin=list(self.degree.argmin))
        if self.interval is not None:
            out["interval"] = list(self.interval)
        return out


def robustness_degree(P: PropertyGraph | Hypergraph, r: int, delta: Fraction | None = None) -> RobustnessReport:
    """Minimum ``r``-degree of a property ``s``-graph against ``(1 - 1/s²)·C(n-r, s-r)``.

    With ``delta`` the bar is ``delta·C(n-r, s-r)`` instead.
    """
    exact = True
    evaluated = None
    if isinstance(P, PropertyGraph):
        exact, evaluated, P = P.exact, P.evaluated, P.graph
    n, s = P.n, P.k
    if not 1 <= r < s:
        raise PreconditionFailed(f"need 1 <= r < s, got r={r} s={s}")
    frac = Fraction(1) - Fraction(1, s * s) if delta is None else Fraction(delta)
    bar = frac * math.comb(n - r, s - r)
    if exact:
        rep = min_degree(P, r)
        return RobustnessReport(rep, bar, "pass" if rep.min_deg >= bar else "fail")
    # sampled: estimate the fraction of s-sets in the property (Wilson interval)
    z = 1.96
    ph = len(P.edges) / evaluated
    den = 1 + z * z / evaluated
    mid = (ph + z * z / (2 * evaluated)) / den
    half = z * math.sqrt(ph * (1 - ph) / evaluated + z * z / (4 * evaluated ** 2)) / den
    lo, hi = max(0.0, mid - half), min(1.0, mid + half)
    return RobustnessReport(None, bar, "estimated-pass" if lo >= frac else "estimated-fail", (lo, hi))


@dataclass
class DelResult:
    passed: bool
    witness: tuple | None = None  # removed set X (original labels) where the property fails

    def to_dict(self) -> dict:
        return {"passed": self.passed, "witness": None if self.witness is None else list(self.witness)}


def del_q_closure(G: Hypergraph, pred, q: int) -> DelResult:
    """Whether ``G - X`` has the property for every ``X`` with ``|X| <= q``."""
    if not 0 <= q < G.n:
        raise PreconditionFailed(f"q={q} outside 0..{G.n - 1}")
    p = predicate(pred)
    for size in range(q + 1):
        for X in combinations(range(G.n), size):
            if not p(G.remove_vertices(X)):
                return DelResult(False, X)
    return DelResult(True)


# ---------------------------------------------------------------------------
# Hamilton frameworks


@dataclass
class FrameworkVerdict:
    f1: bool
    f2: bool
    f3: bool
    f1_witness: dict | None = None
    f2_certificate: dict | None = None
    f3_witness: dict | None = None
    members: int = 0
    extensions: int = 0
    restriction: str = "twin extensions"

    @property
    def passed(self) -> bool:
        return self.f1 and self.f2 and self.f3

    def to_dict(self) -> dict:
        return {"f1": self.f1, "f2": self.f2, "f3": self.f3, "passed": self.passed,
                "f1_witness": self.f1_witness, "f2_certificate": self.f2_certificate,
                "f3_witness": self.f3_witness, "members": self.members,
                "extensions": self.extensions, "restriction": self.restriction}


def _lift(H: Hypergraph, keep: Sequence[int], n: int) -> set:
    return {tuple(sorted(keep[v] for v in e)) for e in H.edges}


def twin_extension(G: Hypergraph, v: int) -> Hypergraph:
    """``G`` plus a new vertex ``n`` whose link equals the link of ``v`` (``v`` and ``n`` not together)."""
    n = G.n
    extra = [tuple(sorted((u if u != v else n) for u in e)) for e in G.edges if v in e]
    return Hypergraph(n + 1, G.k, G.edges | frozenset(extra), bounded=G.bounded)


def check_framework(family: Sequence[Hypergraph], selector: Callable[[Hypergraph], Hypergraph] | None,
                    ell: int, member: Callable[[Hypergraph], bool] | None = None) -> FrameworkVerdict:
    """Check (F1)-(F3) for the selector on every listed member.

    (F1): ``F(G)`` is a single spanning ℓ-component.  (F2): ``F(G)`` has a
    perfect fractional ℓ-cycle tiling (the dual vector is returned on failure).
    (F3): for ``H`` on ``s+1`` vertices with ``H-x, H-y`` members,
    ``F(H-x) ∪ F(H-y)`` is ℓ-connected.  The ``H`` tried are the twin
    extensions of the members (a new vertex copying the link of an old one);
    ``member`` decides membership and defaults to the listed edge sets.
    """
    F = selector or (lambda G: G)
    if member is None:
        listed = {(G.n, G.edges) for G in family}
        member = lambda G: (G.n, G.edges) in listed
    v = FrameworkVerdict(True, True, True, members=len(family))
    for G in family:
        FG = F(G).uniform_part()
        if v.f1:
            comps = components(FG, ell)
            if len(comps) != 1 or not spans(comps[0], G.n):
                cov = sorted({x for e in comps[0] for x in e}) if comps else []
                v.f1, v.f1_witness = False, {"graph": G.to_dict(), "components": len(comps),
                                              "first_component_vertices": cov}
        if v.f2:
            res = frac_tiling(FG, ell)
            if not res.feasible:
                v.f2, v.f2_certificate = False, {"graph": G.to_dict(),
                                                 "y": [str(a) for a in (res.y or [])]}
        if not v.f3:
            continue
        for t in range(G.n):
            H = twin_extension(G, t)
            v.extensions += 1
            subs = {}
            for x in range(H.n):
                keep = [u for u in range(H.n) if u != x]
                Hx = induced(H, keep)
                if member(Hx):
                    subs[x] = _lift(F(Hx).uniform_part(), keep, H.n)
            for x, y in combinations(sorted(subs), 2):
                U = Hypergraph(H.n, H.k, frozenset(subs[x] | subs[y]))
                if not is_ell_connected(U, ell):
                    v.f3, v.f3_witness = False, {"H": H.to_dict(), "x": x, "y": y}
                    break
            if not v.f3:
                break
    return v


# ---------------------------------------------------------------------------
# Extremal constructions


def space_barrier(k: int, ell: int, n: int, a: int) -> Hypergraph:
    """All ``k``-sets meeting ``A = {0..a-1}``."""
    if not 1 <= a <= n - k + 1 and a != n:
        raise PreconditionFailed(f"need 1 <= a <= n-k+1, got a={a} n={n} k={k}")
    A = range(a)
    return Hypergraph.uniform(n, k, (e for e in combinations(range(n), k) if e[0] in A))


def barrier_report(k: int, ell: int, n: int, a: int) -> dict:
    """Codegree and the counting bound for the space barrier."""
    G = space_barrier(k, ell, n, a)
    per = math.ceil(k / (k - ell))
    need = Fraction(n, k - ell)
    rep = min_degree(G, k - 1)
    return {"k": k, "l": ell, "n": n, "a": a, "edges": len(G.edges),
            "min_codegree": rep.min_deg, "codegree_ratio": str(rep.ratio),
            "edges_needed": str(need), "edges_coverable": a * per,
            "cycle_possible_by_count": a * per >= need}


# The ℓ = k-2 lower-bound construction (value 1/4) is not reproduced here.
EXTREMAL_CONSTRUCTIONS: dict[str, Callable | None] = {"space_barrier": space_barrier,
                                                      "k_minus_2_quarter": None}


# ---------------------------------------------------------------------------
# Brute-force oracles

BRUTE_CAP = 24
BRUTE_BUDGET = 50_000_000


def brute_hamilton(G: Hypergraph, ell: int, mode: str = "cycle", f1: Sequence[int] | None = None,
                   f2: Sequence[int] | None = None, cap: int = BRUTE_CAP,
                   budget: int = BRUTE_BUDGET, loose_ends: bool = False) -> CyclePath | None:
    """Exhaustive search for a Hamilton ℓ-cycle or Hamilton ``(f1, f2, ℓ)``-path of ``G^{(k)}``.

    Paths must have disjoint first and last edges unless ``loose_ends`` is set.
    """
    H = G.uniform_part()
    n, k = H.n, H.k
    if not 1 <= ell <= k - 1:
        raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
    step = k - ell
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the exhaustive cap {cap}")
    # completions: mask of k-1 window vertices -> mask of vertices closing an edge
    comp: dict[int, int] = {}
    for e in H.edges:
        m = sum(1 << v for v in e)
        for v in e:
            comp[m & ~(1 << v)] = comp.get(m & ~(1 << v), 0) | (1 << v)
    full = (1 << n) - 1
    if mode == "cycle":
        if n % step:
            raise PreconditionFailed(f"n={n} is not divisible by k-ℓ={step}")
        if n // step < min_cycle_edges(k, ell):
            return None
        starts = [{o: 0} for o in range(step)]
        cyclic = True
    elif mode == "path":
        if f1 is None or f2 is None or len(f1) != ell or len(f2) != ell:
            raise PreconditionFailed("path mode needs ℓ-tuples f1 and f2")
        if n < k or (n - k) % step:
            raise PreconditionFailed(f"n={n} is not ≡ k mod {step}")
        if set(f1) & set(f2):
            raise PreconditionFailed("f1 and f2 intersect")
        fixed = {i: v for i, v in enumerate(f1)}
        for i, v in enumerate(f2):
            p = n - ell + i
            if fixed.setdefault(p, v) != v:
                return None
        starts = [fixed]
        cyclic = False
    else:
        raise PreconditionFailed(f"unknown mode {mode!r}")
    # window ends: position p closes the window starting at p-k+1 when that start is ≡ 0 mod step
    closes = [p >= k - 1 and (p - k + 1) % step == 0 for p in range(n)]
    nodes = 0
    seq = [0] * n

    def window_ok(p):
        m = 0
        for i in range(p - k + 1, p):
            m |= 1 << seq[i]
        return bool(comp.get(m, 0) >> seq[p] & 1)

    def rec(p, used, fixed):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"brute_hamilton exceeded {budget} nodes")
        if p == n:
            if cyclic:
                ext = seq + seq[:k]
                for s in range(0, n, step):
                    if s + k > n:
                        w = ext[s:s + k]
                        if len(set(w)) != k or not H.has_mask(sum(1 << v for v in w)):
                            return False
            if not cyclic and not loose_ends and len(set(seq[:k]) | set(seq[-k:])) != 2 * k:
                return False
            return True
        if p in fixed:
            cands = [fixed[p]]
            if used >> fixed[p] & 1:
                return False
        else:
            avail = full & ~used
            for v in fixed.values():
                avail &= ~(1 << v)
            cands = [v for v in range(n) if avail >> v & 1]
        for v in cands:
            seq[p] = v
            if closes[p] and not window_ok(p):
                continue
            if rec(p + 1, used | (1 << v), fixed):
                return True
        return False

    for fixed in starts:
        if rec(0, 0, fixed):
            return validate(CyclePath(k, ell, mode, tuple(seq)), H, loose_ends)
    return None


@dataclass
class HamconResult:
    passed: bool
    witness: dict | None
    checked: int

    def to_dict(self) -> dict:
        return {"passed": self.passed, "witness": self.witness, "checked": self.checked}


def hamcon_check(G: Hypergraph, ell: int, cap: int = BRUTE_CAP, strict: bool = False) -> HamconResult:
    """Hamilton ℓ-connectedness of a bounded graph, by brute force over all endtuple pairs.

    By default a path only needs disjoint endtuples; ``strict`` also demands
    disjoint first and last edges (no path on fewer than ``2k`` vertices).
    """
    if not G.bounded:
        raise PreconditionFailed("hamcon_check needs a bounded graph")
    k, n = G.k, G.n
    step = k - ell
    if (n - k) % step:
        raise PreconditionFailed(f"v(G)={n} is not ≡ k mod {step}")
    low = G.level(ell).sorted_edges
    pairs = [(e, f) for e in low for f in low if not set(e) & set(f)]
    if not pairs:
        return HamconResult(False, {"reason": "no two disjoint ℓ-edges"}, 0)
    checked = 0
    for e, f in pairs:
        for ee in permutations(e):
            for ff in permutations(f):
                checked += 1
                if brute_hamilton(G, ell, "path", ee, ff, cap, loose_ends=not strict) is None:
                    return HamconResult(False, {"f1": list(ee), "f2": list(ff)}, checked)
    return HamconResult(True, None, checked)


@dataclass
class ConnectivityReport:
    connected: bool
    components: int
    hypothesis: bool | None  # ℓ < d and positive minimum d-degree, when d is given
    min_deg: int | None = None

    def to_dict(self) -> dict:
        return {"connected": self.connected, "components": self.components,
                "hypothesis": self.hypothesis, "min_deg": self.min_deg}


def connectivity_check(G: Hypergraph, ell: int, d: int | None = None) -> ConnectivityReport:
    H = G.uniform_part()
    comps = components(H, ell)
    ok = len(comps) == 1 and spans(comps[0], H.n)
    hyp = None
    low = None
    if d is not None:
        low = min(degree_counts(H, d).values(), default=0)
        hyp = ell < d and low > 0
    return ConnectivityReport(ok, len(comps), hyp, low)


# ---------------------------------------------------------------------------
# Planted covers


def planted_cover(k: int, ell: int, b: int, m1: int, m2: int, s1: int = 5,
                  eta: Fraction = Fraction(1, 10), seed: int = 0):
    """A ``b``-cycle of complete blow-ups with hitting families, and the cover describing it.

    Family ``V^i`` has ``s1-1`` regular clusters of size in ``(1±η)m1`` plus a
    singleton; ``W^{i,i+1}`` has one cluster of size ``m2`` inside every regular
    cluster of ``V^i`` and of ``V^{i+1}``.  ``G`` is the union of the ``k``-levels
    of all the blow-ups; vertex labels are shuffled.
    """
    from .alloc import CoverSpec
    if b < 3:
        raise PreconditionFailed("need b >= 3")
    r = s1 - 1
    lo, hi = math.ceil((1 - eta) * m1), math.floor((1 + eta) * m1)
    if 2 * m2 > lo:
        raise PreconditionFailed(f"two hitting clusters of size {m2} do not fit in {lo}")
    rng = random.Random(seed)
    step = k - ell
    sizes = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(b)]
    n = sum(map(sum, sizes)) + b
    while n % step:
        i, y = rng.randrange(b), rng.randrange(r)
        if sizes[i][y] < hi:
            sizes[i][y] += 1
            n += 1
    labels = list(range(n))
    rng.shuffle(labels)
    it = iter(labels)
    V, ex = [], []
    for i in range(b):
        fam = [sorted(next(it) for _ in range(sizes[i][y])) for y in range(r)]
        x = rng.randrange(s1)
        fam.insert(x, [next(it)])
        V.append(fam)
        ex.append(x)
    W, hl, hr = [], [], []
    for i in range(b):
        j = (i + 1) % b
        regs_i = [y for y in range(s1) if y != ex[i]]
        regs_j = [y for y in range(s1) if y != ex[j]]
        fam, left, right = [], {}, {}
        for y in regs_i:  # first m2 vertices of V^i clusters
            left[y] = len(fam)
            fam.append(V[i][y][:m2])
        for y in regs_j:  # last m2 vertices of V^{i+1} clusters
            right[y] = len(fam)
            fam.append(V[j][y][-m2:])
        W.append(fam)
        hl.append(left)
        hr.append(right)
    RV = [complete_bounded(s1, k) for _ in range(b)]
    RW = [complete_bounded(2 * r, k) for _ in range(b)]
    edges: set = set()
    for fam, R in list(zip(V, RV)) + list(zip(W, RW)):
        for e in R.level(k).sorted_edges:
            for t in product(*(fam[x] for x in e)):
                edges.add(tuple(sorted(t)))
    G = Hypergraph(n, k, frozenset(edges))
    cover = CoverSpec(k, V, ex, W, hl, hr, RV, RW, m1, m2, Fraction(eta))
    return G, cover
