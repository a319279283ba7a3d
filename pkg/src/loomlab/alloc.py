"""Allocation of ℓ-cycle tilings and Hamilton ℓ-paths inside blow-ups, and chain assembly.

Everything here works on a reduced ``[k]``-graph ``R`` whose vertices index
clusters of host vertices.  A vertex sequence is valid in the blow-up
``R(𝒱)`` when every window meets ``k`` distinct clusters whose indices form a
``k``-edge of ``R``; all outputs are checked that way before they are returned.

Fresh vertices are always taken lowest-index first from their cluster.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cycwalk import (CyclePath, WalkGraph, adherence, cyclepath_problems,
                      min_cycle_edges, path_through_vertex, validate, windows)
from .errors import (CoverInvalid, ImbalanceTooLarge, NotFound, ParamsTooSmall,
                     PreconditionFailed)
from .hcore import Hypergraph, induced
from .lattice import hermite_rows, in_lattice, generators
from .tiling import fractional_cover, frac_tiling


# ---------------------------------------------------------------------------
# Blow-up specification


class BlowupHost:
    """Edge oracle of ``R(𝒱)`` without materialising the blow-up."""

    def __init__(self, R: Hypergraph, clusters: Sequence[Sequence[int]]):
        self.R = R
        self.k = R.k
        self.cluster_of = {v: x for x, c in enumerate(clusters) for v in c}
        self.n = len(self.cluster_of)

    def pattern(self, e) -> tuple:
        return tuple(self.cluster_of[v] for v in e)

    def has_edge(self, e) -> bool:
        if any(v not in self.cluster_of for v in e):
            return False
        p = self.pattern(e)
        return len(set(p)) == len(p) and self.R.has_edge(p)


@dataclass
class BlowupSpec:
    R: Hypergraph
    clusters: list[list[int]]
    exceptional: int | None = None
    m: int | None = None
    eta: Fraction | None = None

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.clusters)

    def host(self) -> BlowupHost:
        return BlowupHost(self.R, self.clusters)

    def problems(self) -> list[str]:
        out = []
        if len(self.clusters) != self.R.n:
            out.append(f"{len(self.clusters)} clusters for {self.R.n} reduced vertices")
        seen: set = set()
        for x, c in enumerate(self.clusters):
            if not c:
                out.append(f"cluster {x} is empty")
            if seen & set(c):
                out.append(f"cluster {x} overlaps an earlier cluster")
            seen |= set(c)
        if self.exceptional is not None and len(self.clusters[self.exceptional]) != 1:
            out.append("exceptional cluster is not a singleton")
        if self.m is not None and self.eta is not None:
            lo, hi = (1 - self.eta) * self.m, (1 + self.eta) * self.m
            for x, c in enumerate(self.clusters):
                if x != self.exceptional and not lo <= len(c) <= hi:
                    out.append(f"cluster {x} has {len(c)} vertices, outside ({lo}, {hi})")
        return out

    def to_dict(self) -> dict:
        return {"R": self.R.to_dict(), "clusters": self.clusters, "exceptional": self.exceptional,
                "m": self.m, "eta": None if self.eta is None else str(self.eta)}


class Pool:
    """Free vertices per cluster; hands out the lowest index first."""

    def __init__(self, clusters: Sequence[Sequence[int]]):
        self.heaps = [sorted(c) for c in clusters]

    def size(self, x: int) -> int:
        return len(self.heaps[x])

    def sizes(self) -> list[int]:
        return [len(h) for h in self.heaps]

    def take(self, x: int) -> int:
        if not self.heaps[x]:
            raise ParamsTooSmall(f"cluster {x} ran out of vertices")
        return heapq.heappop(self.heaps[x])

    def remove(self, v: int, x: int) -> None:
        self.heaps[x].remove(v)
        heapq.heapify(self.heaps[x])

    def give(self, v: int, x: int) -> None:
        heapq.heappush(self.heaps[x], v)

    def lift(self, pattern: Sequence[int]) -> tuple:
        return tuple(self.take(x) for x in pattern)


def blowup_problems(P: CyclePath, host: BlowupHost) -> list[str]:
    return cyclepath_problems(P, host)


# ---------------------------------------------------------------------------
# Balancing matching


def matching_plan(sizes: Sequence[int], k: int) -> list[int]:
    """For the blow-up of the complete ``k``-graph on ``k+1`` clusters: the cluster
    missed by each edge of a perfect matching.

    Cluster ``x`` is missed by ``m_x = total/k - a_x`` edges, which covers
    every cluster exactly; it exists iff no cluster exceeds ``total/k``.
    """
    if len(sizes) != k + 1:
        raise PreconditionFailed(f"need {k + 1} clusters, got {len(sizes)}")
    total = sum(sizes)
    if total % k:
        raise PreconditionFailed(f"{total} vertices is not divisible by k={k}")
    m = [total // k - a for a in sizes]
    if min(m) < 0:
        x = m.index(min(m))
        raise ImbalanceTooLarge(f"cluster {x} has {sizes[x]} > {total // k} vertices")
    return [x for x in range(k + 1) for _ in range(m[x])]


def balancing_matching(clusters, k: int | None = None) -> list[tuple]:
    """Perfect matching of the blow-up of the complete ``k``-graph on ``k+1`` clusters.

    ``clusters`` is a list of vertex lists or a :class:`BlowupSpec`.
    """
    if isinstance(clusters, BlowupSpec):
        k = clusters.R.k if k is None else k
        clusters = clusters.clusters
    if k is None:
        raise PreconditionFailed("uniformity k is required")
    plan = matching_plan([len(c) for c in clusters], k)
    pool = Pool(clusters)
    return [tuple(sorted(pool.take(x) for x in range(k + 1) if x != miss)) for miss in plan]


# ---------------------------------------------------------------------------
# Reduced-graph data shared by the allocators (cached per reduced graph)


def _key(R: Hypergraph):
    return (R.n, R.k, R.bounded, R.edges)


@lru_cache(maxsize=256)
def _adh(key, ell) -> tuple[Hypergraph, bool]:
    R = Hypergraph(key[0], key[1], key[3], bounded=key[2])
    if R.bounded:
        a = adherence(R, ell)
        return a.graph, a.dcon
    from .cycwalk import is_ell_connected
    return R, is_ell_connected(R, ell)


def adh_of(R: Hypergraph, ell: int) -> tuple[Hypergraph, bool]:
    return _adh(_key(R), ell)


@lru_cache(maxsize=256)
def _spa(key, ell) -> object:
    A, _ = _adh(key, ell)
    return frac_tiling(A, ell)


def in_dspa(R: Hypergraph, ell: int) -> bool:
    return _spa(_key(R), ell).feasible


def in_dcon(R: Hypergraph, ell: int) -> bool:
    return adh_of(R, ell)[1]


def closed_walks_exact(A: Hypergraph, ell: int, t: int, budget: int = 2_000_000) -> dict:
    """Indicator vector -> one witness sequence, over closed walks of exactly ``t`` steps."""
    wg = WalkGraph(A, ell)
    zero = (0,) * A.n
    found: dict = {}
    used = 0
    for s in wg.states:
        layer = {(s, zero): ()}
        for _ in range(t):
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
                raise ParamsTooSmall(f"closed-walk enumeration for t={t} exceeded {budget} entries")
            layer = nxt
        for (state, counts), blocks in layer.items():
            if state == s and counts not in found:
                found[counts] = WalkGraph.sequence(s, blocks)
    return found


@dataclass
class LatticeData:
    t: int  # edges of D
    vD: int
    columns: dict  # indicator vector -> witness walk
    basis: list  # indicator vectors generating the complete lattice
    stock_t: int
    stock: dict  # indicator vector -> witness, closed walks with stock_t steps


@lru_cache(maxsize=256)
def _lattice_data(key, ell) -> LatticeData:
    A, _ = _adh(key, ell)
    k, n = A.k, A.n
    step = k - ell
    tmin = min_cycle_edges(k, ell)
    cap = k * k * ell + math.ceil(k / step)
    for t in range(tmin, cap + 1):
        cols = closed_walks_exact(A, ell, t)
        if not cols:
            continue
        vD = t * step
        rows = hermite_rows(list(cols), n)
        if all(in_lattice(rows, g) for g in generators(n, vD)):
            break
    else:
        raise PreconditionFailed("no cycle length up to the divisor cycle gives a complete lattice")
    # greedy generating subset, most balanced columns first
    order = sorted(cols, key=lambda c: (max(c), c))
    basis: list = []
    rows = []
    for c in order:
        if rows and in_lattice(rows, c):
            continue
        basis.append(c)
        rows = hermite_rows(basis, n)
        if all(in_lattice(rows, g) for g in generators(n, vD)):
            break
    st = t + 1  # coprime to t, so its copies fix the residue modulo v(D)
    scols = closed_walks_exact(A, ell, st)
    if not scols:
        raise PreconditionFailed(f"no closed walk with {st} steps for the divisibility stock")
    return LatticeData(t, vD, cols, basis, st, scols)


def lattice_data(R: Hypergraph, ell: int) -> LatticeData:
    return _lattice_data(_key(R), ell)


@lru_cache(maxsize=1024)
def _minus_tiling(key, ell, x):
    """Perfect fractional tiling of ``adh(R - x)`` in the labels of ``R``."""
    R = Hypergraph(key[0], key[1], key[3], bounded=key[2])
    keep = [v for v in range(R.n) if v != x]
    Rx = induced(R, keep)
    A, _ = adh_of(Rx, ell)
    res = frac_tiling(A, ell)
    if not res.feasible:
        return None
    out = []
    for c, w in zip(res.tiling.columns, res.tiling.weights):
        counts = [0] * R.n
        for i, a in enumerate(c.counts):
            counts[keep[i]] = a
        out.append((tuple(counts), tuple(keep[v] for v in c.walk), w))
    return out


def _nonneg_integer_combination(cols: Sequence[Sequence[int]], b: Sequence[int],
                                count: tuple | None = None) -> list[int] | None:
    """Integers ``x >= 0`` with ``Σ x_j cols_j = b`` (MILP, then checked exactly).

    ``count = (indices, c)`` adds the side constraint ``Σ_{j in indices} x_j = c``.
    """
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    # a column exceeding b anywhere can only get weight 0
    live = [j for j, c in enumerate(cols) if all(a <= x for a, x in zip(c, b))]
    if count is not None:
        sub = set(count[0])
        if count[1] and not any(j in sub for j in live):
            return None
        count = ([i for i, j in enumerate(live) if j in sub], count[1])
    if not live:
        return [0] * len(cols) if not any(b) else None
    full = cols
    cols = [full[j] for j in live]
    A = np.array(cols, dtype=float).T
    bb = np.array(b, dtype=float)
    cons = [LinearConstraint(A, bb, bb)]
    if count is not None:
        row = np.zeros(len(cols))
        row[list(count[0])] = 1
        cons.append(LinearConstraint(row, count[1], count[1]))
    res = milp(np.zeros(len(cols)), constraints=cons,
               integrality=np.ones(len(cols)), bounds=Bounds(0, np.inf),
               options={"presolve": False})  # presolve is slow on these wide, tiny systems
    if res.x is None:
        return None
    x = [0] * len(full)
    for j, v in zip(live, res.x):
        x[j] = int(round(v))
    if min(x) < 0 or (count is not None and sum(x[live[i]] for i in count[0]) != count[1]):
        return None
    for i in range(len(b)):
        if sum(c[i] * xj for c, xj in zip(full, x) if xj) != b[i]:
            return None
    return x


def _best_fit(cols: dict, sizes: Sequence[int]) -> tuple:
    """Column leaving the most room in the tightest cluster."""
    return min(cols, key=lambda c: (max(a - s for a, s in zip(c, sizes) if a),
                                    sum(Fraction(a * a, max(s, 1)) for a, s in zip(c, sizes)), c))



# ---------------------------------------------------------------------------
# Perfect tiling allocation


@dataclass
class TilingAllocation:
    cycles: list[CyclePath]
    ledger: dict

    def to_dict(self) -> dict:
        return {"cycles": [c.to_dict() for c in self.cycles], "ledger": self.ledger}


def _check_common(R: Hypergraph, ell: int) -> None:
    k = R.k
    if not 1 <= ell <= k - 1:
        raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
    if k % (k - ell) == 0:
        raise PreconditionFailed(f"k-ℓ={k - ell} divides k={k}")


def perfect_tiling_allocation(spec: BlowupSpec, ell: int, q: int | str = "auto") -> TilingAllocation:
    """Vertex-disjoint ℓ-cycles of ``R(𝒱)`` covering every vertex.

    Stages: reservoir of ``q`` copies of a lattice-generating set of
    ``D``-columns; a divisibility stock; the cover (trim ``X``, balancing
    matching, per-``x`` fractional tilings of ``R - x`` summed and floored);
    a divisibility fix; and the lattice correction, which writes the
    uncovered vertices plus the dissolved reservoir as a nonnegative integer
    combination of ``D``-columns.
    """
    R = spec.R
    k = R.k
    _check_common(R, ell)
    probs = spec.problems()
    if probs:
        raise PreconditionFailed("; ".join(probs))
    if spec.exceptional is not None:
        raise PreconditionFailed("perfect tilings need a partition without exceptional cluster")
    step = k - ell
    total = spec.n
    if total % step:
        raise PreconditionFailed(f"{total} vertices is not divisible by k-ℓ={step}")
    if not in_dcon(R, ell):
        raise PreconditionFailed("reduced graph is not in dcon (adherence not one spanning component)")
    if not in_dspa(R, ell):
        raise PreconditionFailed("reduced graph is not in dspa (no perfect fractional tiling)")
    s = R.n
    host = spec.host()
    pool = Pool(spec.clusters)
    L = lattice_data(R, ell)
    ledger: dict = {"D_edges": L.t, "vD": L.vD}

    # (1) reservoir
    if q == "auto":
        need = len(L.basis) * L.vD
        q = 1 if 4 * need <= total else 0
    reservoir = []
    for _ in range(q):
        for c in L.basis:
            reservoir.append(pool.lift(L.columns[c]))
    # (2) divisibility stock, set aside as vertices and put back before the correction
    stock = []
    for _ in range(L.t - 1):
        c = _best_fit(L.stock, pool.sizes())
        if any(a > s for a, s in zip(c, pool.sizes())):
            break
        stock.append(pool.lift(L.stock[c]))
    ledger.update(q=q, reservoir=len(reservoir), stock_reserved=len(stock), stock_edges=L.stock_t)

    # (3) cover
    cover = _cover(R, ell, pool, ledger)
    for cyc in stock + reservoir:
        for v in cyc:
            pool.give(v, host.cluster_of[v])

    # (4) stock copies fixing the residue modulo v(D), then (5) the lattice correction
    dcols = sorted(L.columns)
    scols = sorted(L.stock)
    dissolved = 0
    while True:
        left = pool.sizes()
        j = (sum(left) // step) % L.t
        x = _nonneg_integer_combination(dcols + scols, left, (range(len(dcols), len(dcols) + len(scols)), j))
        if x is not None:
            break
        cand = [c for c in cover if cover[c]]
        if not cand:
            raise ParamsTooSmall("lattice correction failed with every cover copy dissolved")
        c = max(cand, key=lambda c: (len(cover[c]), c))
        for v in cover[c].pop():
            pool.give(v, host.cluster_of[v])
        dissolved += 1
    ledger.update(stock=j, cover_dissolved=dissolved)
    extra = []
    for c, mult in zip(scols, x[len(dcols):]):
        extra += [pool.lift(L.stock[c]) for _ in range(mult)]
    for c, mult in zip(dcols, x):
        extra += [pool.lift(L.columns[c]) for _ in range(mult)]
    ledger["correction"] = len(extra) - j
    if any(pool.sizes()):
        raise AssertionError("lattice correction left vertices uncovered")

    seqs = [cyc for lst in cover.values() for cyc in lst] + extra
    cycles = [validate(CyclePath(k, ell, "cycle", sq), host) for sq in seqs]
    hist = Counter(c.order for c in cycles)
    ledger["orders"] = {str(o): hist[o] for o in sorted(hist)}
    return TilingAllocation(cycles, ledger)


def _cover(R: Hypergraph, ell: int, pool: Pool, ledger: dict) -> dict:
    """Floor of a fractional tiling of the free vertices, lifted; indicator -> list of cycles."""
    s = R.n
    sizes = pool.sizes()
    tot = sum(sizes)
    weights: dict = {}
    per_x = [_minus_tiling(_key(R), ell, x) for x in range(s)] if s > 2 else [None]
    X: list = []
    plan = None
    if all(t is not None for t in per_x):
        r = tot % (s - 1)
        for x in sorted(range(s), key=lambda x: (-sizes[x], x))[:r]:
            X.append((pool.take(x), x))
            sizes[x] -= 1
        try:
            plan = matching_plan(sizes, s - 1)
        except ImbalanceTooLarge:
            plan = None
    if plan is not None:
        ledger["cover_route"] = "balancing"
        mx = Counter(plan)
        for x in range(s):
            if not mx[x]:
                continue
            for counts, walk, w in per_x[x]:
                if counts not in weights:
                    weights[counts] = [walk, Fraction(0)]
                weights[counts][1] += w * mx[x]
    else:
        ledger["cover_route"] = "direct"
        for v, x in X:
            pool.give(v, x)
        X = []
        A, _ = adh_of(R, ell)
        res = fractional_cover(A, ell, pool.sizes())
        if not res.feasible:
            raise ParamsTooSmall("cluster sizes are outside the cone of cycle columns")
        for c, w in zip(res.tiling.columns, res.tiling.weights):
            weights[c.counts] = [c.walk, w]
    cover: dict = {}
    for counts in sorted(weights):
        walk, w = weights[counts]
        copies = math.floor(w)
        if copies:
            cover[counts] = [pool.lift(walk) for _ in range(copies)]
    for v, x in X:
        pool.give(v, x)
    ledger["cover"] = sum(len(v) for v in cover.values())
    return cover


def tiling_allocation_problems(spec: BlowupSpec, ell: int, cycles: Sequence[CyclePath]) -> list[str]:
    host = spec.host()
    out = []
    seen: Counter = Counter()
    for i, C in enumerate(cycles):
        if C.kind != "cycle" or C.ell != ell:
            out.append(f"cycle {i} has the wrong kind or ℓ")
        p = blowup_problems(C, host)
        if p:
            out.append(f"cycle {i}: {p[0]}")
        seen.update(C.verts)
    allv = {v for c in spec.clusters for v in c}
    if set(seen) != allv:
        out.append("cycles do not cover the vertex set exactly")
    if any(c > 1 for c in seen.values()):
        out.append("a vertex lies on two cycles")
    return out


# ---------------------------------------------------------------------------
# Splicing


def splice_cycle(P: CyclePath, C: CyclePath, pos: int, cluster_of: dict,
                 host=None) -> CyclePath:
    """Insert the cycle ``C`` into the path ``P`` at the window starting at ``pos``.

    With ``y = P[pos:pos+k]`` and ``v = C``, the result is
    ``… y_1…y_{k-ℓ} v_{k-ℓ+1}…v_r v_1…v_{k-ℓ} y_{k-ℓ+1}…y_k …``.  It is an
    ℓ-path exactly when ``v_{k-ℓ+1}…v_k`` lies in the clusters of
    ``y_{k-ℓ+1}…y_k`` position by position, which is what is checked.
    """
    k, ell = P.k, P.ell
    step = k - ell
    seq = P.verts
    if P.kind != "path" or C.kind != "cycle":
        raise PreconditionFailed("splice_cycle takes a path and a cycle")
    if pos % step or pos < 0 or pos + k > len(seq):
        raise NotFound(f"no window of the path starts at {pos}")
    if pos + step < ell:
        raise PreconditionFailed("site would move the first endtuple")
    if set(seq) & set(C.verts):
        raise PreconditionFailed("cycle and path share vertices")
    a = [cluster_of[v] for v in seq[pos + step: pos + k]]
    b = [cluster_of[v] for v in C.verts[step:k]]
    if a != b:
        raise PreconditionFailed(f"cycle orientation {b} does not match the site {a}")
    cv = C.verts
    new = seq[: pos + step] + cv[step:] + cv[:step] + seq[pos + step:]
    return validate(CyclePath(k, ell, "path", new), host)


def _rotations(C: CyclePath):
    """All window-aligned rotations of ``C`` and of its reversal."""
    step = C.k - C.ell
    r = C.order
    for base in (C.verts, C.verts[::-1]):
        for i in range(0, r) if base is not C.verts else range(0, r, step):
            yield base[i:] + base[:i]


def find_site(P: CyclePath, C: CyclePath, cluster_of: dict, host) -> tuple[int, CyclePath] | None:
    """A window of ``P`` and a rotation of ``C`` that :func:`splice_cycle` accepts."""
    k, ell = P.k, P.ell
    step = k - ell
    sites: dict = {}
    seq = P.verts
    for pos in range(0, len(seq) - k + 1, step):
        if pos + step < ell:
            continue
        key = tuple(cluster_of[v] for v in seq[pos + step: pos + k])
        sites.setdefault(key, pos)
    for rot in _rotations(C):
        key = tuple(cluster_of[v] for v in rot[step:k])
        if key not in sites:
            continue
        R = CyclePath(k, ell, "cycle", rot)
        if cyclepath_problems(R, host):
            continue
        return sites[key], R
    return None


# ---------------------------------------------------------------------------
# Hamilton path allocation


@dataclass
class PathAllocation:
    path: CyclePath
    ledger: dict


def _tuple_problems(f: Sequence[int], host: BlowupHost, R: Hypergraph, ell: int, avoid: set) -> list[str]:
    out = []
    if len(f) != ell or len(set(f)) != ell:
        return [f"{tuple(f)} is not an ℓ-tuple of distinct vertices"]
    if any(v not in host.cluster_of for v in f):
        return [f"{tuple(f)} leaves the blow-up"]
    if set(f) & avoid:
        out.append(f"{tuple(f)} meets the exceptional cluster")
    p = host.pattern(f)
    if len(set(p)) != ell:
        out.append(f"{tuple(f)} has two vertices in one cluster")
    elif R.bounded and not R.has_edge(p):
        out.append(f"{tuple(f)} is not an edge of the ℓ-level")
    return out


def _join(wg: WalkGraph, seq: list, seg: list, ell: int, step: int, room: Sequence[int]) -> list:
    """``seq + Y + seg`` with ``Y`` fresh slots of a walk between the two patterns.

    Among shortest connectors of at most two blocks the one using the
    clusters with the most room is taken.
    """
    a = tuple(x for x, _ in seq[-ell:])
    b = tuple(x for x, _ in seg[:ell])
    lo = max(1, math.ceil(ell / step))
    blocks = wg.shortest(a, b, lo)
    if blocks is None:
        raise PreconditionFailed(f"state {b} is unreachable from {a} in the reduced graph")
    if len(blocks) <= 2:
        use = Counter(x for x, _ in seq) + Counter(x for x, _ in seg)
        best = None
        for cand in _walks_of_length(wg, a, b, len(blocks)):
            c = Counter(x for X in cand for x in X[: len(X)])
            key = sorted((use[x] + c[x] - room[x] for x in c), reverse=True)
            if best is None or key < best[0]:
                best = (key, cand)
        blocks = best[1]
    fresh = [(x, None) for X in blocks for x in X]
    return seq + fresh[: len(fresh) - ell] + seg


def _walks_of_length(wg: WalkGraph, a: tuple, b: tuple, L: int):
    if L == 0:
        if a == b:
            yield []
        return
    for X, s2 in wg.trans.get(a, ()):
        for rest in _walks_of_length(wg, s2, b, L - 1):
            yield [X] + rest


def hamilton_path_allocation(spec: BlowupSpec, ell: int, f1: Sequence[int], f2: Sequence[int],
                             q: int | str = "auto") -> PathAllocation:
    """Hamilton ``(f1, f2, ℓ)``-path of ``R(𝒱)``.

    A skeleton path runs from ``f1`` through one single-edge site per
    supported state of ``R - x*``, then through a path containing the
    exceptional vertex, to ``f2``; consecutive pieces are joined by shortest
    walks lifted to fresh vertices.  The rest is tiled by
    :func:`perfect_tiling_allocation` and each cycle is spliced in.
    """
    R = spec.R
    k = R.k
    _check_common(R, ell)
    probs = spec.problems()
    if probs:
        raise PreconditionFailed("; ".join(probs))
    step = k - ell
    n = spec.n
    if (n - k) % step:
        raise PreconditionFailed(f"{n} vertices is not ≡ k={k} mod {step}")
    f1, f2 = tuple(f1), tuple(f2)
    if set(f1) & set(f2):
        raise PreconditionFailed("f1 and f2 intersect")
    host = spec.host()
    xs = spec.exceptional
    vstar = spec.clusters[xs][0] if xs is not None else None
    avoid = {vstar} if xs is not None else set()
    for f in (f1, f2):
        p = _tuple_problems(f, host, R, ell, avoid)
        if p:
            raise PreconditionFailed("; ".join(p))
    keep = [x for x in range(R.n) if x != xs]
    Rr = induced(R, keep) if xs is not None else R
    if not in_dcon(R, ell) or not in_dcon(Rr, ell):
        raise PreconditionFailed("reduced graph (or R - x*) is not in dcon")

    top = adh_of(R, ell)[0]
    rtop = Hypergraph(R.n, k, frozenset(e for e in top.edges if xs not in e))
    wg = WalkGraph(rtop, ell)
    # slots are (cluster, fixed vertex or None)
    seq = [(host.cluster_of[v], v) for v in f1]
    room = [len(c) for c in spec.clusters]
    sites = 0
    for sigma in wg.states:
        # least-used clusters first, so no cluster is drained by the skeleton
        use = Counter(x for x, _ in seq)
        e = min((e for e in rtop.sorted_edges if set(sigma) <= set(e)),
                key=lambda e: (sorted((use[x] - room[x] for x in e), reverse=True), e))
        seg = [(x, None) for x in e if x not in sigma] + [(x, None) for x in sigma]
        seq = _join(wg, seq, seg, ell, step, room)
        sites += 1
    if xs is not None:
        T = path_through_vertex(top, xs, ell, supported_in=rtop)
        seg = [(x, vstar if x == xs else None) for x in T]
        seq = _join(wg, seq, seg, ell, step, room)
    seq = _join(wg, seq, [(host.cluster_of[v], v) for v in f2], ell, step, room)

    pool = Pool([[v for v in c if v not in f1 and v not in f2 and v != vstar] for c in spec.clusters])
    verts = [v if v is not None else pool.take(x) for x, v in seq]
    skel = validate(CyclePath(k, ell, "path", tuple(verts)), host)
    rest = sum(pool.sizes())
    if rest % step:
        raise AssertionError(f"{rest} vertices left after the skeleton, not divisible by {step}")
    ledger = {"skeleton": skel.order, "sites": sites, "remainder": rest}

    P = skel
    if rest:
        clusters = [sorted(pool.heaps[x]) for x in keep]
        if any(not c for c in clusters):
            raise ParamsTooSmall("a cluster was used up by the skeleton")
        sub = BlowupSpec(Rr, clusters)
        tiling = perfect_tiling_allocation(sub, ell, q)
        ledger["tiling"] = tiling.ledger
        for C in tiling.cycles:
            found = find_site(P, C, host.cluster_of, host)
            if found is None:
                raise NotFound("no splice site for a tiling cycle")
            pos, Crot = found
            P = splice_cycle(P, Crot, pos, host.cluster_of)
    P = validate(P, host)
    if P.order != n or P.verts[:ell] != f1 or P.verts[-ell:] != f2:
        raise AssertionError("allocated path is not a Hamilton (f1, f2)-path")
    return PathAllocation(P, ledger)


def path_allocation_problems(spec: BlowupSpec, ell: int, f1, f2, P: CyclePath) -> list[str]:
    out = blowup_problems(P, spec.host())
    allv = sorted(v for c in spec.clusters for v in c)
    if sorted(P.verts) != allv:
        out.append("path does not cover the vertex set exactly once")
    if tuple(P.verts[:ell]) != tuple(f1) or tuple(P.verts[-ell:]) != tuple(f2):
        out.append("endtuples differ from f1, f2")
    return out


# ---------------------------------------------------------------------------
# Covers and chain assembly


@dataclass
class CoverSpec:
    k: int
    V: list  # V[i]: clusters of the i-th family (shape vertex i)
    V_exceptional: list  # index of the singleton cluster of V[i]
    W: list  # W[i]: clusters of the family on shape edge (i, i+1 mod b)
    hit_left: list  # hit_left[i][y] = cluster of W[i] inside cluster y of V[i]
    hit_right: list  # hit_right[i][y] = cluster of W[i] inside cluster y of V[i+1]
    RV: list
    RW: list
    m1: int
    m2: int
    eta: Fraction

    @property
    def b(self) -> int:
        return len(self.V)

    def to_dict(self) -> dict:
        return {"k": self.k, "V": self.V, "V_exceptional": self.V_exceptional, "W": self.W,
                "hit_left": [{str(a): b for a, b in h.items()} for h in self.hit_left],
                "hit_right": [{str(a): b for a, b in h.items()} for h in self.hit_right],
                "RV": [R.to_dict() for R in self.RV], "RW": [R.to_dict() for R in self.RW],
                "m1": self.m1, "m2": self.m2, "eta": str(self.eta)}

    @classmethod
    def from_dict(cls, d: dict) -> "CoverSpec":
        from .hcore import from_dict
        return cls(d["k"], d["V"], d["V_exceptional"], d["W"],
                   [{int(a): b for a, b in h.items()} for h in d["hit_left"]],
                   [{int(a): b for a, b in h.items()} for h in d["hit_right"]],
                   [from_dict(r) for r in d["RV"]], [from_dict(r) for r in d["RW"]],
                   d["m1"], d["m2"], Fraction(d["eta"]))


def cover_problems(cover: CoverSpec, G: Hypergraph | None = None) -> list[str]:
    """Check (C1)-(C4) and, when ``G`` is given, (B1)-(B2)."""
    out = []
    b = cover.b
    if b < 3:
        out.append("shape cycle needs at least 3 vertices")
    if not (len(cover.W) == len(cover.hit_left) == len(cover.hit_right) == len(cover.RW) == b
            and len(cover.RV) == len(cover.V_exceptional) == b):
        return out + ["family counts disagree with the shape"]
    m1, m2, eta = cover.m1, cover.m2, cover.eta
    s1 = len(cover.V[0])
    s2 = len(cover.W[0])
    # (C1)
    for i, fam in enumerate(cover.V):
        if len(fam) != s1:
            out.append(f"(C1) V[{i}] has {len(fam)} clusters, not {s1}")
        ex = cover.V_exceptional[i]
        for y, c in enumerate(fam):
            if y == ex:
                if len(c) != 1:
                    out.append(f"(C1) exceptional cluster of V[{i}] is not a singleton")
            elif not (1 - eta) * m1 <= len(c) <= (1 + eta) * m1:
                out.append(f"(C1) V[{i}][{y}] has size {len(c)}")
    # (C2)
    owner: dict = {}
    for i, fam in enumerate(cover.W):
        if len(fam) != s2:
            out.append(f"(C2) W[{i}] has {len(fam)} clusters, not {s2}")
        for c in fam:
            if len(c) != m2:
                out.append(f"(C2) W[{i}] has a cluster of size {len(c)} != {m2}")
                break
        for c in fam:
            for v in c:
                if owner.setdefault(v, i) != i:
                    out.append(f"(C2) W[{i}] and W[{owner[v]}] share vertex {v}")
                    break
    # (C3)
    for i in range(b):
        for side, fam_idx, hit in (("left", i, cover.hit_left[i]), ("right", (i + 1) % b, cover.hit_right[i])):
            fam = cover.V[fam_idx]
            ex = cover.V_exceptional[fam_idx]
            need = {y for y in range(len(fam)) if y != ex}
            if set(hit) != need:
                out.append(f"(C3) W[{i}] does not hit every regular cluster of V[{fam_idx}]")
                continue
            if len(set(hit.values())) != len(hit):
                out.append(f"(C3) W[{i}] uses one cluster twice on the {side}")
            for y, j in hit.items():
                if not set(cover.W[i][j]) <= set(fam[y]):
                    out.append(f"(C3) W[{i}][{j}] is not inside V[{fam_idx}][{y}]")
        hitting = set(cover.hit_left[i].values()) | set(cover.hit_right[i].values())
        inV = {v for fam in cover.V for c in fam for v in c}
        for j, c in enumerate(cover.W[i]):
            if j not in hitting and set(c) & inV:
                out.append(f"(C3) non-hitting W[{i}][{j}] meets a V cluster")
    # (C4)
    parts = [c for fam in cover.V for c in fam]
    for i in range(b):
        hitting = set(cover.hit_left[i].values()) | set(cover.hit_right[i].values())
        parts += [c for j, c in enumerate(cover.W[i]) if j not in hitting]
    allv = [v for c in parts for v in c]
    if len(allv) != len(set(allv)):
        out.append("(C4) the families overlap")
    if G is not None and set(allv) != set(range(G.n)):
        out.append("(C4) the families do not partition V(G)")
    if G is not None and not out:
        out += _blowup_consistency(cover, G)
    return out


def _blowup_consistency(cover: CoverSpec, G: Hypergraph) -> list[str]:
    """(B1)/(B2): ``G[𝒱] = R(𝒱)`` for every family, by one scan over ``E(G)``."""
    fams = [(f"V[{i}]", fam, cover.RV[i]) for i, fam in enumerate(cover.V)]
    fams += [(f"W[{i}]", fam, cover.RW[i]) for i, fam in enumerate(cover.W)]
    out = []
    where = [{v: y for y, c in enumerate(fam) for v in c} for _, fam, _ in fams]
    member: dict = {}  # vertex -> bitmask of the families containing it
    for j, w in enumerate(where):
        for v in w:
            member[v] = member.get(v, 0) | (1 << j)
    seen = [0] * len(fams)
    for e in G.edges:
        m = -1
        for v in e:
            m &= member.get(v, 0)
        while m > 0:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            w = where[j]
            p = tuple(w[v] for v in e)
            if len(set(p)) == len(p):
                if not fams[j][2].has_edge(p):
                    return [f"{fams[j][0]}: G has edge {e} outside the blow-up"]
                seen[j] += 1
    for j, (name, fam, R) in enumerate(fams):
        expect = sum(math.prod(len(fam[x]) for x in e) for e in R.edges
                     if G.bounded or len(e) == G.k)
        if seen[j] != expect:
            out.append(f"{name}: G misses {expect - seen[j]} blow-up edges")
    return out


@dataclass
class ChainResult:
    cycle: CyclePath
    trimmed: list  # vertices removed from each W family
    ledger: dict


def assemble_chain(G: Hypergraph, cover: CoverSpec, ell: int, check_cover: bool = True,
                   q: int | str = "auto") -> ChainResult:
    """Hamilton ℓ-cycle of ``G`` glued from Hamilton paths in the blow-ups of a cover."""
    k = cover.k
    if not 1 <= ell <= k - 1 or k % (k - ell) == 0:
        raise PreconditionFailed(f"(k, ℓ)=({k}, {ell}) needs 1 <= ℓ < k and k-ℓ ∤ k")
    step = k - ell
    if G.n % step:
        raise PreconditionFailed(f"n={G.n} is not divisible by k-ℓ={step}")
    if check_cover:
        probs = cover_problems(cover, G)
        if probs:
            raise CoverInvalid("; ".join(probs[:3]))
    b = cover.b
    W = [[list(c) for c in fam] for fam in cover.W]
    trimmed = [[] for _ in range(b)]

    def side_size(i, hit):
        return sum(len(W[i][j]) for j in hit.values())

    def delete(i, hit, d):
        for _ in range(d):
            j = max(hit.values(), key=lambda j: (len(W[i][j]), -j))
            trimmed[i].append(W[i][j].pop())

    vsize = [sum(len(c) for c in fam) for fam in cover.V]
    for i in range(b):
        # (b) for V[i]: delete from the part of W[i] inside V[i]
        expr = vsize[i] - side_size((i - 1) % b, cover.hit_right[(i - 1) % b]) - side_size(i, cover.hit_left[i])
        delete(i, cover.hit_left[i], (-ell - expr) % step)
        if i < b - 1:
            # (a) for W[i]: delete from the part inside V[i+1]
            wsize = sum(len(c) for c in W[i])
            delete(i, cover.hit_right[i], (wsize - k) % step)
    for i in range(b):
        if (sum(len(c) for c in W[i]) - k) % step:
            raise AssertionError(f"W[{i}] violates the residue condition after trimming")

    # endtuples: e_i inside W[i-1] ∩ V[i], f_i inside W[i] ∩ V[i]
    def pick(i_w, hit, fam_idx):
        RV = cover.RV[fam_idx]
        RW = cover.RW[i_w]
        ys = sorted(hit)
        from itertools import combinations
        for ys_sel in combinations(ys, ell):
            js = [hit[y] for y in ys_sel]
            if RV.has_edge(ys_sel) and RW.has_edge(js) and all(W[i_w][j] for j in js):
                return tuple(min(W[i_w][j]) for j in js)
        raise CoverInvalid(f"no ℓ-edge for an endtuple in W[{i_w}] ∩ V[{fam_idx}]")

    e = [pick((i - 1) % b, cover.hit_right[(i - 1) % b], i) for i in range(b)]
    f = [pick(i, cover.hit_left[i], i) for i in range(b)]
    ledger: dict = {"trimmed": [len(t) for t in trimmed], "W_paths": [], "V_paths": []}
    wpaths = []
    for i in range(b):
        spec = BlowupSpec(cover.RW[i], W[i])
        res = hamilton_path_allocation(spec, ell, f[i], e[(i + 1) % b], q)
        wpaths.append(res.path)
        ledger["W_paths"].append(res.path.order)
    vpaths = []
    for i in range(b):
        used = set(wpaths[i].verts) | set(wpaths[(i - 1) % b].verts)
        used -= set(e[i]) | set(f[i])
        clusters = [[v for v in c if v not in used] for c in cover.V[i]]
        spec = BlowupSpec(cover.RV[i], clusters, cover.V_exceptional[i])
        res = hamilton_path_allocation(spec, ell, e[i], f[i], q)
        vpaths.append(res.path)
        ledger["V_paths"].append(res.path.order)
    S = list(vpaths[0].verts)
    for i in range(b):
        S += list(wpaths[i].verts[ell:])
        if i + 1 < b:
            S += list(vpaths[i + 1].verts[ell:])
    C = CyclePath(k, ell, "cycle", tuple(S[:-ell]))
    C = validate(C, G.uniform_part() if G.bounded else G)
    if C.order != G.n:
        raise AssertionError("assembled cycle is not Hamilton")
    return ChainResult(C, trimmed, ledger)
