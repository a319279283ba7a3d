"""ℓ-cycles and ℓ-paths, proper colourings, ℓ-components and closed ℓ-walks.

A cycle or path is an ordered vertex sequence.  Its edges ("windows") are the
blocks of ``k`` consecutive vertices starting at multiples of ``k - ℓ``
(cyclically for cycles).

Closed ℓ-walks are handled through the *transition digraph* on ordered
ℓ-tuples: from a state ``s`` one may append ``k - ℓ`` vertices ``X`` whenever
``set(s) ∪ set(X)`` is an edge; the new state is the last ℓ entries of
``s + X``.  A closed walk of ``t`` steps is exactly a homomorphic image of the
ℓ-cycle with ``t`` edges.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

from .errors import BudgetExceeded, NotFound, PreconditionFailed
from .hcore import Hypergraph

DEFAULT_BUDGET = 10_000_000


class CycleError(PreconditionFailed):
    pass


def lam(k: int, ell: int) -> Fraction:
    """``1 / (⌈k/(k-ℓ)⌉ (k-ℓ))``."""
    return Fraction(1, math.ceil(Fraction(k, k - ell)) * (k - ell))


def min_cycle_edges(k: int, ell: int) -> int:
    return math.ceil(Fraction(k, k - ell)) + 1


# ---------------------------------------------------------------------------
# CyclePath


@dataclass(frozen=True)
class CyclePath:
    k: int
    ell: int
    kind: str  # "cycle" | "path"
    verts: tuple

    def __post_init__(self):
        object.__setattr__(self, "verts", tuple(self.verts))

    @property
    def order(self) -> int:
        return len(self.verts)

    @cached_property
    def windows(self) -> list[tuple]:
        return windows(self.verts, self.k, self.ell, cyclic=self.kind == "cycle")

    @property
    def endtuples(self) -> tuple[tuple, tuple]:
        return self.verts[: self.ell], self.verts[-self.ell:]

    def to_dict(self) -> dict:
        return {"k": self.k, "ℓ": self.ell, "kind": self.kind, "verts": list(self.verts)}

    @classmethod
    def from_dict(cls, d: dict) -> "CyclePath":
        ell = d["ℓ"] if "ℓ" in d else d["l"]
        return cls(d["k"], ell, d["kind"], tuple(d["verts"]))


def windows(seq: Sequence, k: int, ell: int, cyclic: bool) -> list[tuple]:
    step = k - ell
    m = len(seq)
    if cyclic:
        if m == 0 or m % step:
            return []
        return [tuple(seq[(i + j) % m] for j in range(k)) for i in range(0, m, step)]
    return [tuple(seq[i:i + k]) for i in range(0, m - k + 1, step)]


def cyclepath_problems(P: CyclePath, host: Hypergraph | None = None,
                       loose_ends: bool = False) -> list[str]:
    """Every violated invariant of ``P`` (empty list means valid).

    ``loose_ends`` lets the first and last edge of a path meet (only the
    endtuples must be disjoint).
    """
    k, ell, seq = P.k, P.ell, P.verts
    out = []
    if not 1 <= ell <= k - 1:
        return [f"ℓ={ell} outside 1..{k - 1}"]
    step = k - ell
    if len(set(seq)) != len(seq):
        out.append("repeated vertex")
    if P.kind == "cycle":
        if len(seq) % step:
            out.append(f"order {len(seq)} not divisible by {step}")
            return out
        if len(seq) < k:
            return out + ["order below k"]
    elif P.kind == "path":
        if len(seq) < k or (len(seq) - k) % step:
            out.append(f"order {len(seq)} not ≡ k mod {step}")
            return out
    else:
        return [f"unknown kind {P.kind!r}"]
    W = P.windows
    sets = [frozenset(w) for w in W]
    if any(len(s) != k for s in sets):
        out.append("window with repeated vertex")
    if len(set(sets)) != len(sets):
        out.append("two windows coincide as edges")
    pairs = list(zip(sets, sets[1:]))
    if P.kind == "cycle":
        pairs.append((sets[-1], sets[0]))
    for i, (a, b) in enumerate(pairs):
        if len(a & b) != ell:
            out.append(f"windows {i},{(i + 1) % len(sets)} meet in {len(a & b)} != {ell}")
            break
    if P.kind == "path" and len(W) > 1 and sets[0] & sets[-1]:
        if not loose_ends:
            out.append("first and last edge intersect")
        elif set(seq[:ell]) & set(seq[-ell:]):
            out.append("endtuples intersect")
    if P.kind == "path" and len(W) == 1 and len(seq) != k:
        out.append("bad single-edge path")
    if host is not None:
        for w in W:
            if not host.has_edge(w):
                out.append(f"window {w} is not an edge of the host")
                break
    return out


def validate(P: CyclePath, host: Hypergraph | None = None, loose_ends: bool = False) -> CyclePath:
    problems = cyclepath_problems(P, host, loose_ends)
    if problems:
        raise CycleError("; ".join(problems))
    return P


def build_cycle(k: int, ell: int, t: int) -> CyclePath:
    if not 1 <= ell <= k - 1:
        raise CycleError(f"ℓ={ell} outside 1..{k - 1}")
    return validate(CyclePath(k, ell, "cycle", tuple(range(t * (k - ell)))))


def build_path(k: int, ell: int, t: int) -> CyclePath:
    if not 1 <= ell <= k - 1:
        raise CycleError(f"ℓ={ell} outside 1..{k - 1}")
    if t < 2 or (t - 1) * (k - ell) < k:
        raise CycleError(f"t={t}: first and last edge of the path would intersect")
    return validate(CyclePath(k, ell, "path", tuple(range(k + (t - 1) * (k - ell)))))


def cycle_graph(k: int, ell: int, t: int) -> Hypergraph:
    """The ℓ-cycle with ``t`` edges as a ``k``-graph on its own vertex set."""
    C = build_cycle(k, ell, t)
    return Hypergraph.uniform(C.order, k, C.windows)


# ---------------------------------------------------------------------------
# Colourings


@dataclass(frozen=True)
class Colouring:
    colours: tuple  # colour of vertex i, colours are 1..t

    @property
    def class_sizes(self) -> tuple:
        t = max(self.colours, default=0)
        c = Counter(self.colours)
        return tuple(c[i] for i in range(1, t + 1))

    def is_proper(self, edges: Iterable[Sequence[int]]) -> bool:
        return all(len({self.colours[v] for v in e}) == len(e) for e in edges)


def path_colouring(P: CyclePath) -> Colouring:
    """Proper ``k``-colouring of an ℓ-path with colour ``k`` on ``λ(k,ℓ)m ± 1`` vertices.

    Colour ``k`` goes on every ``a(k-ℓ)``-th position (``a = ⌈k/(k-ℓ)⌉``) from an
    offset in ``[(a-1)(k-ℓ), k-1]``, so each window gets exactly one; the
    remaining vertices are coloured ``1..k-1`` cyclically, which makes every
    window rainbow and the other classes differ by at most one.
    """
    validate(P)
    if P.kind != "path":
        raise CycleError("path_colouring needs a path")
    k, ell, m = P.k, P.ell, P.order
    a = math.ceil(Fraction(k, k - ell))
    period = a * (k - ell)
    offset = (a - 1) * (k - ell)
    col = [0] * m
    rest = 0
    for p in range(m):
        if p >= offset and (p - offset) % period == 0:
            col[p] = k
        else:
            col[p] = rest % (k - 1) + 1
            rest += 1
    # relabel to the actual vertex names of P
    by_vertex = dict(zip(P.verts, col))
    out = Colouring(tuple(by_vertex[v] for v in sorted(by_vertex)))
    return out


def colouring_problems(P: CyclePath, colouring: Colouring) -> list[str]:
    """Check the class-size window of :func:`path_colouring` independently."""
    k, m = P.k, P.order
    out = []
    index = {v: i for i, v in enumerate(sorted(P.verts))}
    if not all(len({colouring.colours[index[v]] for v in w}) == k for w in P.windows):
        out.append("not proper")
    sizes = Counter(colouring.colours)
    target = lam(k, P.ell) * m
    if not target - 1 <= sizes[k] <= target + 1:
        out.append(f"colour {k} used {sizes[k]} times, outside {target}±1")
    others = [sizes[c] for c in range(1, k)]
    if others and max(others) - min(others) > 1:
        out.append(f"other classes {others} not balanced")
    return out


# ---------------------------------------------------------------------------
# Spanning rainbow paths in complete k-partite k-graphs


def partite_spanning_path(part_sizes: Sequence[int], f1: Sequence[int], f2: Sequence[int],
                          ell: int, budget: int = DEFAULT_BUDGET) -> CyclePath:
    """Spanning ``(f1,f2,ℓ)``-path of the complete ``k``-partite ``k``-graph.

    Parts are consecutive vertex ranges.  Every window of the result meets each
    part once.  Raises :class:`NotFound` when the search space is exhausted and
    :class:`BudgetExceeded` when ``budget`` nodes were visited first.
    """
    k = len(part_sizes)
    if not 1 <= ell <= k - 1:
        raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
    if any(s <= 0 for s in part_sizes):
        raise PreconditionFailed("part sizes must be positive")
    starts = [sum(part_sizes[:i]) for i in range(k)]
    n = sum(part_sizes)
    part_of = [i for i, s in enumerate(part_sizes) for _ in range(s)]
    f1, f2 = tuple(f1), tuple(f2)
    if len(f1) != ell or len(f2) != ell:
        raise PreconditionFailed("endtuples must have length ℓ")
    if set(f1) & set(f2) or len(set(f1)) < ell or len(set(f2)) < ell:
        raise PreconditionFailed("endtuples must be disjoint tuples of distinct vertices")
    if any(not 0 <= v < n for v in f1 + f2):
        raise PreconditionFailed("endtuple vertex out of range")
    p1 = tuple(part_of[v] for v in f1)
    p2 = tuple(part_of[v] for v in f2)
    if len(set(p1)) < ell or len(set(p2)) < ell:
        raise PreconditionFailed("an endtuple has two vertices in one part")
    step = k - ell
    if n < k or (n - k) % step:
        raise NotFound(f"order {n} is not ≡ k mod {step}")

    free = list(part_sizes)
    for p in p1 + p2:
        free[p] -= 1
    # positions ell .. n-1 are filled block by block; the last ell are f2's parts
    tail_start = n - ell
    dead: set = set()
    nodes = 0

    def rec(pos, state, counts, acc):
        nonlocal nodes
        if pos == n:
            return acc
        key = (state, counts)
        if key in dead:
            return None
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"partite_spanning_path exceeded {budget} nodes")
        for block in _blocks(pos, state, counts):
            new_counts = list(counts)
            for q, p in enumerate(block):
                if pos + q < tail_start:
                    new_counts[p] -= 1
            res = rec(pos + step, (state + block)[-ell:], tuple(new_counts), acc + list(block))
            if res is not None:
                return res
        dead.add(key)
        return None

    def _blocks(pos, state, counts):
        forced = {q: p2[pos + q - tail_start] for q in range(step) if pos + q >= tail_start}
        used = set(state) | set(forced.values())
        if len(used) < len(state) + len(forced):
            return
        order = sorted((p for p in range(k) if counts[p] > 0 and p not in used),
                       key=lambda p: (-counts[p], p))

        def extend(q, chosen, taken):
            if q == step:
                yield tuple(chosen)
                return
            if q in forced:
                yield from extend(q + 1, chosen + [forced[q]], taken)
                return
            for p in order:
                if p not in taken and counts[p] - chosen.count(p) > 0:
                    yield from extend(q + 1, chosen + [p], taken | {p})
        yield from extend(0, [], frozenset(used))

    seq_parts = rec(ell, p1, tuple(free), list(p1))
    if seq_parts is None:
        raise NotFound("no spanning rainbow path with these endtuples")
    pools = [[v for v in range(starts[i], starts[i] + part_sizes[i]) if v not in f1 and v not in f2]
             for i in range(k)]
    pools = [list(reversed(p)) for p in pools]
    verts = list(f1)
    for pos in range(ell, tail_start):
        verts.append(pools[seq_parts[pos]].pop())
    verts.extend(f2)
    P = CyclePath(k, ell, "path", tuple(verts))
    return validate(P)


def complete_partite(part_sizes: Sequence[int]) -> Hypergraph:
    from itertools import product
    starts = [sum(part_sizes[:i]) for i in range(len(part_sizes))]
    ranges = [range(s, s + z) for s, z in zip(starts, part_sizes)]
    return Hypergraph.uniform(sum(part_sizes), len(part_sizes), product(*ranges))


def balanced_cycle(k: int, ell: int, t: int, eps: float | Fraction,
                   budget: int = DEFAULT_BUDGET) -> tuple[CyclePath, Colouring]:
    """A ``k``-partite ℓ-cycle on ``t(k-ℓ)`` vertices with part 1 of share ``λ ± ε``.

    A KMO-coloured path is closed up through a spanning rainbow path of the
    complete ``k``-partite graph with parts ``kℓ(k-ℓ)+1``.  The returned colouring
    uses colour 1 for the small class.
    """
    if k % (k - ell) == 0:
        raise PreconditionFailed(f"k-ℓ={k - ell} divides k={k}")
    eps = Fraction(eps)
    big = k * ell * (k - ell) + 1
    b = big * k - 2 * ell
    m = t * (k - ell)
    mp = m - b
    if mp < k:
        raise PreconditionFailed(f"b={b} leaves no room for a path in m={m} vertices")
    P = CyclePath(k, ell, "path", tuple(range(mp)))
    pc = path_colouring(P)
    # colour k -> part 0, colour c < k -> part c
    part = [0 if c == k else c for c in pc.colours]
    head, tail = P.verts[:ell], P.verts[-ell:]
    # closing graph: parts of size `big`, containing tail (as f1) and head (as f2)
    sizes = [big] * k
    starts = [i * big for i in range(k)]
    slot = list(starts)
    f1 = []
    for v in tail:
        f1.append(slot[part[v]]); slot[part[v]] += 1
    f2 = []
    for v in head:
        f2.append(slot[part[v]]); slot[part[v]] += 1
    Q = partite_spanning_path(sizes, f1, f2, ell, budget)
    ext = {}
    for a, v in zip(f1, tail):
        ext[a] = v
    for a, v in zip(f2, head):
        ext[a] = v
    nxt = mp
    qpart = {}
    for a in Q.verts:
        if a not in ext:
            ext[a] = nxt
            nxt += 1
        qpart[ext[a]] = a // big
    verts = list(P.verts) + [ext[a] for a in Q.verts[ell:-ell]]
    C = validate(CyclePath(k, ell, "cycle", tuple(verts)))
    colours = [0] * m
    for v in range(mp):
        colours[v] = part[v] + 1
    for v, p in qpart.items():
        colours[v] = p + 1
    col = Colouring(tuple(colours))
    if not col.is_proper(C.windows):
        raise AssertionError("closing produced an improper colouring")
    shares = [Fraction(s, m) for s in col.class_sizes]
    lo = lam(k, ell)
    rest = (1 - lo) / (k - 1)
    if abs(shares[0] - lo) > eps or any(abs(s - rest) > eps for s in shares[1:]):
        raise PreconditionFailed(f"t={t} too small: shares {[str(s) for s in shares]} miss ε={eps}")
    return C, col


# ---------------------------------------------------------------------------
# ℓ-components and adherence


def _union_find(n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    return parent, find


def components(G: Hypergraph, ell: int) -> list[frozenset]:
    """ℓ-components: connected components of the ℓ-line graph on the ``k``-edges."""
    edges = G.uniform_part().sorted_edges
    parent, find = _union_find(len(edges))
    # two edges meet in >= ell vertices iff they share some ell-subset
    from itertools import combinations
    first: dict = {}
    for i, e in enumerate(edges):
        for S in combinations(e, ell):
            j = first.setdefault(S, i)
            if j != i:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), set()).add(e)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g))


def spans(edge_set: Iterable[Sequence[int]], n: int) -> bool:
    return len({v for e in edge_set for v in e}) == n


def is_ell_connected(G: Hypergraph, ell: int) -> bool:
    """No isolated vertices and a single ℓ-component."""
    comps = components(G, ell)
    return len(comps) == 1 and spans(comps[0], G.n)


@dataclass(frozen=True)
class Adherence:
    graph: Hypergraph
    dcon: bool


def adherence(G: Hypergraph, ell: int) -> Adherence:
    """Union of the ℓ-components ``tc(e)`` over the ℓ-level edges ``e``."""
    if not G.bounded:
        raise PreconditionFailed("adherence needs a bounded graph")
    k = G.k
    top = G.level(k)
    comps = components(top, ell)
    where = {}
    for c in comps:
        for e in c:
            where[e] = c
    low = [e for e in G.edges if len(e) == ell]
    chosen: set = set()
    for f in low:
        fs = set(f)
        for c in comps:
            if id(c) in chosen:
                continue
            if any(fs.issubset(e) for e in c):
                chosen.add(id(c))
    keep = [c for c in comps if id(c) in chosen]
    edges = frozenset(e for c in keep for e in c)
    adh = Hypergraph(G.n, k, edges)
    dcon = len(keep) == 1 and spans(edges, G.n)
    return Adherence(adh, dcon)


# ---------------------------------------------------------------------------
# Transition digraph and walks


class WalkGraph:
    """Transition digraph of ordered ℓ-tuples for the ``k``-level of ``G``."""

    def __init__(self, G: Hypergraph, ell: int):
        H = G.uniform_part()
        k = H.k
        if not 1 <= ell <= k - 1:
            raise PreconditionFailed(f"ℓ={ell} outside 1..{k - 1}")
        self.n, self.k, self.ell, self.step = G.n, k, ell, k - ell
        self.graph = H
        trans: dict[tuple, list[tuple[tuple, tuple]]] = {}
        from itertools import combinations
        for e in H.sorted_edges:
            for S in combinations(e, ell):
                rest = [v for v in e if v not in S]
                for s in permutations(S):
                    lst = trans.setdefault(s, [])
                    for X in permutations(rest):
                        lst.append((X, (s + X)[-ell:]))
        self.trans = trans
        self.states = sorted(trans)

    def supported(self, s: Sequence[int]) -> bool:
        return tuple(s) in self.trans

    def shortest(self, a: tuple, b: tuple, min_steps: int = 1) -> list[tuple] | None:
        """Fewest blocks ``X_1..X_j`` (``j >= min_steps``) leading from ``a`` to ``b``."""
        a, b = tuple(a), tuple(b)
        if a not in self.trans:
            return None
        start = (a, 0)
        prev = {start: None}
        dq = deque([start])
        while dq:
            node = dq.popleft()
            s, j = node
            if s == b and j >= min_steps:
                out = []
                while prev[node] is not None:
                    node, X = prev[node]
                    out.append(X)
                return out[::-1]
            for X, s2 in self.trans.get(s, ()):
                nxt = (s2, min(j + 1, min_steps))
                if nxt not in prev:
                    prev[nxt] = (node, X)
                    dq.append(nxt)
        return None

    @staticmethod
    def sequence(start: tuple, blocks: Sequence[tuple], closed: bool = True) -> tuple:
        seq = tuple(start) + tuple(v for X in blocks for v in X)
        return seq[: len(seq) - len(start)] if closed else seq


def walk_problems(seq: Sequence[int], G: Hypergraph, k: int, ell: int) -> list[str]:
    """Check that a cyclic sequence is a closed ℓ-walk (cycle homomorphism) in ``G``."""
    step = k - ell
    out = []
    if len(seq) % step or len(seq) // step < min_cycle_edges(k, ell):
        return [f"length {len(seq)} is not an admissible cycle order"]
    H = G.uniform_part()
    for w in windows(seq, k, ell, cyclic=True):
        if len(set(w)) != k or not H.has_edge(w):
            out.append(f"window {w} is not an edge")
            break
    return out


def walk_between(G: Hypergraph, a: Sequence[int], b: Sequence[int], ell: int,
                 max_len: int | None = None, wg: WalkGraph | None = None) -> tuple:
    """Closed ℓ-walk through the states ``a`` and then ``b``; returns its cyclic vertex sequence.

    The sequence starts with ``a``.  ``max_len`` bounds the number of edges;
    raises :class:`NotFound` when no such walk exists within the bound.
    """
    wg = wg or WalkGraph(G, ell)
    a, b = tuple(a), tuple(b)
    if not wg.supported(a) or not wg.supported(b):
        raise NotFound("state not supported")
    if a == b:
        there: list = []
    else:
        there = wg.shortest(a, b, 1)
        if there is None:
            raise NotFound(f"{b} unreachable from {a}")
    back = wg.shortest(b, a, 1)
    if back is None:
        raise NotFound(f"{a} unreachable from {b}")
    loop = there + back
    tmin = min_cycle_edges(wg.k, ell)
    reps = max(1, math.ceil(tmin / len(loop)))
    blocks = loop * reps
    if max_len is not None and len(blocks) > max_len:
        raise NotFound(f"shortest closed walk has {len(blocks)} edges > {max_len}")
    return WalkGraph.sequence(a, blocks)


def path_orders(k: int, ell: int) -> list[int]:
    """Admissible ℓ-path orders ``N`` with ``2k < N <= 3k``."""
    return [N for N in range(2 * k + 1, 3 * k + 1) if (N - k) % (k - ell) == 0]


def path_through_vertex(R: Hypergraph, x: int, ell: int, len_bound: int | None = None,
                        budget: int = DEFAULT_BUDGET, supported_in: Hypergraph | None = None) -> tuple:
    """Vertex sequence of a homomorphic ℓ-path image hitting ``x`` once, at an interior position.

    For ℓ = 1 this is the reflection construction: an edge ``f ∋ x`` meeting an
    edge ``e ∌ x`` is walked out and back through ``x`` and padded inside ``e``.
    For larger ℓ the reflection does not align with the windows, so a bounded
    search over the admissible orders is used instead.

    With ``supported_in`` both end states must be states of that graph's walk
    digraph, so that the image can be joined to walks there.
    """
    k = R.k
    top = R.uniform_part()
    orders = [N for N in path_orders(k, ell) if len_bound is None or N <= len_bound]
    if not orders:
        raise NotFound("no admissible order within the bound")
    if supported_in is None:
        ends_ok = lambda seq: True
    else:
        sw = WalkGraph(supported_in, ell)
        ends_ok = lambda seq: sw.supported(seq[:ell]) and sw.supported(seq[-ell:])
    if ell == 1:
        seq = _reflect_through(top, x, k)
        if seq is not None and len(seq) in orders and ends_ok(seq):
            return seq
    for N in orders:
        seq = _search_through(top, x, k, ell, N, budget, ends_ok)
        if seq is not None:
            return seq
    raise NotFound(f"no ℓ-path image through {x} exactly once")


def _reflect_through(top: Hypergraph, x: int, k: int):
    edges = top.sorted_edges
    for f in edges:
        if x not in f:
            continue
        for e in edges:
            if x in e:
                continue
            common = [v for v in f if v in e]
            if not common:
                continue
            c = common[0]
            mid = [v for v in f if v not in (x, c)]
            pad = [v for v in e if v != c]
            # pad[::-1] c mid x mid[::-1] c pad ; windows are e, f, f, e
            seq = tuple(pad[::-1]) + (c,) + tuple(mid) + (x,) + tuple(mid[::-1]) + (c,) + tuple(pad)
            return seq
    return None


def _search_through(top: Hypergraph, x: int, k: int, ell: int, N: int, budget: int, ends_ok):
    wg = WalkGraph(top, ell)
    step = k - ell
    nodes = 0

    def rec(seq, hit):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("path_through_vertex budget exhausted")
        if len(seq) == N:
            return seq if hit and x not in seq[-ell:] and ends_ok(tuple(seq)) else None
        for X, _ in wg.trans.get(tuple(seq[-ell:]), ()):
            c = X.count(x)
            if c + hit > 1:
                continue
            out = rec(seq + X, hit + c)
            if out is not None:
                return out
        return None

    for s in wg.states:
        if x in s or not ends_ok(s + s):
            continue
        out = rec(s, 0)
        if out is not None:
            return tuple(out)
    return None


def path_image_problems(seq: Sequence[int], R: Hypergraph, k: int, ell: int) -> list[str]:
    out = []
    if len(seq) < k or (len(seq) - k) % (k - ell):
        return [f"order {len(seq)} not ≡ k mod {k - ell}"]
    top = R.uniform_part()
    for w in windows(seq, k, ell, cyclic=False):
        if len(set(w)) != k or not top.has_edge(w):
            out.append(f"window {w} not an edge")
    return out
