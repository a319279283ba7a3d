"""Independent reference implementations used by the tests.

Nothing here imports loomlab; each check is written from the definitions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations


def cycle_windows(seq, k, ell):
    step = k - ell
    m = len(seq)
    return [frozenset(seq[(i + j) % m] for j in range(k)) for i in range(0, m, step)]


def path_windows(seq, k, ell):
    step = k - ell
    return [frozenset(seq[i:i + k]) for i in range(0, len(seq) - k + 1, step)]


def is_ell_cycle(seq, k, ell, edges, n=None):
    """Hamilton (when ``n`` is given) ℓ-cycle with every window in ``edges``."""
    edges = {frozenset(e) for e in edges}
    step = k - ell
    if len(set(seq)) != len(seq) or len(seq) % step or len(seq) < k:
        return False
    if n is not None and sorted(seq) != list(range(n)):
        return False
    W = cycle_windows(seq, k, ell)
    if any(len(w) != k or w not in edges for w in W):
        return False
    if len(set(W)) != len(W):
        return False
    return all(len(W[i] & W[(i + 1) % len(W)]) == ell for i in range(len(W)))


def is_ell_path(seq, k, ell, edges, disjoint_ends=True):
    edges = {frozenset(e) for e in edges}
    step = k - ell
    if len(set(seq)) != len(seq) or len(seq) < k or (len(seq) - k) % step:
        return False
    W = path_windows(seq, k, ell)
    if any(len(w) != k or w not in edges for w in W):
        return False
    if any(len(a & b) != ell for a, b in zip(W, W[1:])):
        return False
    if disjoint_ends and len(W) > 1 and W[0] & W[-1]:
        return False
    return not set(seq[:ell]) & set(seq[-ell:])


def brute_cycle_exists(n, k, ell, edges):
    """Permutation search with vertex 0 first (fine for n <= 9)."""
    edges = {frozenset(e) for e in edges}
    if n % (k - ell):
        return False
    for perm in permutations(range(1, n)):
        seq = (0,) + perm
        # every rotation by < step is a distinct cyclic placement of 0
        for r in range(k - ell):
            s = seq[r:] + seq[:r]
            if is_ell_cycle(s, k, ell, edges, n):
                return True
    return False


def brute_path_exists(n, k, ell, edges, f1, f2, disjoint_ends=True):
    mid = [v for v in range(n) if v not in f1 and v not in f2]
    for perm in permutations(mid):
        seq = tuple(f1) + perm + tuple(f2)
        if is_ell_path(seq, k, ell, edges, disjoint_ends):
            return True
    return False


def min_codegree(n, k, edges, d):
    counts = {S: 0 for S in combinations(range(n), d)}
    for e in edges:
        for S in combinations(sorted(e), d):
            counts[S] += 1
    return min(counts.values())


def ell_components(edges, ell):
    """Components of the graph on edges, adjacent when sharing >= ℓ vertices (quadratic)."""
    edges = [frozenset(e) for e in edges]
    comp = list(range(len(edges)))

    def find(x):
        while comp[x] != x:
            x = comp[x]
        return x

    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if len(edges[i] & edges[j]) >= ell:
                comp[find(i)] = find(j)
    groups = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), []).append(e)
    return list(groups.values())


def no_positive_closed_walk(n, k, edges, y):
    """For ℓ = 1: every closed 1-walk has non-positive ``y``-value.

    States are single vertices; an edge ``{u, x, w}`` gives arcs ``u -> w`` of
    value ``y[x] + y[w]``.  A positive closed walk is a positive cycle in this
    digraph; Floyd-Warshall on max-plus detects one.
    """
    assert k == 3
    NEG = None
    best = [[NEG] * n for _ in range(n)]
    for e in edges:
        for u, x, w in permutations(e):
            val = Fraction(y[x]) + Fraction(y[w])
            if best[u][w] is None or val > best[u][w]:
                best[u][w] = val
    for m in range(n):
        for i in range(n):
            if best[i][m] is None:
                continue
            for j in range(n):
                if best[m][j] is None:
                    continue
                cand = best[i][m] + best[m][j]
                if best[i][j] is None or cand > best[i][j]:
                    best[i][j] = cand
    return all(best[i][i] is None or best[i][i] <= 0 for i in range(n))


def cycle_colourings(seq, k, ell, c):
    """All proper ``c``-colourings of the ℓ-cycle on ``seq`` (backtracking along the order)."""
    m = len(seq)
    W = [tuple(seq[(i + j) % m] for j in range(k)) for i in range(0, m, k - ell)]
    pos = {v: i for i, v in enumerate(seq)}
    by_last = {}
    for w in W:
        by_last.setdefault(max(pos[v] for v in w), []).append(w)
    col = {}
    out = []

    def rec(i):
        if i == m:
            out.append(dict(col))
            return
        v = seq[i]
        for a in range(c):
            col[v] = a
            if all(len({col[u] for u in w}) == k for w in by_last.get(i, ())):
                rec(i + 1)
        del col[v]

    rec(0)
    return out
