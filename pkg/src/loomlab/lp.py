"""Exact rational simplex for feasibility of ``{A x = b, x >= 0}``.

Phase I of the primal simplex with Bland's rule; every number is a
:class:`fractions.Fraction`, so verdicts are exact.  Infeasibility comes with a
Farkas certificate ``y`` satisfying ``yᵀA <= 0`` and ``yᵀb > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class LPResult:
    feasible: bool
    x: list[Fraction] | None = None  # primal solution, one entry per column
    y: list[Fraction] | None = None  # Farkas certificate when infeasible
    pivots: int = 0


def feasibility(columns: Sequence[Sequence[int | Fraction]], rhs: Sequence[int | Fraction],
                max_pivots: int = 1_000_000) -> LPResult:
    m = len(rhs)
    N = len(columns)
    for j, col in enumerate(columns):
        if len(col) != m:
            raise ValueError(f"column {j} has length {len(col)}, expected {m}")
    # Rows with negative rhs are negated so the artificial basis is feasible.
    sign = [(-1 if Fraction(b) < 0 else 1) for b in rhs]
    width = N + m
    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(sign[i] * columns[j][i]) for j in range(N)]
        row.extend(Fraction(1) if t == i else Fraction(0) for t in range(m))
        row.append(Fraction(sign[i] * rhs[i]))
        rows.append(row)
    basis = [N + i for i in range(m)]
    # reduced costs of the phase-I objective (sum of artificials)
    red = [Fraction(0)] * (width + 1)
    for j in range(N):
        red[j] = -sum((rows[i][j] for i in range(m)), Fraction(0))
    red[width] = -sum((rows[i][width] for i in range(m)), Fraction(0))

    pivots = 0
    while True:
        enter = next((j for j in range(width) if red[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # cannot happen: phase I is bounded below by 0
            raise RuntimeError("unbounded phase-I objective")
        _pivot(rows, red, leave, enter)
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")

    value = -red[width]
    if value == 0:
        x = [Fraction(0)] * N
        for i, j in enumerate(basis):
            if j < N:
                x[j] = rows[i][width]
        return LPResult(True, x=x, pivots=pivots)
    # y_i = 1 - (reduced cost of artificial i); undo the row sign flips.
    y = [sign[i] * (1 - red[N + i]) for i in range(m)]
    return LPResult(False, y=y, pivots=pivots)


def _pivot(rows, red, r, c):
    piv = rows[r][c]
    prow = [v / piv for v in rows[r]]
    rows[r] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
    f = red[c]
    if f:
        for j in nz:
            red[j] -= f * prow[j]


def check_primal(columns, rhs, x) -> bool:
    if any(v < 0 for v in x):
        return False
    for i, b in enumerate(rhs):
        if sum((Fraction(col[i]) * w for col, w in zip(columns, x)), Fraction(0)) != b:
            return False
    return True


def check_farkas(columns, rhs, y) -> bool:
    """``yᵀb > 0`` and ``yᵀa <= 0`` for every column ``a``."""
    if sum((Fraction(b) * v for b, v in zip(rhs, y)), Fraction(0)) <= 0:
        return False
    return all(sum((Fraction(a) * v for a, v in zip(col, y)), Fraction(0)) <= 0 for col in columns)
