"""Exact two-phase simplex over rationals.

Solves ``min c·x  s.t.  A x = b, x >= 0`` with Bland's rule, so it cannot
cycle.  Everything is :class:`fractions.Fraction`; no tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Infeasible(ValueError):
    pass


class Unbounded(ValueError):
    pass


def _pivot(T: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pr = T[row]
    p = pr[col]
    if p != 1:
        T[row] = pr = [v / p for v in pr]
    nz = [j for j, w in enumerate(pr) if w]  # tableau rows are sparse
    for i, r in enumerate(T):
        if i != row:
            f = r[col]
            if f:
                for j in nz:
                    r[j] -= f * pr[j]
    basis[row] = col


def _run(T: list[list[Fraction]], basis: list[int], allowed: int) -> None:
    """Minimise the objective held in the last row of ``T`` (reduced costs),
    entering only columns ``< allowed``."""
    obj = T[-1]
    m = len(T) - 1
    while True:
        obj = T[-1]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Unbounded("objective is unbounded below")
        _pivot(T, basis, best[1], col)


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Return ``(optimal value, optimal x)``."""
    m, n = len(A), len(c)
    c = [Fraction(v) for v in c]
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if len(r) != n:
            raise ValueError("constraint row has the wrong length")
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
        rows.append((r, rhs))

    # phase 1: artificial variable per row, minimise their sum
    width = n + m
    T = []
    for i, (r, rhs) in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(r + art + [rhs])
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(width + 1):
            obj[j] -= row[j]
    for j in range(n, width):
        obj[j] += 1
    T.append(obj)
    _run(T, basis, width)
    if T[-1][-1] != 0:
        raise Infeasible("constraints have no nonnegative solution")

    # drive remaining artificials out of the basis, drop redundant rows
    i = 0
    while i < len(T) - 1:
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [r[:n] + [r[-1]] for r in T[:-1]]

    # phase 2
    obj = c + [Fraction(0)]
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [v - f * w for v, w in zip(obj, T[i])]
    T.append(obj)
    _run(T, basis, n)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return value, x
