"""Exact linear systems over the rationals by fraction-free elimination.

Rows are scaled to integers and reduced with Bareiss' one-step rule, in
which every division is exact, so entries stay bounded by minors of the
input rather than growing like products of pivots.  Back substitution runs
in :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_row(row: Sequence) -> list[int]:
    fr = [Fraction(x) for x in row]
    m = 1
    for x in fr:
        m = lcm(m, x.denominator)
    return [int(x * m) for x in fr]


def bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form on the first ``ncols`` columns.

    Columns past ``ncols`` (an augmented right side) are carried along.
    Returns the reduced rows and the pivot column of each leading row.
    """
    A = [list(r) for r in rows]
    m = len(A)
    width = len(A[0]) if A else 0
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            a_ic = A[i][c]
            row_i = A[i]
            row_r = A[r]
            for j in range(c + 1, width):
                num = piv * row_i[j] - a_ic * row_r[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("Bareiss division was not exact")
                row_i[j] = q
            row_i[c] = 0
        # rows above the pivot block must also be scaled consistently: they are untouched,
        # which is fine because echelon form only needs zeros below pivots
        prev = piv
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def solve_affine(
    matrix: Sequence[Sequence], rhs: Sequence, ncols: int | None = None
) -> tuple[list[Fraction] | None, list[list[Fraction]]]:
    """All solutions of ``matrix @ x = rhs``.

    Returns ``(particular, kernel_basis)``; ``particular`` is ``None`` when
    the system is inconsistent.  Free variables are set to 0 in the
    particular solution, and each kernel vector has a single free variable
    equal to 1.  Pass ``ncols`` when the matrix may have no rows.
    """
    m = len(matrix)
    n = ncols if ncols is not None else (len(matrix[0]) if m else 0)
    if m == 0:
        return [Fraction(0)] * n, [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    rows = [_integer_row(list(row) + [b]) for row, b in zip(matrix, rhs)]
    E, pivots = bareiss_echelon(rows, n)
    rank = len(pivots)
    consistent = all(E[i][n] == 0 for i in range(rank, m))
    free = [j for j in range(n) if j not in pivots]

    def back_substitute(b_col: list[int], free_values: dict[int, Fraction]) -> list[Fraction]:
        x = [Fraction(0)] * n
        for j, v in free_values.items():
            x[j] = v
        for i in range(rank - 1, -1, -1):
            c = pivots[i]
            s = Fraction(b_col[i])
            for j in range(c + 1, n):
                if E[i][j]:
                    s -= E[i][j] * x[j]
            x[c] = s / E[i][c]
        return x

    particular = back_substitute([E[i][n] for i in range(m)], {}) if consistent else None
    basis = []
    for f in free:
        basis.append(back_substitute([0] * m, {f: Fraction(1)}))
    return particular, basis


def rank(matrix: Sequence[Sequence]) -> int:
    if not matrix:
        return 0
    rows = [_integer_row(r) for r in matrix]
    _, pivots = bareiss_echelon(rows, len(rows[0]))
    return len(pivots)
