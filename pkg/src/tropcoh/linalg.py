"""Exact linear algebra over Q.

Rank is computed by fraction-free (Bareiss) elimination on integer matrices;
rational input is scaled row by row to integers first.  Matrices here are
small (a few hundred rows at most) and dense lists of lists are fine.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        qs = [Fraction(x) for x in row]
        den = 1
        for q in qs:
            den = den * q.denominator // math.gcd(den, q.denominator)
        out.append([int(q * den) for q in qs])
    return out


def rank(rows: Matrix, ncols: int | None = None) -> int:
    """Rank over Q.  ``ncols`` is only needed to make empty matrices unambiguous."""
    a = _integer_rows(rows)
    if not a:
        return 0
    m, n = len(a), len(a[0]) if ncols is None else ncols
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, n):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def independent_rows(rows: Matrix) -> list[int]:
    """Indices of a greedily chosen maximal linearly independent subset of rows."""
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, pc in zip(basis, pivots):
            if v[pc] != 0:
                f = v[pc] / b[pc]
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((j for j, x in enumerate(v) if x != 0), None)
        if pc is not None:
            basis.append(v)
            pivots.append(pc)
            chosen.append(idx)
    return chosen


def solve_coordinates(basis: Matrix, vector: Sequence) -> list[Fraction]:
    """Coefficients ``c`` with ``sum_i c_i basis[i] = vector``; basis rows independent.

    Raises ValueError if the vector is not in the span.
    """
    k = len(basis)
    if k == 0:
        if any(Fraction(x) != 0 for x in vector):
            raise ValueError("vector not in span of empty basis")
        return []
    n = len(vector)
    # augmented system: columns are basis vectors, one equation per coordinate
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(vector[j])] for j in range(n)]
    row = 0
    piv_cols = []
    for c in range(k):
        piv = next((i for i in range(row, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("basis rows are dependent")
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][c]
        aug[row] = [x / p for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        piv_cols.append(c)
        row += 1
    if any(aug[i][k] != 0 for i in range(row, n)):
        raise ValueError("vector not in span")
    return [aug[i][k] for i in range(k)]


def primitive(vector: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Split an integer vector into ``(primitive vector, content)``."""
    g = 0
    for x in vector:
        g = math.gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in vector), 0
    return tuple(int(x) // g for x in vector), g
