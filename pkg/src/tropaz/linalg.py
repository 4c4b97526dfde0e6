"""Exact rational linear algebra (fraction-free Gauss-Bareiss)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import SingularSystem


def solve_rational(A, b) -> list[Fraction]:
    """Solve A x = b exactly for square rational A.

    Rows are scaled to integers and reduced with Bareiss' fraction-free
    elimination; the final back substitution is done in Fractions.
    """
    n = len(A)
    rows = []
    for r in range(n):
        vals = [Fraction(v) for v in A[r]] + [Fraction(b[r])]
        den = 1
        for v in vals:
            den = lcm(den, v.denominator)
        rows.append([int(v * den) for v in vals])
    prev = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            raise SingularSystem("matrix is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(c + 1, n):
            for j in range(c + 1, n + 1):
                rows[r][j] = (rows[r][j] * rows[c][c] - rows[r][c] * rows[c][j]) // prev
            rows[r][c] = 0
        prev = rows[c][c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = Fraction(rows[r][n]) - sum(rows[r][j] * x[j] for j in range(r + 1, n))
        x[r] = s / rows[r][r]
    return x


def det_rational(A) -> Fraction:
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(v) for v in row] for row in A]
    sign = 1
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, n):
                    M[r][j] -= f * M[c][j]
    return sign * det
