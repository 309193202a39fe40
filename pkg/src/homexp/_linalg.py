"""Exact determinants for small integer or rational matrices."""
from __future__ import annotations

from fractions import Fraction


def det_exact(rows) -> Fraction | int:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting.

    Integer input stays integer; Fraction input is handled by scaling each
    row to a common denominator first.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    scale = Fraction(1)
    if any(isinstance(x, Fraction) for r in a for x in r):
        for r in a:
            den = 1
            for x in r:
                den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
            scale /= den
            r[:] = [int(Fraction(x) * den) for x in r]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    d = sign * a[n - 1][n - 1]
    return d if scale == 1 else d * scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
