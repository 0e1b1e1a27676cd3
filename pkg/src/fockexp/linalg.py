"""Small exact linear algebra: Bareiss determinant and rank, linear solves, interpolation."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _copy(rows):
    return [list(r) for r in rows]


def det(matrix: Sequence[Sequence]):
    """Determinant by fraction-free (Bareiss) elimination; exact for ints and Fractions."""
    a = _copy(matrix)
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
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
                return 0 * a[0][0]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(matrix: Sequence[Sequence]) -> int:
    """Exact rank by fraction-free elimination (integer-valued entries stay integral)."""
    a = _copy(matrix)
    if not a:
        return 0
    # clear denominators row by row so the elimination runs on integers
    for i, row in enumerate(a):
        if any(isinstance(x, Fraction) for x in row):
            den = 1
            for x in row:
                den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
            a[i] = [int(Fraction(x) * den) for x in row]
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _exact(x):
    # integers would otherwise turn into floats under true division
    return Fraction(x) if isinstance(x, int) else x


def solve(matrix: Sequence[Sequence], rhs: Sequence):
    """Gauss-Jordan solve of a square nonsingular system (exact for Fractions)."""
    n = len(matrix)
    a = [[_exact(x) for x in row] + [_exact(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n] for row in a]


def interpolate_2d(values, points: Sequence):
    """Coefficients ``c[i][j]`` of the polynomial sum c[i][j] x^i y^j taking ``values[a][b]`` at
    ``(points[a], points[b])``. Degree in each variable is ``len(points) - 1``."""
    k = len(points)
    vander = [[pt ** i for i in range(k)] for pt in points]
    # solve along y for each x-row, then along x for each y-power
    rows = [solve(vander, list(values[a])) for a in range(k)]
    out = [[None] * k for _ in range(k)]
    for j in range(k):
        col = solve(vander, [rows[a][j] for a in range(k)])
        for i in range(k):
            out[i][j] = col[i]
    return out
