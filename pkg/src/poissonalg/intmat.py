"""Small exact integer/rational matrix routines.

Matrices are plain lists of lists.  Nothing here is clever; sizes in this
package stay below ~12x12.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def congruence(a: Sequence[Sequence[int]], m: Sequence[Sequence]) -> list[list]:
    """``A M A^T``."""
    return matmul(matmul(a, m), transpose(a))


def is_antisymmetric(m: Sequence[Sequence]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == -m[j][i] for i in range(n) for j in range(i, n)
    )


def determinant(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    inv = rational_inverse(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def hnf_with_transform(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ m == H``.  ``H`` is in
    row echelon form, pivots positive, entries above each pivot reduced into
    ``[0, pivot)``; zero rows sit at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(map(int, row)) for row in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        # Euclid down the column until one nonzero entry remains
        while True:
            nz = [i for i in range(r, rows) if h[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // h[r][c]
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if h[i][c]:
                        done = False
            if done:
                break
        if not h[r][c]:
            continue
        if h[r][c] < 0:
            h[r] = [-a for a in h[r]]
            u[r] = [-a for a in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
    return h, u


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Hermite basis of the row lattice, zero rows dropped."""
    if not rows:
        return []
    h, _ = hnf_with_transform(rows)
    return [row for row in h if any(row)]


def left_kernel(m: Sequence[Sequence[int]]) -> Matrix:
    """Hermite basis of ``{v in Z^rows : v @ m == 0}``."""
    rows = len(m)
    if rows == 0:
        return []
    h, u = hnf_with_transform(m)
    basis = [u[i] for i in range(rows) if not any(h[i])]
    return hnf(basis)


def in_row_lattice(vec: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Membership of ``vec`` in the lattice spanned by an HNF basis."""
    v = list(vec)
    for row in basis:
        c = next(i for i, a in enumerate(row) if a)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def common_denominator(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
