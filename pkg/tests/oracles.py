"""Closed-form output brackets of the catalog families, written from the displayed formulas.

Each function returns ``{(a, b): c}`` meaning ``{a, b} = c a b`` for output
names ``a``, ``b``; pairs not listed are zero.  Indices are 1-based as in the
displays.
"""

from __future__ import annotations

from fractions import Fraction


def _sym(out: dict, a: str, b: str, c) -> None:
    c = Fraction(c)
    out[(a, b)] = c
    out[(b, a)] = -c


def affine(q) -> dict:
    n = len(q)
    out: dict = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                out[(f"y{i + 1}", f"y{j + 1}")] = Fraction(q[i][j])
    return out


def matrices(n: int, lam, p) -> dict:
    out: dict = {}
    idx = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    P = lambda a, b: Fraction(p[a - 1][b - 1])
    for (i, j) in idx:
        for (l, m) in idx:
            if not (i, j) < (l, m):
                continue
            if l >= i and m > j:
                c = P(l, i) + P(j, m)
            else:  # l > i, m <= j
                c = Fraction(lam) + P(l, i) + P(j, m)
            _sym(out, f"Y{l}{m}", f"Y{i}{j}", c)
    return out


def euclidean(n: int, P, Q, gamma, odd: bool) -> dict:
    out: dict = {}
    g = lambda a, b: Fraction(gamma[a - 1][b - 1])
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out[(f"w{i}", f"w{j}")] = g(i, j)
            c = (P[j - 1] + g(j, i)) if i < j else (Q[j - 1] + g(j, i))
            _sym(out, f"v{i}", f"w{j}", c)
            if i < j:
                _sym(out, f"v{i}", f"v{j}", Q[i - 1] - P[j - 1] + g(i, j))
        if odd:
            _sym(out, "u0", f"v{i}", -Fraction(P[i - 1]) / 2)
            _sym(out, "u0", f"w{i}", Fraction(P[i - 1]) / 2)
    return out


def symmetric(n: int) -> dict:
    out: dict = {}
    idx = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    for (i, j) in idx:
        for (l, m) in idx:
            if not (i, j) < (l, m):
                continue
            if (i == l < j < m) or (i < l < j == m) or (i < j == l < m):
                c = 1
            elif (i == j == l < m) or (i < j == l == m):
                c = 2
            else:
                continue
            _sym(out, f"z{i}{j}", f"z{l}{m}", c)
    return out


def antisymmetric(n: int) -> dict:
    out: dict = {}
    idx = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for (i, j) in idx:
        for (l, m) in idx:
            if (i, j) < (l, m) and len({i, j} & {l, m}) == 1:
                _sym(out, f"z{i}{j}", f"z{l}{m}", 1)
    return out


def for_params(params) -> dict:
    fam = params.family
    if fam == "affine":
        return affine(params.q_matrix)
    if fam == "matrices":
        return matrices(params.n, params.lam, params.p_matrix)
    if fam in ("symplectic_euclidean", "odd_euclidean"):
        return euclidean(params.n, params.P, params.Q, params.gamma, fam == "odd_euclidean")
    if fam == "symmetric":
        return symmetric(params.n)
    return antisymmetric(params.n)


def as_brackets(lam, names) -> dict:
    """Nonzero entries of a matrix as ``{(a, b): c}``."""
    out = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            if lam[i][j]:
                out[(a, b)] = lam[i][j]
    return out


def nonzero(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}
