"""Shared hypothesis strategies and small builders for the test suite."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from poissonalg.exactalg import LaurentPoly
from poissonalg.poisson import QuadraticSpec

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=5),
)
nonzero_rationals = small_rationals.filter(bool)


def laurent_polys(n: int, max_terms: int = 6, max_exp: int = 3, laurent: bool = True):
    lo = -max_exp if laurent else 0
    exps = st.tuples(*[st.integers(min_value=lo, max_value=max_exp)] * n)
    return st.dictionaries(exps, small_rationals, max_size=max_terms).map(
        lambda d: LaurentPoly(n, d))


@st.composite
def antisym_matrices(draw, n: int, entries=small_rationals):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(entries)
            m[i][j] = v
            m[j][i] = -v
    return m


@st.composite
def quadratic_specs(draw, min_n: int = 1, max_n: int = 4):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return QuadraticSpec(draw(antisym_matrices(n)))


def weyl_like():
    """B = k[b] with zero bracket, {x, b} = -b x + 1, s = 1; generators (b, x)."""
    from poissonalg.poisson import IteratedPPASpec
    b = LaurentPoly.gen(2, 0)
    return IteratedPPASpec(2, [{}, {0: -b}], [{}, {0: LaurentPoly.constant(2, 1)}], [None, 1],
                           ("b", "x"))


def random_unimodular(rng, n: int, moves: int = 6, bound: int = 2):
    """Seeded product of elementary integer row moves and sign flips."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(moves):
        kind = rng.random()
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n > 1 and kind < 0.7:
            q = rng.choice([v for v in range(-bound, bound + 1) if v])
            a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        elif n > 1 and kind < 0.85:
            a[i], a[j] = a[j], a[i]
        else:
            a[i] = [-x for x in a[i]]
    return a


def random_skew_int(rng, n: int, bound: int = 20):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-bound, bound)
            m[i][j] = v
            m[j][i] = -v
    return m
