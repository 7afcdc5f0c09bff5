import random
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from helpers import laurent_polys, quadratic_specs, random_skew_int, random_unimodular
from poissonalg import intmat
from poissonalg.errors import HypothesisError
from poissonalg.exactalg import LaurentPoly
from poissonalg.poisson import QuadraticSpec
from poissonalg.skewfields import (SkewMatrix, apply_congruence, check_two_sided_witnesses,
                                   decide_iso_2x2, decide_iso_case_b, orbit_membership_bounded,
                                   rational_structure, search_gl_witness, skew_normal_form,
                                   verify_no_weyl_pair, witness_isomorphism)


def skew2(v) -> SkewMatrix:
    return SkewMatrix.from_upper(2, {(0, 1): v})


L2 = skew2(2)


def test_congruence_examples():
    assert apply_congruence([[1, 0], [0, 1]], L2) == L2
    assert apply_congruence([[0, 1], [1, 0]], L2) == skew2(-2)
    assert apply_congruence([[2, 0], [0, 2]], L2) == skew2(8)


def test_congruence_keeps_symbols():
    lam = SkewMatrix.from_upper(3, {(0, 1): "t1", (0, 2): "t2", (1, 2): "t3"})
    mu = apply_congruence([[1, 1, 0], [0, 1, 0], [0, 0, 1]], lam)
    assert str(mu[0, 2]) == str(SkewMatrix.from_upper(2, {(0, 1): "t2 + t3"})[0, 1])


def test_witness_isomorphism():
    assert witness_isomorphism([[1, 0], [0, 1]], L2).report
    res = witness_isomorphism([[0, 1], [1, 0]], L2)
    assert res.report and res.mu == skew2(-2)
    with pytest.raises(HypothesisError):
        witness_isomorphism([[1, 1], [1, 1]], L2)
    sym = SkewMatrix.from_upper(3, {(0, 1): "a", (0, 2): "b", (1, 2): "2*a - b"})
    assert witness_isomorphism([[1, 2, 0], [0, 1, 0], [-1, 0, 1]], sym, seed=3).report


def test_normal_form_examples():
    zero = skew_normal_form([[0, 0], [0, 0]])
    assert zero.r == 0 and zero.C == [[1, 0], [0, 1]]
    two = skew_normal_form([[0, 2], [-2, 0]])
    assert two.d == [2] and two.C == [[1, 0], [0, 1]]
    M = [[0, 2, 4], [-2, 0, 6], [-4, -6, 0]]
    res = skew_normal_form(M)
    assert res.d == [2]
    assert intmat.congruence(res.C, M) == res.block()


def test_normal_form_rejects_symmetric():
    with pytest.raises(ValueError):
        skew_normal_form([[0, 1], [1, 0]])


def test_rational_structure_examples():
    assert rational_structure(SkewMatrix.from_upper(2, {})).kind == "zero"
    st_ = rational_structure(skew2(Fraction(2, 3)))
    assert st_.kind == "cyclic" and st_.generator == skew2(Fraction(2, 3))[0, 1]
    assert st_.integerized == [[0, 1], [-1, 0]]
    free = rational_structure(SkewMatrix.from_upper(3, {(0, 1): "tau1", (0, 2): "tau2", (1, 2): "tau3"}))
    assert free.kind == "free" and free.rank == 3


def test_case_b_examples():
    dec = decide_iso_case_b(L2, skew2(-2))
    assert dec.isomorphic and dec.witness == [[0, 1], [1, 0]]
    assert decide_iso_case_b(L2, skew2(3)).verdict == "no"
    zero = SkewMatrix.from_upper(2, {})
    dec = decide_iso_case_b(zero, zero)
    assert dec.isomorphic and dec.witness == [[1, 0], [0, 1]]


def test_case_b_rejects_free():
    lam = SkewMatrix.from_upper(3, {(0, 1): "tau1", (0, 2): "tau2", (1, 2): "tau3"})
    with pytest.raises(HypothesisError):
        decide_iso_case_b(lam, lam)


def test_2x2_examples():
    assert decide_iso_2x2(skew2(Fraction(5, 7)), skew2(Fraction(-5, 7))).isomorphic
    assert decide_iso_2x2(skew2(1), skew2(2)).verdict == "no"
    assert decide_iso_2x2(skew2(0), skew2(0)).isomorphic


def test_orbit_examples():
    zero = SkewMatrix.from_upper(2, {})
    dec = orbit_membership_bounded(L2, zero, 2)
    assert dec.isomorphic and dec.witness == [[0, 0], [0, 0]]
    dec = orbit_membership_bounded(L2, skew2(8), 2)
    assert dec.isomorphic and apply_congruence(dec.witness, L2) == skew2(8)
    for budget in (1, 3):
        dec = orbit_membership_bounded(L2, skew2(1), budget)
        assert dec.verdict == "no-within-budget"
        assert "obstruction" in dec.details


def test_gl_search_with_symbols():
    lam = SkewMatrix.from_upper(3, {(0, 1): "a", (0, 2): "b", (1, 2): "c"})
    A = [[1, 0, 0], [1, 1, 0], [0, 0, -1]]
    mu = apply_congruence(A, lam)
    dec = search_gl_witness(lam, mu, 1)
    assert dec.isomorphic and apply_congruence(dec.witness, lam) == mu


def test_two_sided_witnesses():
    lam = SkewMatrix.from_upper(3, {(0, 1): "a", (0, 2): "b", (1, 2): "c"})
    A = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    mu = apply_congruence(A, lam)
    assert check_two_sided_witnesses(lam, mu, A, A)
    inv = SkewMatrix.from_upper(2, {(0, 1): 3})
    assert check_two_sided_witnesses(inv, inv, [[1, 0], [0, 1]], [[1, 0], [0, 1]])


def test_no_weyl_examples():
    q = QuadraticSpec([[0, Fraction(3, 2)], [Fraction(-3, 2), 0]])
    x1, x2 = LaurentPoly.gens(2)
    assert verify_no_weyl_pair(q, x1, x1 ** -1)
    f = x1 * x2 ** -1 + 3 - x2 ** 2
    assert verify_no_weyl_pair(q, f, f)
    assert verify_no_weyl_pair(q, f, x1 ** -1 * x2 + x2 ** -2)


def sympy_d_list(M):
    snf = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(len(M))]
    nonzero = [v for v in diag if v]
    return sorted(nonzero)[::2]


@pytest.mark.parametrize("seed", range(20))
def test_normal_form_matches_sympy_invariant_factors(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    M = random_skew_int(rng, n, 12)
    assert skew_normal_form(M).d == sympy_d_list(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normal_form_invariant_under_congruence(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    M = random_skew_int(rng, n, 15)
    A = random_unimodular(rng, n)
    res = skew_normal_form(M)
    res2 = skew_normal_form(intmat.congruence(A, M))
    assert res.d == res2.d
    assert intmat.determinant(res.C) in (1, -1)
    if res.d:
        entries = [abs(v) for row in M for v in row]
        g = 0
        for v in entries:
            g = gcd(g, v)
        assert res.d[0] == g
        assert all(b % a == 0 for a, b in zip(res.d, res.d[1:]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_case_b_witness_reverified(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    g = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    M = random_skew_int(rng, n, 6)
    lam = SkewMatrix([[g * v for v in row] for row in M])
    mu = apply_congruence(random_unimodular(rng, n), lam)
    dec = decide_iso_case_b(lam, mu)
    assert dec.isomorphic
    assert apply_congruence(dec.witness, lam) == mu
    assert witness_isomorphism(dec.witness, lam).report


@settings(max_examples=60, deadline=None)
@given(quadratic_specs(max_n=4), st.data())
def test_no_weyl_property(q, data):
    f = data.draw(laurent_polys(q.n, max_terms=6))
    g = data.draw(laurent_polys(q.n, max_terms=6))
    assert verify_no_weyl_pair(q, f, g)
