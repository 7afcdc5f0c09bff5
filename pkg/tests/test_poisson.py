from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import antisym_matrices, laurent_polys, quadratic_specs, weyl_like
from poissonalg.catalog import FamilyParams, build
from poissonalg.exactalg import LaurentPoly
from poissonalg.poisson import (BracketTable, IteratedPPASpec, LaurentInputError, QuadraticSpec,
                                SpecError, bracket, center_lattice, is_poisson_variable_ideal,
                                ppa_to_table, quadratic_bracket, verify_all_steps, verify_jacobi,
                                verify_step_condition)


def om2(lam=1, p21=0):
    return build(FamilyParams("matrices", 2, lam=lam, p_matrix=[[0, -p21], [p21, 0]]))


def test_zero_spec_gives_zero_table():
    spec = IteratedPPASpec(3, [{}] * 3, [{}] * 3)
    table = ppa_to_table(spec)
    assert not list(table.nonzero_pairs())
    assert verify_jacobi(table)


def test_quadratic_spec_table():
    lam = [[0, 2, -1], [-2, 0, Fraction(1, 3)], [1, Fraction(-1, 3), 0]]
    gens = LaurentPoly.gens(3)
    alpha = [{j: gens[j].scale(lam[i][j]) for j in range(i)} for i in range(3)]
    table = ppa_to_table(IteratedPPASpec(3, alpha, [{}] * 3))
    assert table == QuadraticSpec(lam).table(laurent=False)
    assert table.value(2, 1) == (gens[1] * gens[2]).scale(Fraction(-1, 3))


def test_weyl_like_step_table():
    table = ppa_to_table(weyl_like())
    b, x = LaurentPoly.gens(2)
    assert table.value(1, 0) == -b * x + 1
    assert table.value(0, 1) == b * x - 1


def test_bracket_leibniz_example():
    q = QuadraticSpec([[0, 1], [-1, 0]])
    x1, x2 = LaurentPoly.gens(2)
    assert bracket(q.table(laurent=False), x1 * x2, x2 ** 2) == 2 * x1 * x2 ** 3


def test_om2_bracket_with_p():
    inst = om2(lam=Fraction(3, 4), p21=Fraction(2, 5))
    X11, X12, X21, X22 = LaurentPoly.gens(4)
    assert bracket(inst.table, X22, X11) == (X12 * X21).scale(Fraction(3, 4))


def test_polynomial_table_rejects_laurent_input():
    x1, x2 = LaurentPoly.gens(2)
    table = QuadraticSpec([[0, 1], [-1, 0]]).table(laurent=False)
    with pytest.raises(LaurentInputError):
        bracket(table, x1 ** -1, x2)


def test_jacobi_om2_passes():
    rep = verify_jacobi(om2(lam=1, p21=1).table)
    assert rep and rep.details["triples"] == 4


def test_jacobi_failure_has_witness():
    x1, x2, x3 = LaurentPoly.gens(3)
    table = BracketTable(3, {(1, 0): x3, (2, 0): x1})
    rep = verify_jacobi(table)
    assert not rep
    assert set(rep.witness["triple"]) == {"x1", "x2", "x3"}
    assert rep.witness["jacobiator"] != "0"


def test_step_conditions_diagonal_alpha_pass():
    spec = build(FamilyParams("affine", 3, q_matrix=[[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])).spec
    assert verify_all_steps(spec)


def test_weyl_like_step_condition_passes():
    assert verify_step_condition(weyl_like(), 1)


def test_weyl_like_with_wrong_alpha_sign_fails():
    spec = weyl_like()
    b = LaurentPoly.gen(2, 0)
    bad = spec.replace(alpha=[{}, {0: b}])
    rep = verify_step_condition(bad, 1)
    assert not rep
    assert rep.witness is not None


def test_spec_rejects_forward_references():
    x2 = LaurentPoly.gen(2, 1)
    with pytest.raises(SpecError):
        IteratedPPASpec(2, [{}, {0: x2}], [{}, {}])


def test_center_examples():
    assert center_lattice(QuadraticSpec([[0, 0], [0, 0]])).rank == 2
    lat = center_lattice(QuadraticSpec([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))
    assert lat.rank == 1 and lat.contains((0, 0, 1)) and not lat.contains((1, 0, 0))
    assert center_lattice(QuadraticSpec([[0, 2], [-2, 0]])).rank == 0


def test_variable_ideals():
    q = QuadraticSpec([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]).table(laurent=False)
    assert all(is_poisson_variable_ideal(q, s) for s in ([], [0], [1, 2], [0, 1, 2]))
    table = om2().table
    assert not is_poisson_variable_ideal(table, [0])
    assert is_poisson_variable_ideal(table, [0, 1, 2, 3])


@settings(max_examples=60, deadline=None)
@given(quadratic_specs(), st.data())
def test_quadratic_path_matches_biderivation(q, data):
    f = data.draw(laurent_polys(q.n, max_terms=4))
    g = data.draw(laurent_polys(q.n, max_terms=4))
    assert quadratic_bracket(q, f, g) == bracket(q.table(laurent=True), f, g)


@settings(max_examples=60, deadline=None)
@given(quadratic_specs(), st.data())
def test_bracket_antisymmetric_and_leibniz(q, data):
    table = q.table(laurent=True)
    f, g, h = (data.draw(laurent_polys(q.n, max_terms=3)) for _ in range(3))
    assert bracket(table, f, f) == LaurentPoly.zero(q.n)
    assert bracket(table, f, g) == -bracket(table, g, f)
    assert bracket(table, f, g * h) == bracket(table, f, g) * h + g * bracket(table, f, h)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=5).flatmap(antisym_matrices))
def test_quadratic_tables_satisfy_jacobi(lam):
    assert verify_jacobi(QuadraticSpec(lam).table())


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=4).flatmap(antisym_matrices))
def test_center_lattice_is_central(lam):
    q = QuadraticSpec(lam)
    table = q.table()
    for a in center_lattice(q).basis:
        z = LaurentPoly.monomial(a)
        assert all(not bracket(table, z, g) for g in LaurentPoly.gens(q.n))
