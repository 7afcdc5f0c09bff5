from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import laurent_polys
from poissonalg.catalog import FAMILIES, FamilyParams, build, draw_instances
from poissonalg.errors import HypothesisError
from poissonalg.exactalg import LaurentPoly
from poissonalg.poisson import QuadraticSpec, bracket, is_poisson_variable_ideal
from poissonalg.torus import (TorusData, derive_s, enumerate_variable_hstable, eta_act, resolve_s,
                              verify_thm17)


def om2(lam=Fraction(3), p21=Fraction(1, 2)):
    return build(FamilyParams("matrices", 2, lam=lam, p_matrix=[[0, -p21], [p21, 0]]))


def test_eta_action_om2():
    lam, p21 = Fraction(3), Fraction(1, 2)
    inst = om2(lam, p21)
    td = inst.torus
    X11, _, _, X22 = LaurentPoly.gens(4)
    assert td.etas[3] == (p21, 0, -p21, lam)
    assert eta_act(td, 3, X11) == X11.scale(p21 - p21)
    assert eta_act(td, 3, X22) == X22.scale(lam)
    assert not eta_act(td, 3, LaurentPoly.constant(4, 5))


def test_affine_fails_nonzero_eigenvalue():
    q = [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]
    inst = build(FamilyParams("affine", 3, q_matrix=q))
    rep = verify_thm17(inst.spec, inst.torus)
    assert not rep
    assert rep.details["eta_matches_alpha"]
    assert not rep.details["eigenvalues_nonzero"]
    assert rep.details["grading"]


def test_om2_passes_with_bound_16():
    rep = verify_thm17(om2().spec, om2().torus)
    assert rep and rep.details["bound"] == 16


def test_symmetric_eigenvalues():
    inst = build(FamilyParams("symmetric", 2))
    rep = verify_thm17(inst.spec, inst.torus)
    assert rep
    assert set(rep.details["eigenvalues"]) == {"-2", "-4"}
    assert set(derive_s(inst.spec, inst.torus)[1:]) <= {Fraction(-2), Fraction(-4)}


def test_derive_s_matrices_is_lambda():
    lam = Fraction(-5, 7)
    inst = om2(lam)
    s = derive_s(inst.spec, inst.torus)
    assert all(v == lam for v in s if v is not None)
    assert s[1:] == [lam] * 3


def test_resolve_s_disagreement():
    inst = om2(Fraction(2))
    bad = inst.spec.replace(s=[None, None, None, Fraction(7)])
    with pytest.raises(HypothesisError):
        resolve_s(bad, inst.torus)


def test_wrong_eta_is_reported():
    inst = om2()
    etas = list(inst.torus.etas)
    etas[3] = tuple(v + 1 for v in etas[3])
    rep = verify_thm17(inst.spec, TorusData(4, inst.torus.weights, etas))
    assert not rep and not rep.details["eta_matches_alpha"]
    assert rep.witness["step"] == "X22"


def test_hstable_quadratic_all_subsets():
    table = QuadraticSpec([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]).table(laurent=False)
    subsets = enumerate_variable_hstable(table)
    assert len(subsets) == 8
    assert subsets[0] == ()


def test_hstable_om2_strict_subset():
    subsets = enumerate_variable_hstable(om2().table)
    assert () in subsets and (0, 1, 2, 3) in subsets
    assert (0,) not in subsets
    assert len(subsets) < 16


@pytest.mark.parametrize("family", FAMILIES)
def test_hstable_agrees_with_ideal_check(family):
    inst = draw_instances(1, 1, {"matrices": 2, "affine": 3, "symplectic_euclidean": 2,
                                 "odd_euclidean": 1, "symmetric": 2, "antisymmetric": 3},
                          [family])[0]
    subsets = set(enumerate_variable_hstable(inst.table))
    from itertools import combinations
    n = inst.spec.n
    for k in range(n + 1):
        for c in combinations(range(n), k):
            assert (c in subsets) == is_poisson_variable_ideal(inst.table, c)


@pytest.mark.parametrize("family", FAMILIES)
def test_hstable_closed_under_union(family):
    inst = draw_instances(2, 1, {"matrices": 2, "affine": 3, "symplectic_euclidean": 2,
                                 "odd_euclidean": 1, "symmetric": 2, "antisymmetric": 3},
                          [family])[0]
    subsets = [set(s) for s in enumerate_variable_hstable(inst.table)]
    for a in subsets:
        for b in subsets:
            assert tuple(sorted(a | b)) in {tuple(sorted(s)) for s in subsets}


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["matrices", "symplectic_euclidean", "odd_euclidean", "symmetric"]), st.data())
def test_eta_is_poisson_derivation(family, data):
    inst = draw_instances(data.draw(st.integers(0, 50)), 1,
                          {"matrices": 2, "symplectic_euclidean": 1, "odd_euclidean": 1, "symmetric": 2},
                          [family])[0]
    n = inst.spec.n
    i = data.draw(st.integers(1, n - 1))
    f = data.draw(laurent_polys(n, max_terms=3, max_exp=2, laurent=False))
    g = data.draw(laurent_polys(n, max_terms=3, max_exp=2, laurent=False))
    td, table = inst.torus, inst.table
    lhs = eta_act(td, i, bracket(table, f, g))
    rhs = bracket(table, eta_act(td, i, f), g) + bracket(table, f, eta_act(td, i, g))
    assert lhs == rhs


@pytest.mark.parametrize("family", [f for f in FAMILIES])
def test_brackets_are_homogeneous(family):
    for inst in draw_instances(3, 2, {"matrices": 2, "affine": 3, "symplectic_euclidean": 2,
                                      "odd_euclidean": 1, "symmetric": 2, "antisymmetric": 3},
                               [family]):
        td = inst.torus
        for i in range(inst.spec.n):
            for j in range(i):
                v = inst.table.value(i, j)
                if v:
                    want = tuple(a + b for a, b in zip(td.weights[i], td.weights[j]))
                    assert td.weight(v) == want
