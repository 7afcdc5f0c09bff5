import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonalg import intmat


def _random(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_hnf_transform_and_shape(seed):
    rng = random.Random(seed)
    m = _random(rng, rng.randint(1, 5), rng.randint(1, 5))
    H, U = intmat.hnf_with_transform(m)
    assert intmat.determinant(U) in (1, -1)
    assert intmat.matmul(U, m) == H
    # echelon with positive pivots, entries above each pivot reduced
    last = -1
    for r, row in enumerate(H):
        nz = [c for c, v in enumerate(row) if v]
        if not nz:
            assert all(not any(x) for x in H[r:])
            break
        p = nz[0]
        assert p > last and row[p] > 0
        assert all(0 <= H[k][p] < row[p] for k in range(r))
        last = p


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_left_kernel_against_sympy_rank(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 5), rng.randint(1, 5)
    m = _random(rng, rows, cols, 4)
    if rng.random() < 0.5 and rows > 1:
        m[-1] = [a + b for a, b in zip(m[0], m[1 % rows])]
    kernel = intmat.left_kernel(m)
    for v in kernel:
        assert intmat.matmul([v], m) == [[0] * cols]
    assert len(kernel) == rows - sympy.Matrix(m).rank()


def test_lattice_membership():
    basis = intmat.hnf([[2, 0], [0, 3]])
    assert intmat.in_row_lattice([4, 9], basis)
    assert not intmat.in_row_lattice([1, 0], basis)


def test_inverses():
    a = [[2, 1], [1, 1]]
    assert intmat.matmul(a, intmat.unimodular_inverse(a)) == intmat.identity(2)
    with pytest.raises(ValueError):
        intmat.unimodular_inverse([[2, 0], [0, 1]])
    assert intmat.determinant([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]]) == 0


def test_congruence_and_helpers():
    m = [[0, 2], [-2, 0]]
    assert intmat.congruence([[0, 1], [1, 0]], m) == [[0, -2], [2, 0]]
    assert intmat.is_antisymmetric(m) and not intmat.is_antisymmetric([[1, 0], [0, 0]])
    assert intmat.lcm(4, 6) == 12
    assert intmat.content([4, -6, 0]) == 2
