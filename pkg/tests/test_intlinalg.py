import math
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from varcount.errors import DimensionMismatch, ZeroMatrix
from varcount.intlinalg import (
    IntMatrix,
    SnfDecomposition,
    parse_matrix,
    smith_normal_form,
    stack_rows,
    verify_snf,
)
from varcount.variety import level_matrix

from conftest import EX42_D, EX42_U, EX42_V

EX41_E2 = [
    [1, 3, 2, 0, 0, 0],
    [5, 7, 5, 5, 1, 2],
    [5, 4, 3, 2, 6, 3],
    [1, 5, 3, 0, 0, 0],
    [3, 5, 6, 5, 4, 7],
    [3, 1, 5, 7, 3, 7],
]


def sympy_factors(rows):
    """Invariant factors by an independent implementation."""
    return tuple(abs(int(x)) for x in invariant_factors(Matrix(rows)) if x != 0)


def test_snf_worked_examples():
    A = IntMatrix.from_rows([[1, 2, 2], [3, 2, 5], [2, 5, 2]])
    s = smith_normal_form(A)
    assert s.d == (1, 1, 9)
    assert verify_snf(A, s)
    B = IntMatrix.from_rows(EX41_E2)
    s = smith_normal_form(B)
    assert s.d == (1, 1, 1, 1, 1, 291)
    assert verify_snf(B, s)


def test_snf_identity():
    s = smith_normal_form(IntMatrix.identity(4))
    assert s.d == (1, 1, 1, 1)
    assert s.U == IntMatrix.identity(4) and s.V == IntMatrix.identity(4)


def test_snf_zero_matrix():
    with pytest.raises(ZeroMatrix):
        smith_normal_form(IntMatrix.zeros(2, 3))


@pytest.mark.parametrize("l", [1, 2, 3])
def test_printed_transforms_verify(ex42, l):
    E = level_matrix(ex42, l)
    dec = SnfDecomposition(IntMatrix.from_rows(EX42_U[l]), IntMatrix.from_rows(EX42_V[l]), EX42_D[l])
    assert verify_snf(E, dec)
    assert smith_normal_form(E).d == EX42_D[l]


def test_verify_snf_rejects():
    A = IntMatrix.from_rows([[1, 2, 2], [3, 2, 5], [2, 5, 2]])
    other = smith_normal_form(IntMatrix.from_rows([[2, 0, 0], [0, 3, 0], [0, 0, 1]]))
    assert not verify_snf(A, other)
    bad_chain = SnfDecomposition(IntMatrix.identity(2), IntMatrix.identity(2), (2, 3))
    assert not verify_snf(IntMatrix.from_rows([[2, 0], [0, 3]]), bad_chain)
    with pytest.raises(DimensionMismatch):
        verify_snf(IntMatrix.identity(3), smith_normal_form(IntMatrix.identity(2)))


def test_stack_rows():
    rows = [[1, 2, 2], [3, 2, 5], [2, 5, 2]]
    E1 = stack_rows(IntMatrix.from_rows([r]) for r in rows)
    assert E1 == IntMatrix.from_rows(rows)
    single = IntMatrix.from_rows([[1, 2], [3, 4]])
    assert stack_rows([single]) == single
    assert stack_rows([IntMatrix.zeros(2, 3), IntMatrix.zeros(2, 3)]).shape == (4, 3)
    with pytest.raises(DimensionMismatch):
        stack_rows([IntMatrix.zeros(1, 2), IntMatrix.zeros(1, 3)])


def test_det_known():
    assert IntMatrix.from_rows([[1, 2, 2], [3, 2, 5], [2, 5, 2]]).det() == 9
    assert IntMatrix.from_rows([[0, 1], [1, 0]]).det() == -1
    assert IntMatrix.from_rows(EX41_E2).det() in (291, -291)


def test_parse_matrix():
    assert parse_matrix("1 2\n 3 4 # c\n\n") == IntMatrix.from_rows([[1, 2], [3, 4]])


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
)


@given(matrices)
@settings(max_examples=200, deadline=None)
def test_snf_verifies_and_matches_sympy(rows):
    A = IntMatrix.from_rows(rows)
    if A.is_zero():
        return
    s = smith_normal_form(A)
    assert verify_snf(A, s)
    assert s.d == sympy_factors(rows)


@given(matrices)
@settings(max_examples=50, deadline=None)
def test_snf_repeated_rows(rows):
    A = IntMatrix.from_rows(rows + rows[:1])
    if A.is_zero():
        return
    assert verify_snf(A, smith_normal_form(A))


def random_unimodular(rng, k, steps=12):
    M = IntMatrix.identity(k).to_rows()
    for _ in range(steps):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i == j:
            M[0] = [-x for x in M[0]]
            continue
        c = rng.randint(-3, 3)
        M[i] = [x + c * y for x, y in zip(M[i], M[j])]
    return IntMatrix.from_rows(M)


def test_invariant_factors_under_scrambling():
    rng = random.Random(7)
    for _ in range(100):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        if A.is_zero():
            continue
        B = random_unimodular(rng, r) @ A @ random_unimodular(rng, c)
        assert smith_normal_form(B).d == smith_normal_form(A).d


def test_product_of_factors_is_abs_det():
    rng = random.Random(11)
    for _ in range(100):
        k = rng.randint(1, 6)
        A = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(k)] for _ in range(k)])
        det = A.det()
        assert det == int(Matrix(A.to_rows()).det())
        if det:
            s = smith_normal_form(A)
            assert s.r == k and math.prod(s.d) == abs(det)
