from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from binfty.errors import DivisionByZero
from binfty.linalg import (SparseMatrix, Span, format_rational, rank, rank_kernel, rational,
                           rational_arith, rref)


def dense_rank(rows):
    """Textbook Gaussian elimination on a dense copy; independent of the sparse code."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def mat_vec(rows, v):
    return [sum(Fraction(a) * v.get(j, 0) for j, a in enumerate(r)) for r in rows]


small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


def test_add_halves_and_thirds():
    assert rational_arith("1/2", "1/3", "add") == Fraction(5, 6)


def test_reduced_on_construction():
    q = rational("2/4")
    assert q == Fraction(1, 2)
    assert format_rational(q) == "1/2"


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZero):
        rational_arith(0, None, "inv")


def test_zero_denominator_string_raises():
    with pytest.raises(DivisionByZero):
        rational("3/0")


def test_floats_are_refused():
    with pytest.raises(TypeError):
        rational(0.5)


def test_identity_has_full_rank_and_no_kernel():
    r, ker = rank_kernel(SparseMatrix.from_dense([[1, 0], [0, 1]]))
    assert (r, ker) == (2, [])


def test_row_of_ones_kernel():
    r, ker = rank_kernel(SparseMatrix.from_dense([[1, 1]]))
    assert r == 1
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == -v[1] != 0


def test_zero_matrix_kernel_is_everything():
    r, ker = rank_kernel(SparseMatrix.from_dense([[0] * 3] * 3))
    assert r == 0 and len(ker) == 3


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_dense_elimination(rows):
    assert rank(SparseMatrix.from_dense(rows)) == dense_rank(rows)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_of_transpose(rows):
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_vectors_are_killed_and_independent(rows):
    m = SparseMatrix.from_dense(rows)
    r, ker = rank_kernel(m)
    assert r + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in mat_vec(rows, v))
    assert len(rref(ker)) == len(ker)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_span_membership_of_combinations(rows, coeffs):
    vecs = [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]
    s = Span(vecs)
    combo = {}
    for c, v in zip(coeffs, vecs):
        for j, x in v.items():
            combo[j] = combo.get(j, 0) + c * x
    assert combo in s
    assert len(s) == dense_rank(rows)


def test_apply_matches_dense_product():
    rows = [[1, 2, 0], [0, -1, 3]]
    m = SparseMatrix.from_dense(rows)
    assert m.to_dense() == [[Fraction(x) for x in r] for r in rows]
    v = {0: 1, 1: Fraction(1, 2), 2: 2}
    out = m.apply(v)
    assert [out.get(i, 0) for i in range(2)] == mat_vec(rows, v)
