import pytest
from hypothesis import given, settings, strategies as st

from hypermatch.linalg import (IntegerMatrix, column_echelon, normalize_diagonal, rank_mod_p,
                               smith_normal_form, smith_with_transforms)

from oracles import sympy_invariant_factors, sympy_rank


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def test_snf_examples():
    assert smith_normal_form(IntegerMatrix.from_dense([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    assert smith_normal_form(IntegerMatrix.identity(4)).invariant_factors == (1, 1, 1, 1)
    assert smith_normal_form(IntegerMatrix.zeros(3, 2)).invariant_factors == ()


def test_normalize_diagonal():
    assert normalize_diagonal([6, 4]) == (2, 12)
    assert normalize_diagonal([3, 1, -2]) == (1, 1, 6)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_matches_sympy(rows):
    m = IntegerMatrix.from_dense(rows)
    res = smith_normal_form(m)
    assert res.invariant_factors == sympy_invariant_factors(rows, len(rows[0]))
    assert res.rank == sympy_rank(rows) == rank_mod_p(m)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_sparse_and_dense_paths_agree(rows):
    m = IntegerMatrix.from_dense(rows)
    assert smith_normal_form(m, dense_threshold=0.0) == smith_normal_form(m, dense_threshold=1.0)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_transforms_diagonalize(rows):
    nr, nc = len(rows), len(rows[0])
    st_ = smith_with_transforms(rows, nr, nc)
    d = _mul(_mul(st_.left, rows), st_.right)
    for i in range(nr):
        for j in range(nc):
            expected = st_.diag[i] if i == j and i < len(st_.diag) else 0
            assert d[i][j] == expected
    eye_r = [[int(i == j) for j in range(nr)] for i in range(nr)]
    eye_c = [[int(i == j) for j in range(nc)] for i in range(nc)]
    assert _mul(st_.left, st_.left_inv) == eye_r
    assert _mul(st_.right, st_.right_inv) == eye_c
    assert normalize_diagonal(st_.diag) == smith_normal_form(IntegerMatrix.from_dense(rows)).invariant_factors


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_column_echelon(rows):
    nr, nc = len(rows), len(rows[0])
    s, w, w_inv = column_echelon(rows, nr, nc)
    aw = _mul(rows, w)
    assert all(aw[i][j] == 0 for i in range(nr) for j in range(s, nc))
    assert s == sympy_rank(rows)
    eye = [[int(i == j) for j in range(nc)] for i in range(nc)]
    assert _mul(w, w_inv) == eye


def test_matrix_helpers():
    a = IntegerMatrix.from_dense([[1, 0, 2], [0, 3, 0]])
    assert a.shape == (2, 3)
    assert a.nnz == 3
    assert a.transpose().to_dense() == [[1, 0], [0, 3], [2, 0]]
    assert (a @ a.transpose()).to_dense() == [[5, 0], [0, 9]]
    assert a.apply([1, 1, 1]) == [3, 3]
    with pytest.raises(ValueError):
        a @ a
