from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qgroupoid.exactalg import (
    Q, Matrix, NoSolution, RowSpace, UnderDetermined, dense, direct_sum, flatten, flip, kron,
    kron_vec, permutation_matrix_of_factors, permute_factors, same_span, solve_columns,
    solve_linear, sp_add, span_rank, sparse, sparse_kernel, unflatten,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def matrices(rows, cols):
    return st.lists(st.lists(rationals, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda r: Matrix(r, cols))


def test_q_refuses_floats():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(4) == 4
    with pytest.raises(TypeError):
        Q(0.5)


def test_inverse_of_known_matrix():
    M = Matrix([[2, 1], [1, 1]])
    assert M.inverse() == Matrix([[1, -1], [-1, 2]])
    assert M @ M.inverse() == Matrix.identity(2)


def test_singular_matrix_has_no_inverse():
    M = Matrix([[1, 2], [2, 4]])
    assert not M.is_invertible()
    assert M.rank() == 1
    with pytest.raises(ValueError):
        M.inverse()


def test_solve_linear_reports_failure_modes():
    A = Matrix([[1, 1], [2, 2]])
    with pytest.raises(NoSolution):
        solve_linear(A, [1, 3])
    with pytest.raises(UnderDetermined) as info:
        solve_linear(A, [1, 2])
    x = info.value.particular
    assert A.apply(x) == (1, 2)
    assert len(info.value.kernel) == 1


def test_solve_columns_names_the_bad_column():
    A = Matrix([[1, 0], [0, 0]])
    with pytest.raises(NoSolution) as info:
        solve_columns(A, [[1, 0], [0, 1]])
    assert info.value.column == 1


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3), matrices(3, 3))
def test_matmul_is_associative_with_inverse(X, Y):
    if X.is_invertible():
        assert X.inverse() @ (X @ Y) == Y


@settings(max_examples=40, deadline=None)
@given(matrices(2, 3), matrices(3, 2), matrices(2, 2), matrices(2, 2))
def test_kron_mixed_product(A, B, C, D):
    assert kron(A, C) @ kron(B, D) == kron(A @ B, C @ D)


@settings(max_examples=40, deadline=None)
@given(matrices(3, 4))
def test_kernel_is_annihilated_and_rank_nullity(M):
    ker = M.kernel()
    for v in ker:
        assert all(x == 0 for x in M.apply(v))
    assert M.rank() + len(ker) == M.ncols


@settings(max_examples=40, deadline=None)
@given(matrices(4, 3))
def test_row_space_rank_matches_dense_rank(M):
    assert span_rank(M.rows, 3) == M.rank()
    rs = RowSpace(3)
    rs.add_all(sparse(r) for r in M.rows)
    for r in M.rows:
        assert rs.contains(sparse(r))


@settings(max_examples=40, deadline=None)
@given(matrices(3, 4))
def test_sparse_kernel_matches_dense_kernel(M):
    ker = sparse_kernel([sparse(r) for r in M.rows], 4)
    assert same_span(ker, M.kernel(), 4)


def test_tensor_index_helpers():
    dims = (2, 3, 4)
    for idx in range(24):
        assert flatten(unflatten(idx, dims), dims) == idx
    v = kron_vec((1, 2), (3, 5, 7))
    assert flip(v, 2, 3) == kron_vec((3, 5, 7), (1, 2))
    P = permutation_matrix_of_factors((2, 3), (1, 0))
    assert P.apply(v) == kron_vec((3, 5, 7), (1, 2))
    assert permute_factors({1: Q(2)}, (2, 3), (1, 0)) == {2: 2}


def test_sparse_helpers_and_direct_sum():
    assert dense(sp_add({0: Q(1)}, {0: Q(-1), 2: Q(3)}), 3) == (0, 0, 3)
    assert direct_sum(Matrix([[1]]), Matrix([[2, 3]])) == Matrix([[1, 0, 0], [0, 2, 3]])
