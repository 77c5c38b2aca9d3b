from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qgroupoid.algebra import (
    DegenerateAlgebra, FiniteAlgebra, Functional, Multiplier, algebra_isomorphic_by_relabeling,
    check_structure, contract_leg, direct_sum_algebra, function_algebra, functional_is_faithful,
    homomorphism_witness, matrix_algebra, modular_automorphism, multiplier_basis, simple_tensor,
    tensor_algebra, tensor_map, tensor_mul,
)
from qgroupoid.exactalg import Matrix, same_span, sparse, unit_vec

F = Fraction


def upper_triangular() -> FiniteAlgebra:
    # basis e11, e12, e22
    return FiniteAlgebra.from_triples(3, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)],
                                      ["e11", "e12", "e22"], "T2")


@pytest.mark.parametrize("A", [matrix_algebra(2), matrix_algebra(3), function_algebra(4), upper_triangular()],
                         ids=lambda A: A.name)
def test_standard_algebras_are_unital_and_associative(A):
    rep = check_structure(A)
    assert rep.ok, rep.witnesses
    assert A.mul(A.one(), unit_vec(A.dim, 1)) == unit_vec(A.dim, 1)


def test_non_associative_table_is_caught():
    # e0 e0 = e1, e1 e0 = e0, everything else zero: (e0 e0) e0 = e0 but e0 (e0 e0) = 0
    A = FiniteAlgebra.from_triples(2, [(0, 0, 1, 1), (1, 0, 0, 1)])
    rep = check_structure(A)
    assert not rep.associative


def test_zero_product_algebra_is_degenerate():
    A = FiniteAlgebra(2, {})
    rep = check_structure(A)
    assert not rep.nondegenerate and not rep.unital
    with pytest.raises(DegenerateAlgebra):
        multiplier_basis(A)


def test_matrix_units_multiply():
    M = matrix_algebra(2)
    e = lambda i, j: unit_vec(4, 2 * i + j)
    assert M.mul(e(0, 1), e(1, 0)) == e(0, 0)
    assert M.mul(e(1, 0), e(1, 0)) == (0, 0, 0, 0)
    assert not M.is_commutative()


def test_weighted_trace_modular_automorphism():
    M = matrix_algebra(2)
    # omega(x) = tr(diag(1, 2) x); sigma(e_ij) = (q_i / q_j) e_ij
    omega = Functional(M, (F(1), F(0), F(0), F(2)))
    sigma = modular_automorphism(omega)
    assert sigma.column(1) == (0, F(1, 2), 0, 0)
    assert sigma.column(2) == (0, 0, F(2), 0)
    a, b = unit_vec(4, 1), unit_vec(4, 2)
    assert omega(M.mul(a, b)) == omega(M.mul(b, sigma.apply(a)))


def test_non_faithful_functional():
    M = matrix_algebra(2)
    omega = Functional(M, (F(1), F(0), F(0), F(0)))
    assert not functional_is_faithful(omega)
    with pytest.raises(ValueError):
        modular_automorphism(omega)


def test_transpose_is_anti_homomorphism():
    M = matrix_algebra(2)
    T = Matrix.from_columns([unit_vec(4, 0), unit_vec(4, 2), unit_vec(4, 1), unit_vec(4, 3)])
    assert homomorphism_witness(M, M, T, anti=True) is None
    assert homomorphism_witness(M, M, T) is not None


@pytest.mark.parametrize("A", [matrix_algebra(2), function_algebra(3), upper_triangular(),
                               direct_sum_algebra(matrix_algebra(2), function_algebra(1))],
                         ids=lambda A: A.name)
def test_multiplier_shortcut_matches_solved_multipliers(A):
    fast = multiplier_basis(A)
    solved = multiplier_basis(A, solve=True)
    assert len(fast) == len(solved) == A.dim
    assert all(m.is_valid() for m in solved)

    def flat(m: Multiplier):
        return sparse(tuple(x for r in m.L.rows for x in r) + tuple(x for r in m.R.rows for x in r))

    assert same_span([flat(m) for m in fast], [flat(m) for m in solved], 2 * A.dim ** 2)


def test_multiplier_product_matches_element_product():
    M = matrix_algebra(2)
    x, y = (1, 2, 0, 3), (0, 1, 1, 0)
    xy = Multiplier.from_element(M, x) * Multiplier.from_element(M, y)
    assert xy == Multiplier.from_element(M, M.mul(x, y))


def test_tensor_helpers_agree_with_tensor_algebra():
    A, B = matrix_algebra(2), function_algebra(2)
    AB = tensor_algebra(A, B)
    x = simple_tensor((1, 2, 0, 1), (3, 1))
    y = simple_tensor((0, 1, 1, 0), (1, -1))
    prod = tensor_mul((A, B), x, y)
    flat = {i * 2 + k: c for (i, k), c in prod.items()}
    dense = lambda t: tuple(t.get(i, 0) for i in range(8))
    xf = {i * 2 + k: c for (i, k), c in x.items()}
    yf = {i * 2 + k: c for (i, k), c in y.items()}
    assert AB.mul(dense(xf), dense(yf)) == dense(flat)
    assert contract_leg(x, 1, (1, 1)) == {(0,): 4, (1,): 8, (3,): 4}
    swap = Matrix([[0, 1], [1, 0]])
    assert tensor_map((None, swap), x) == simple_tensor((1, 2, 0, 1), (1, 3))


def test_relabeling():
    K = function_algebra(3)
    assert algebra_isomorphic_by_relabeling(K, K, [2, 0, 1])
    M = matrix_algebra(2)
    assert not algebra_isomorphic_by_relabeling(M, M, [1, 0, 3, 2])


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4),
       st.lists(small, min_size=4, max_size=4))
def test_m2_is_associative_on_random_elements(x, y, z):
    M = matrix_algebra(2)
    assert M.mul(M.mul(x, y), z) == M.mul(x, M.mul(y, z))


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_invertible_elements_have_inverses(x):
    M = matrix_algebra(2)
    el = M.element(x)
    if el.is_invertible():
        assert (el * el.inverse()).coeffs == M.one()
