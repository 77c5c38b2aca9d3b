import random
from fractions import Fraction

import pytest

from conftest import datum, instance
from qgroupoid.algebra import Functional, function_algebra, functional_is_faithful, matrix_algebra
from qgroupoid.checks import run_checks
from qgroupoid.exactalg import Matrix, kron_vec, unit_vec
from qgroupoid.separability import (
    NotSeparability, SeparabilityDatum, analyze, base_checks, radon_nikodym, solve_antipodal_maps,
    twisted_modular_automorphism,
)

F = Fraction


def test_pair_groupoid_datum():
    d = datum("pair2")
    assert d.S_B == Matrix.identity(2) and d.S_C == Matrix.identity(2)
    assert d.phi_B.covector == (1, 1) and d.phi_C.covector == (1, 1)
    assert d.sigma_B == Matrix.identity(2) and d.sigma_C == Matrix.identity(2)


def test_single_point_is_trivial():
    d = datum("pair1")
    assert d.E == Matrix([[1]]) and d.phi_B.covector == (1,)


def test_weighted_matrix_derived_data():
    d = datum("weighted")
    p = (F(1, 3), F(2, 3))
    e = lambda i, j: unit_vec(4, 2 * i + j)
    for i in range(2):
        for j in range(2):
            assert d.S_B.apply(e(i, j)) == e(j, i)
            assert d.S_C.apply(e(i, j)) == tuple(p[j] / p[i] * x for x in e(j, i))
            assert d.phi_B(e(i, j)) == (1 / p[i] if i == j else 0)
    assert d.sigma_C.apply(e(0, 1)) == tuple(2 * x for x in e(0, 1))


def test_tracial_weights_have_trivial_modular_group():
    d = datum("tracial")
    assert d.sigma_C == Matrix.identity(4) and d.sigma_B == Matrix.identity(4)


def test_three_cycle_twist():
    # E = sum_x f_x (x) f_perm(x) with perm = (1 2 3); S_B(g) = g o perm^-1
    d = datum("cycle3")
    perm = [1, 2, 0]
    for b in range(3):
        assert d.S_B.column(b) == unit_vec(3, perm[b])
    assert d.sigma_C == Matrix.identity(3)


def test_identity_twist_matches_pair_groupoid():
    from qgroupoid.instances import gen_twisted_functions
    assert gen_twisted_functions(3, [1, 2, 3]).E == instance("pair3").E


def test_base_coproduct_not_multiplicative_on_m2():
    d = datum("weighted")
    e11 = unit_vec(4, 0)
    D = d.delta_B(e11)
    expected = [F(0)] * 16
    expected[0 * 4 + 0] = F(1, 3)   # e11 (x) e11
    expected[1 * 4 + 2] = F(2, 3)   # e12 (x) e21
    assert D == tuple(expected)
    assert d.BB.mul(D, D) != d.delta_B(d.B.mul(e11, e11))


def test_base_coproduct_multiplicative_on_commutative_bases():
    d = datum("cycle3")
    for k in range(3):
        for l in range(3):
            uk, ul = unit_vec(3, k), unit_vec(3, l)
            assert d.delta_B(d.B.mul(uk, ul)) == d.BB.mul(d.delta_B(uk), d.delta_B(ul))


def test_base_checks_pass(name):
    results = run_checks(base_checks(datum(name)))
    assert [r.id for r in results if not r.passed] == []


def test_scaled_e_fails_idempotence():
    K = function_algebra(2)
    with pytest.raises(NotSeparability) as info:
        SeparabilityDatum.certify(K, K, Matrix([[2, 0], [0, 2]]))
    assert info.value.check_id == "E idempotent"
    assert info.value.witness is not None


def test_partial_e_fails_fullness_and_skips_dependents():
    K = function_algebra(2)
    results, d = analyze(K, K, Matrix([[1, 0], [0, 0]]))
    assert d is None
    status = {r.id: r.status for r in results}
    assert status["E idempotent"] == "pass"
    assert status["left leg full"] == "fail"
    assert status["S_B defining relation"] == "skip"


def test_wrong_shape_is_rejected():
    K = function_algebra(2)
    with pytest.raises(ValueError):
        analyze(K, K, Matrix([[1, 0, 0]]))


def test_antipodal_maps_on_weighted_matrix():
    inst = instance("weighted")
    S_B, S_C = solve_antipodal_maps(inst.B, inst.C, inst.E)
    assert S_B == datum("weighted").S_B and S_C == datum("weighted").S_C


@pytest.mark.parametrize("key", ["pair3", "weighted", "cycle3"])
def test_radon_nikodym_random_functionals(key):
    d = datum(key)
    rng = random.Random(7)
    n = d.nB
    seen_non_faithful = False
    for trial in range(12):
        cov = tuple(F(rng.randint(-4, 4), rng.randint(1, 5)) for _ in range(n))
        if trial == 0:
            cov = (F(0),) * n
        g = Functional(d.B, cov)
        rn = radon_nikodym(d, d.phi_B, g)
        for i in range(n):
            e = unit_vec(n, i)
            assert g(e) == d.phi_B(d.B.mul(e, rn.y))
        assert rn.invertible == functional_is_faithful(g)
        seen_non_faithful |= not rn.faithful
    assert seen_non_faithful


def test_radon_nikodym_twisted_kms():
    d = datum("weighted")
    y = (F(1), F(1), F(0), F(2))
    f = d.phi_B.right_twist(y)
    from qgroupoid.algebra import modular_automorphism
    assert modular_automorphism(f) == twisted_modular_automorphism(d, y)


def test_distinguished_functionals_normalize_e():
    d = datum("weighted")
    # (phi_B (x) i)E = 1 and (i (x) phi_C)E = 1
    assert d.right_leg(d.phi_B.covector) == d.one_C
    assert d.left_leg(d.phi_C.covector) == d.one_B
    assert kron_vec(d.one_B, d.one_C) != d.E_tensor
