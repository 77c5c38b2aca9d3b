from fractions import Fraction

import pytest

from conftest import datum, wmha
from qgroupoid.algebra import Functional, functional_is_faithful
from qgroupoid.checks import run_checks
from qgroupoid.exactalg import Matrix, kron, unit_vec
from qgroupoid.wmha import (
    Wmha, build_wmha, canonical_integral, classify_left_integrals, classify_right_integrals,
    relate_integrals, verify_canonical_idempotent, wmha_checks,
)

F = Fraction


def test_every_wmha_identity_holds(name):
    results = run_checks(wmha_checks(wmha(name)), "wmha")
    assert [(r.id, r.witness) for r in results if not r.passed] == []


def test_build_wmha_verifies():
    assert build_wmha(datum("pair2")).nA == 4


def test_pair_groupoid_coproduct_splits_paths():
    w = wmha("pair3")
    # c_j b_i is the arrow (j, i); Delta sums over the intermediate point
    a = w.index(0, 2)
    assert w.delta_basis[a] == {(w.index(0, k), w.index(k, 2)): 1 for k in range(3)}
    assert w.eps.covector == tuple(F(int(j == i)) for j in range(3) for i in range(3))


def test_coproduct_is_not_unital_for_more_than_one_point():
    w = wmha("pair2")
    one = w.coproduct(w.one)
    assert one == w.E_A
    assert one != {(p, q): 1 for p in range(4) for q in range(4)}


def test_coproduct_of_unit_is_unital_for_one_point():
    w = wmha("pair1")
    assert w.coproduct(w.one) == {(0, 0): 1}


@pytest.mark.parametrize("key", ["pair3", "weighted", "cycle3"])
def test_integral_spaces_have_base_dimensions(key):
    w = wmha(key)
    assert classify_left_integrals(w).dimension == w.nB
    assert classify_right_integrals(w).dimension == w.nC


def test_canonical_integral_is_faithful_and_two_sided():
    w = wmha("weighted")
    phi = canonical_integral(w)
    assert functional_is_faithful(phi.functional)
    rel = relate_integrals(w, phi, phi)
    assert rel.y == w.one and rel.delta == w.one


def test_modular_element_of_twisted_integrals():
    w = wmha("weighted")
    d = w.datum
    y0 = (F(2), F(0), F(0), F(1))
    x0 = (F(1), F(1), F(0), F(1))
    left = w.left_integral(d.phi_B.right_twist(y0))
    right = w.right_integral(d.phi_C.right_twist(x0))
    rel = relate_integrals(w, left, right)
    assert left.functional.right_twist(rel.delta) == right.functional


def test_antipode_square_on_weighted_datum():
    w = wmha("weighted")
    d = w.datum
    assert w.S @ w.S == kron(d.sigma_C, d.sigma_B_inv)
    assert w.S @ w.S != Matrix.identity(16)


def test_transposition_twist_has_involutive_antipode():
    w = wmha("swap2")
    assert w.S @ w.S == Matrix.identity(4)


def test_canonical_idempotent_checks():
    assert all(r.passed for r in verify_canonical_idempotent(wmha("cycle3")))


def test_unknown_slice_is_rejected():
    w = wmha("pair2")
    with pytest.raises(ValueError):
        w.coproduct_slice(w.one, "middle", w.one)


def test_wmha_from_scratch_matches_cached():
    w = Wmha(datum("tracial"))
    assert w.delta_basis == wmha("tracial").delta_basis
