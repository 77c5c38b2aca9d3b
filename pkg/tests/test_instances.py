import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import instance
from qgroupoid.instances import (
    InputError, gen_direct_sum, gen_pair_groupoid, gen_twisted_functions, gen_weighted_matrix,
    instance_from_dict, load_instance, parse_rational, rational_str,
)
from qgroupoid.report import verify_instance
from qgroupoid.separability import NotSeparability


@pytest.mark.parametrize("key", ["pair1", "pair2", "weighted", "cycle3", "mixed"])
def test_round_trip_is_byte_identical(key, tmp_path):
    text = instance(key).dumps()
    back = instance_from_dict(json.loads(text))
    assert back.dumps() == text
    path = tmp_path / "inst.json"
    path.write_text(text)
    assert load_instance(path).same_as(instance(key))


@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=50))
def test_rational_strings_round_trip(x):
    s = rational_str(x)
    assert "/" in s and parse_rational(s) == x


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", "one", None, True, "1/0"])
def test_inexact_or_malformed_rationals_are_refused(bad):
    with pytest.raises(InputError):
        parse_rational(bad, "x")


def _pair2_dict():
    return json.loads(instance("pair2").dumps())


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(scalar="float"),
    lambda d: d["E"].append([5, 0, "1/1"]),
    lambda d: d["E"].append([0, 0, "1/1"]),
    lambda d: d["algebras"]["B"].update(dim=0),
    lambda d: d["algebras"]["C"]["mult"].append([0, 0, 0, "1/1"]),
    lambda d: d["algebras"].pop("C"),
    lambda d: d.update(meta=[]),
], ids=["scalar", "index", "duplicate E", "dim", "duplicate mult", "missing C", "meta"])
def test_malformed_instances_raise_input_error(mutate):
    data = _pair2_dict()
    mutate(data)
    with pytest.raises(InputError):
        instance_from_dict(data)


def test_generator_preconditions():
    with pytest.raises(InputError):
        gen_pair_groupoid(0)
    with pytest.raises(InputError):
        gen_twisted_functions(3, [1, 1, 2])
    with pytest.raises(InputError):
        gen_weighted_matrix(2, ["1/2", "1/3"])
    with pytest.raises(InputError):
        gen_weighted_matrix(2, ["1", "0"])


def test_negative_weights_are_allowed_when_nonzero():
    inst = gen_weighted_matrix(2, ["-1", "2"])
    assert inst.certify().phi_B.covector[0] == -1


def test_identity_permutation_reproduces_pair_groupoid():
    assert gen_twisted_functions(2, [1, 2]).E == gen_pair_groupoid(2).E


def test_direct_sum_needs_certified_inputs():
    broken = instance_from_dict({**_pair2_dict(), "E": [[0, 0, "2/1"], [1, 1, "1/1"]]})
    with pytest.raises(NotSeparability):
        gen_direct_sum(broken, instance("pair1"))


def test_sum_of_single_points_matches_pair_structure():
    s = gen_direct_sum(instance("pair1"), instance("pair1"))
    p = instance("pair2")
    assert s.B.same_structure(p.B) and s.E == p.E
    a = verify_instance(s, "all").summary
    b = verify_instance(p, "all").summary
    assert a == b


def test_sum_with_itself_doubles_dimensions():
    s = gen_direct_sum(instance("weighted"), instance("weighted"))
    assert s.B.dim == 8 and s.E.shape == (8, 8)


@pytest.mark.parametrize("key", ["pair1", "pair2", "tracial", "cycle3", "swap2"])
def test_generated_instances_pass_every_suite(key):
    report = verify_instance(instance(key), "all")
    assert report.ok, [r.id for r in report.failures()]
