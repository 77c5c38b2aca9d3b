import json

import pytest

from qgroupoid.cli import main
from qgroupoid.dualfile import check_dual_data


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


def test_gen_and_verify(run, tmp_path):
    path = tmp_path / "p2.json"
    assert run("gen", "pair", "--size", 2, "-o", path)[0] == 0
    code, out, _ = run("verify", path, "--suite", "all")
    assert code == 0
    assert out.startswith("suite all: ")
    assert "FAIL" not in out


def test_gen_writes_to_stdout(run):
    code, out, _ = run("gen", "twist", "--size", 3, "--perm", "2,3,1")
    assert code == 0
    assert json.loads(out)["meta"]["perm"] == "2 3 1"


@pytest.mark.parametrize("suite", ["base", "wmha", "dual"])
def test_single_suites(run, tmp_path, suite):
    path = tmp_path / "w.json"
    run("gen", "matrix", "--size", 2, "--weights", "1/3", "2/3", "-o", path)
    code, out, _ = run("verify", path, "--suite", suite, "--json")
    report = json.loads(out)
    assert code == 0 and report["suite"] == suite
    assert {c["suite"] for c in report["checks"]} == {suite}


def test_corrupted_coefficient_fails_with_witness(run, tmp_path):
    path = tmp_path / "p2.json"
    run("gen", "pair", "--size", 2, "-o", path)
    data = json.loads(path.read_text())
    data["E"][0][2] = "2/1"
    path.write_text(json.dumps(data))
    code, out, _ = run("verify", path, "--json")
    assert code == 1
    failing = [c for c in json.loads(out)["checks"] if c["status"] == "fail"]
    assert failing[0]["id"] == "E idempotent"
    assert failing[0]["witness"] is not None


def test_input_errors_exit_2(run, tmp_path):
    assert run("verify", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("verify", bad)[0] == 2
    assert run("gen", "matrix", "--size", 2, "--weights", "0.5", "0.5")[0] == 2
    assert run("gen", "twist", "--size", 2, "--perm", "1", "1")[0] == 2
    assert run("verify", bad, "--suite", "everything")[0] == 2
    assert run("frobnicate")[0] == 2


def test_gen_sum(run, tmp_path):
    a, b, s = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "s.json"
    run("gen", "pair", "--size", 1, "-o", a)
    run("gen", "pair", "--size", 2, "-o", b)
    assert run("gen", "sum", a, b, "-o", s)[0] == 0
    assert json.loads(s.read_text())["algebras"]["B"]["dim"] == 3


def test_dualize_and_reload(run, tmp_path):
    src, out = tmp_path / "w.json", tmp_path / "dual.json"
    run("gen", "matrix", "--size", 2, "--weights", "1/3", "2/3", "-o", src)
    assert run("dualize", src, "-o", out)[0] == 0
    data = json.loads(out.read_text())
    assert data["biduality"] == {"dimension": 16, "rank": 16}
    assert data["dual_of"]["dim"] == 16
    L = data["modular_element"]["L"]
    identity = [[i, i, "1/1"] for i in range(16)]
    assert L != identity
    assert all(r.passed for r in check_dual_data(data))
    code, text, _ = run("check-dual", out)
    assert code == 0 and "8 passed" in text


def test_dualize_pair_groupoid_gives_matrix_units(run, tmp_path):
    from qgroupoid.algebra import matrix_algebra
    from qgroupoid.instances import algebra_from_dict
    src, out = tmp_path / "p.json", tmp_path / "d.json"
    run("gen", "pair", "--size", 2, "-o", src)
    run("dualize", src, "-o", out)
    data = json.loads(out.read_text())
    assert algebra_from_dict(data["algebra"], "dual").same_structure(matrix_algebra(2))


def test_dualize_refuses_failing_instance(run, tmp_path):
    path = tmp_path / "p2.json"
    run("gen", "pair", "--size", 2, "-o", path)
    data = json.loads(path.read_text())
    data["E"][1][2] = "3/1"
    path.write_text(json.dumps(data))
    code, _, err = run("dualize", path, "-o", tmp_path / "d.json")
    assert code == 1 and "E idempotent" in err
    assert not (tmp_path / "d.json").exists()


def test_tampered_dual_file_fails(run, tmp_path):
    src, out = tmp_path / "w.json", tmp_path / "dual.json"
    run("gen", "matrix", "--size", 2, "--weights", "1/3", "2/3", "-o", src)
    run("dualize", src, "-o", out)
    data = json.loads(out.read_text())
    data["antipode"][0][2] = "5/1"
    out.write_text(json.dumps(data))
    code, text, _ = run("check-dual", out)
    assert code == 1 and "file antipode" in text
    data.pop("counit")
    out.write_text(json.dumps(data))
    assert run("check-dual", out)[0] == 2
