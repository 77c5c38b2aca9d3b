import json
import time
from fractions import Fraction

from conftest import instance
from qgroupoid.checks import FAIL, PASS, SKIP, Check, CheckResult, jsonable, run_checks
from qgroupoid.instances import instance_from_dict
from qgroupoid.report import VerificationReport, verify_instance


def test_run_checks_keeps_catalog_order_under_threads():
    def slow(k):
        def fn():
            time.sleep(0.01 * (5 - k))
            return None if k % 2 else {"k": k}
        return fn

    checks = [Check(f"c{k}", "a", slow(k)) for k in range(5)]
    serial = run_checks(checks, "s", 1)
    threaded = run_checks(checks, "s", 4)
    assert serial == threaded
    assert [r.id for r in threaded] == [f"c{k}" for k in range(5)]


def test_crashing_check_fails_with_detail():
    (r,) = run_checks([Check("boom", "a", lambda: 1 / 0)])
    assert r.status == FAIL and "ZeroDivisionError" in r.detail


def test_skips_do_not_pass():
    report = VerificationReport("base", (CheckResult("a", "x", PASS), CheckResult("b", "y", SKIP)))
    assert not report.ok and report.exit_code == 1
    assert report.summary == {"total": 2, "passed": 1, "failed": 0, "skipped": 1}


def test_empty_report_does_not_pass():
    assert VerificationReport("base", ()).exit_code == 1


def test_jsonable_renders_rationals_exactly():
    assert jsonable({"x": Fraction(2, 6), 1: (Fraction(3),)}) == {"1": ["3/1"], "x": "1/3"}


def test_text_report_lists_anchors_and_witnesses():
    data = json.loads(instance("pair2").dumps())
    data["E"][0][2] = "2/1"
    report = verify_instance(instance_from_dict(data), "base")
    text = report.to_text()
    assert "FAIL  base  E idempotent" in text and "[E E = E]" in text and "witness:" in text
    assert report.summary["failed"] >= 1 and report.summary["skipped"] >= 1


def test_broken_datum_fails_dependent_suites():
    data = json.loads(instance("pair2").dumps())
    data["E"] = [[0, 0, "1/1"]]
    report = verify_instance(instance_from_dict(data), "dual")
    (r,) = report.results
    assert r.id == "separability prerequisite" and r.witness["check"] == "left leg full"


def test_json_report_shape():
    report = verify_instance(instance("pair2"), "wmha")
    data = json.loads(report.to_json())
    assert set(data) == {"suite", "instance", "checks", "summary"}
    assert data["instance"] == {"generator": "pair", "size": "2"}
    assert data["summary"]["total"] == len(data["checks"])
