"""Running the check suites on an instance and rendering the result."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .checks import FAIL, PASS, SKIP, CheckResult, jsonable, run_checks
from .dual import DualWmha, dual_checks
from .instances import Instance, dumps
from .separability import analyze, base_checks
from .wmha import Wmha, wmha_checks

SUITES = ("base", "wmha", "dual")
SUITE_CHOICES = SUITES + ("all",)


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    results: tuple
    meta: tuple = ()

    @property
    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIP: 0}
        for r in self.results:
            counts[r.status] += 1
        return {"total": len(self.results), "passed": counts[PASS],
                "failed": counts[FAIL], "skipped": counts[SKIP]}

    @property
    def ok(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "instance": dict(self.meta),
            "checks": [r.as_dict() for r in self.results],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        s = self.summary
        lines = [f"suite {self.suite}: {s['total']} checks, {s['passed']} passed, "
                 f"{s['failed']} failed, {s['skipped']} skipped"]
        width = max((len(r.id) for r in self.results), default=0)
        for r in self.results:
            line = f"{r.status.upper():4}  {r.suite:4}  {r.id:<{width}}  [{r.anchor}]"
            if not r.passed:
                if r.witness is not None:
                    line += "  witness: " + json.dumps(jsonable(r.witness), sort_keys=True)
                if r.detail:
                    line += f"  ({r.detail})"
            lines.append(line)
        return "\n".join(lines) + "\n"


def _prerequisite(suite: str, failed: list) -> CheckResult:
    first = failed[0] if failed else None
    witness = {"check": first.id, "witness": jsonable(first.witness)} if first else None
    return CheckResult("separability prerequisite", "E is a regular separability idempotent",
                       FAIL, witness, "the datum is not certified; the suite cannot be built", suite)


def _crashed(suite: str, exc: Exception) -> CheckResult:
    return CheckResult("construction", "the structure can be built from the datum", FAIL, None,
                       f"{type(exc).__name__}: {exc}", suite)


def verify_instance(inst: Instance, suite: str = "all", jobs: int = 1) -> VerificationReport:
    """Run the selected suites; results keep catalog order for any ``jobs``."""
    if suite not in SUITE_CHOICES:
        raise ValueError(f"unknown suite {suite!r}")
    wanted = SUITES if suite == "all" else (suite,)
    results: list = []

    try:
        sep_results, datum = analyze(inst.B, inst.C, inst.E)
    except ValueError as exc:
        sep_results, datum = [_crashed("base", exc)], None
    sep_results = [CheckResult(r.id, r.anchor, r.status, r.witness, r.detail, "base") for r in sep_results]
    if "base" in wanted:
        results.extend(sep_results)
        if datum is not None:
            results.extend(run_checks(base_checks(datum), "base", jobs))

    failed = [r for r in sep_results if not r.passed]
    w = None
    for name in ("wmha", "dual"):
        if name not in wanted:
            continue
        if datum is None:
            results.append(_prerequisite(name, failed))
            continue
        try:
            if w is None:
                w = Wmha(datum)
            if name == "wmha":
                checks = wmha_checks(w)
            else:
                checks = dual_checks(DualWmha(w))
        except Exception as exc:  # a structure that cannot be built fails its suite
            results.append(_crashed(name, exc))
            continue
        results.extend(run_checks(checks, name, jobs))

    return VerificationReport(suite, tuple(results), tuple(sorted(inst.meta.items())))


__all__ = ["VerificationReport", "verify_instance", "SUITES", "SUITE_CHOICES"]
