"""Named identity checks with basis-index witnesses."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

PASS, FAIL, SKIP = "pass", "fail", "skip"


class VerificationError(AssertionError):
    """An identity that must hold exactly failed; carries the check id and witness."""

    def __init__(self, check_id: str, witness=None, detail: str = ""):
        msg = f"{check_id} failed"
        if witness is not None:
            msg += f" at {witness!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.check_id = check_id
        self.witness = witness
        self.detail = detail


@dataclass(frozen=True)
class CheckResult:
    id: str
    anchor: str
    status: str
    witness: object = None
    detail: str = ""
    suite: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": jsonable(self.witness),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Check:
    """A deferred check: ``fn`` returns None on success or a witness on failure."""

    id: str
    anchor: str
    fn: Callable[[], object]

    def run(self, suite: str = "") -> CheckResult:
        try:
            w = self.fn()
        except VerificationError as exc:
            return CheckResult(self.id, self.anchor, FAIL, exc.witness, exc.detail or str(exc), suite)
        except Exception as exc:  # a crashed check is a failed check
            return CheckResult(self.id, self.anchor, FAIL, None, f"{type(exc).__name__}: {exc}", suite)
        if w is None or w is True:
            return CheckResult(self.id, self.anchor, PASS, None, "", suite)
        if w is False:
            w = None
        return CheckResult(self.id, self.anchor, FAIL, w, "", suite)


def run_checks(checks: Iterable[Check], suite: str = "", jobs: int = 1) -> list:
    """Run checks, returning results in catalog order whatever the worker count."""
    checks = list(checks)
    if jobs <= 1 or len(checks) < 2:
        return [c.run(suite) for c in checks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda c: c.run(suite), checks))


def require(checks: Iterable[Check]) -> None:
    """Run checks and raise on the first failure."""
    for c in checks:
        r = c.run()
        if not r.passed:
            raise VerificationError(c.id, r.witness, r.detail)


def first_failure(items: Iterable, pred: Callable) -> object:
    """The first item for which pred(item) is false, else None."""
    for it in items:
        if not pred(it):
            return it
    return None


def jsonable(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)
