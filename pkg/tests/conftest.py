from __future__ import annotations

from functools import lru_cache

import pytest

from qgroupoid.dual import DualWmha
from qgroupoid.instances import (
    gen_direct_sum, gen_pair_groupoid, gen_twisted_functions, gen_weighted_matrix,
)
from qgroupoid.wmha import Wmha


@lru_cache(maxsize=None)
def instance(name: str):
    if name.startswith("pair"):
        return gen_pair_groupoid(int(name[4:]))
    if name == "weighted":
        return gen_weighted_matrix(2, ["1/3", "2/3"])
    if name == "tracial":
        return gen_weighted_matrix(2, ["1/2", "1/2"])
    if name == "cycle3":
        return gen_twisted_functions(3, [2, 3, 1])
    if name == "swap2":
        return gen_twisted_functions(2, [2, 1])
    if name == "mixed":
        return gen_direct_sum(instance("pair2"), instance("weighted"))
    raise KeyError(name)


@lru_cache(maxsize=None)
def datum(name: str):
    return instance(name).certify()


@lru_cache(maxsize=None)
def wmha(name: str) -> Wmha:
    return Wmha(datum(name))


@lru_cache(maxsize=None)
def dual(name: str) -> DualWmha:
    return DualWmha(wmha(name))


# small instances used by the per-module tests; "mixed" is slower and kept to a few tests
CERTIFIED = ["pair1", "pair2", "pair3", "weighted", "tracial", "cycle3", "swap2"]


@pytest.fixture(params=CERTIFIED)
def name(request) -> str:
    return request.param


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    import re

    from test_acceptance import CRITERIA

    outcome = {}
    for status in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(status, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", getattr(rep, "nodeid", ""))
            if m and rep.when in ("call", "setup"):
                n = int(m.group(1))
                if outcome.get(n) != "FAIL":
                    outcome[n] = "PASS" if status == "passed" and rep.when == "call" else "FAIL"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {outcome.get(n, 'NOT RUN')}  {CRITERIA[n]}")
