"""
Command-line interface.

    qgroupoid gen pair --size N
    qgroupoid gen twist --size N --perm 2 3 1
    qgroupoid gen matrix --size N --weights 1/3 2/3
    qgroupoid gen sum a.json b.json
    qgroupoid verify FILE [--suite base|wmha|dual|all] [--json] [--jobs N]
    qgroupoid dualize FILE [-o OUT]
    qgroupoid check-dual FILE

Exit status: 0 when everything passes, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import jsonable
from .dual import DualWmha
from .dualfile import check_dual_data, dual_to_dict
from .instances import (
    InputError, dumps, gen_direct_sum, gen_pair_groupoid, gen_twisted_functions,
    gen_weighted_matrix, load_instance, load_json,
)
from .report import SUITE_CHOICES, VerificationReport, verify_instance
from .separability import NotSeparability
from .wmha import Wmha

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _split_list(values: list) -> list:
    """Accept both ``--perm 2 3 1`` and ``--perm 2,3,1``."""
    return [p for v in values for p in v.replace(",", " ").split()]


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc.strerror or exc}") from exc


def cmd_gen(args) -> int:
    try:
        if args.kind == "pair":
            inst = gen_pair_groupoid(args.size)
        elif args.kind == "twist":
            perm = []
            for p in _split_list(args.perm):
                try:
                    perm.append(int(p))
                except ValueError as exc:
                    raise InputError(f"perm entry {p!r} is not an integer") from exc
            inst = gen_twisted_functions(args.size, perm)
        elif args.kind == "matrix":
            inst = gen_weighted_matrix(args.size, _split_list(args.weights))
        else:
            inst = gen_direct_sum(load_instance(args.first), load_instance(args.second))
    except NotSeparability as exc:
        raise InputError(f"refusing to emit an uncertified instance: {exc}") from exc
    _write(inst.dumps(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_instance(load_instance(args.file), args.suite, args.jobs)
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return report.exit_code


def _short_failures(report: VerificationReport) -> str:
    return "\n".join(f"  {r.suite}: {r.id}  witness: {jsonable(r.witness)}" for r in report.failures())


def cmd_dualize(args) -> int:
    inst = load_instance(args.file)
    report = verify_instance(inst, "all", args.jobs)
    if not report.ok:
        sys.stderr.write("cannot dualize: verification failed\n" + _short_failures(report) + "\n")
        return EXIT_FAIL
    data = json.loads(dumps(dual_to_dict(DualWmha(Wmha(inst.certify())))))
    data["dual_of"]["meta"] = dict(report.meta)
    bad = [r for r in check_dual_data(data, args.jobs) if not r.passed]
    if bad:
        sys.stderr.write("dual file failed its own re-check: " + ", ".join(r.id for r in bad) + "\n")
        return EXIT_FAIL
    _write(dumps(data), args.output)
    return EXIT_OK


def cmd_check_dual(args) -> int:
    results = check_dual_data(load_json(args.file), args.jobs)
    report = VerificationReport("file", tuple(results))
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return report.exit_code


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgroupoid",
        description="Build and verify the quantum groupoid of a regular separability idempotent and its dual.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a certified instance file")
    kinds = gen.add_subparsers(dest="kind", required=True)
    pair = kinds.add_parser("pair", help="pair groupoid on n points")
    twist = kinds.add_parser("twist", help="function algebra with E twisted by a permutation")
    matrix = kinds.add_parser("matrix", help="weighted matrix-unit datum on M_n")
    total = kinds.add_parser("sum", help="direct sum of two instance files")
    for p in (pair, twist, matrix):
        p.add_argument("--size", type=_positive, required=True)
    twist.add_argument("--perm", nargs="+", required=True, help="images of 1..n, e.g. 2 3 1")
    matrix.add_argument("--weights", nargs="+", required=True, help="n rationals p/q summing to 1")
    total.add_argument("first")
    total.add_argument("second")
    for p in (pair, twist, matrix, total):
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="run the check suites on an instance")
    verify.add_argument("file")
    verify.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    verify.add_argument("--json", action="store_true", help="emit the report as JSON")
    verify.add_argument("--jobs", type=_positive, default=1, help="worker threads")
    verify.set_defaults(func=cmd_verify)

    dualize = sub.add_parser("dualize", help="write the dual structure of a verified instance")
    dualize.add_argument("file")
    dualize.add_argument("-o", "--output", help="output file (default: stdout)")
    dualize.add_argument("--jobs", type=_positive, default=1)
    dualize.set_defaults(func=cmd_dualize)

    check = sub.add_parser("check-dual", help="re-check a dualize output file on its own")
    check.add_argument("file")
    check.add_argument("--json", action="store_true")
    check.add_argument("--jobs", type=_positive, default=1)
    check.set_defaults(func=cmd_check_dual)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
