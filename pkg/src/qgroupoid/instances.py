"""
Instance files and the generators that produce them.

An instance is a pair of algebras B, C given by structure constants together
with the coefficient matrix of E over the grid b_i (x) c_j. On disk::

    {
      "scalar": "rational",
      "algebras": {
        "B": {"dim": 2, "labels": ["f1", "f2"], "mult": [[0, 0, 0, "1/1"], ...]},
        "C": {...}
      },
      "E": [[0, 0, "1/1"], ...],
      "meta": {"generator": "pair", ...}
    }

Rationals are strings "p/q" in lowest terms; sparse entries are sorted, so
serializing a parsed file reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import FiniteAlgebra, direct_sum_algebra, function_algebra, matrix_algebra
from .checks import require
from .exactalg import ONE, ZERO, Matrix, direct_sum
from .separability import NotSeparability, SeparabilityDatum, base_checks, check_regular


class InputError(ValueError):
    """Malformed or unreadable input; the CLI maps it to exit status 2."""


@dataclass(frozen=True, eq=False)
class Instance:
    B: FiniteAlgebra
    C: FiniteAlgebra
    E: Matrix
    meta: dict = field(default_factory=dict)

    def certify(self) -> SeparabilityDatum:
        """The certified datum, or NotSeparability naming the first failed check."""
        d = SeparabilityDatum.certify(self.B, self.C, self.E)
        require(base_checks(d))
        if not check_regular(d):
            raise NotSeparability("regular", None, "S_B or S_C is not invertible")
        return d

    def to_dict(self) -> dict:
        return {
            "scalar": "rational",
            "algebras": {"B": algebra_to_dict(self.B), "C": algebra_to_dict(self.C)},
            "E": [[i, j, rational_str(x)] for i, r in enumerate(self.E.rows) for j, x in enumerate(r) if x],
            "meta": {str(k): str(v) for k, v in sorted(self.meta.items())},
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())

    def same_as(self, other: "Instance") -> bool:
        return self.to_dict() == other.to_dict()


# -- rationals and JSON -----------------------------------------------------------

def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s, where: str = "") -> Fraction:
    """A rational from "p/q" or "p"; floats are refused to keep arithmetic exact."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"{where}: expected a rational string \"p/q\", got {s!r}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {s!r} is not a rational") from exc
    if isinstance(s, str) and any(ch in s for ch in ".eE"):
        raise InputError(f"{where}: {s!r} is a decimal, write it as p/q")
    return x


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def algebra_to_dict(A: FiniteAlgebra) -> dict:
    return {
        "dim": A.dim,
        "labels": list(A.labels),
        "mult": [[i, j, k, rational_str(c)] for i, j, k, c in A.triples()],
    }


def _index(x, n: int, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: index {x!r} is not an integer")
    if not 0 <= x < n:
        raise InputError(f"{where}: index {x} out of range 0..{n - 1}")
    return x


def algebra_from_dict(data, name: str) -> FiniteAlgebra:
    if not isinstance(data, dict):
        raise InputError(f"algebra {name}: expected an object")
    dim = data.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError(f"algebra {name}: dim must be a positive integer")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim):
        raise InputError(f"algebra {name}: labels must be a list of length {dim}")
    mult = data.get("mult", [])
    if not isinstance(mult, list):
        raise InputError(f"algebra {name}: mult must be a list")
    table: dict = {}
    for t, entry in enumerate(mult):
        where = f"algebra {name} mult[{t}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise InputError(f"{where}: expected [i, j, k, \"p/q\"]")
        i, j, k = (_index(x, dim, where) for x in entry[:3])
        row = table.setdefault((i, j), {})
        if k in row:
            raise InputError(f"{where}: duplicate entry ({i}, {j}, {k})")
        row[k] = parse_rational(entry[3], where)
    return FiniteAlgebra(dim, table, [str(x) for x in labels] if labels else None, name)


def instance_from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance: expected a JSON object")
    if data.get("scalar") != "rational":
        raise InputError('instance: "scalar" must be "rational"')
    algs = data.get("algebras")
    if not isinstance(algs, dict) or "B" not in algs or "C" not in algs:
        raise InputError('instance: "algebras" must define B and C')
    B = algebra_from_dict(algs["B"], "B")
    C = algebra_from_dict(algs["C"], "C")
    entries = data.get("E")
    if not isinstance(entries, list):
        raise InputError('instance: "E" must be a list of [i, j, "p/q"]')
    rows = [[ZERO] * C.dim for _ in range(B.dim)]
    seen = set()
    for t, entry in enumerate(entries):
        where = f"E[{t}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError(f"{where}: expected [i, j, \"p/q\"]")
        i = _index(entry[0], B.dim, where)
        j = _index(entry[1], C.dim, where)
        if (i, j) in seen:
            raise InputError(f"{where}: duplicate entry ({i}, {j})")
        seen.add((i, j))
        rows[i][j] = parse_rational(entry[2], where)
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise InputError('instance: "meta" must be an object')
    return Instance(B, C, Matrix(rows, C.dim), {str(k): str(v) for k, v in meta.items()})


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def load_instance(path) -> Instance:
    return instance_from_dict(load_json(path))


# -- generators -----------------------------------------------------------------------

def _emit(inst: Instance) -> Instance:
    """Generators re-verify their own output before handing it out."""
    inst.certify()
    return inst


def gen_pair_groupoid(n: int) -> Instance:
    """B = C = K(X) with |X| = n and E = sum_x f_x (x) f_x."""
    if n < 1:
        raise InputError("pair groupoid needs n >= 1")
    K = function_algebra(n)
    return _emit(Instance(K, K, Matrix.identity(n), {"generator": "pair", "size": str(n)}))


def gen_twisted_functions(n: int, perm: Sequence[int]) -> Instance:
    """E = sum_x f_x (x) f_perm(x); ``perm`` lists the images of 1..n."""
    perm = list(perm)
    if n < 1 or sorted(perm) != list(range(1, n + 1)):
        raise InputError(f"perm must be a permutation of 1..{n}")
    K = function_algebra(n)
    rows = [[ONE if perm[x] - 1 == y else ZERO for y in range(n)] for x in range(n)]
    meta = {"generator": "twist", "size": str(n), "perm": " ".join(map(str, perm))}
    return _emit(Instance(K, K, Matrix(rows, n), meta))


def gen_weighted_matrix(n: int, weights: Sequence) -> Instance:
    """B = C = M_n on matrix units and E = sum_ij p_i e_ij (x) e_ij."""
    p = [parse_rational(x, "weights") for x in weights]
    if n < 1 or len(p) != n:
        raise InputError(f"need exactly {n} weights")
    if any(x == 0 for x in p) or sum(p) != 1:
        raise InputError("weights must be non-zero and sum to 1")
    M = matrix_algebra(n)
    nn = n * n
    rows = [[p[a // n] if a == b else ZERO for b in range(nn)] for a in range(nn)]
    meta = {"generator": "matrix", "size": str(n), "weights": " ".join(rational_str(x) for x in p)}
    return _emit(Instance(M, M, Matrix(rows, nn), meta))


def gen_direct_sum(first: Instance, second: Instance) -> Instance:
    """Block-diagonal E over B1 + B2 and C1 + C2."""
    first.certify()
    second.certify()
    B = direct_sum_algebra(first.B, second.B)
    C = direct_sum_algebra(first.C, second.C)
    meta = {"generator": "sum",
            "first": first.meta.get("generator", "?"),
            "second": second.meta.get("generator", "?")}
    return _emit(Instance(B, C, direct_sum(first.E, second.E), meta))


__all__ = [
    "Instance", "InputError", "rational_str", "parse_rational", "dumps",
    "algebra_to_dict", "algebra_from_dict", "instance_from_dict", "load_json",
    "load_instance", "gen_pair_groupoid", "gen_twisted_functions",
    "gen_weighted_matrix", "gen_direct_sum",
]
