"""
Finite-dimensional associative algebras over the rationals.

An algebra is given by sparse structure constants ``e_i e_j = sum_k t[i,j,k] e_k``.
Elements are handled internally as dense coefficient tuples; :class:`Element`,
:class:`Functional` and :class:`Multiplier` are the public wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exactalg import (
    ONE, ZERO, Matrix, NoSolution, Q, RowSpace, UnderDetermined, dot,
    solve_linear, sparse, unit_vec, zero_vec,
)


class NoKms(ValueError):
    """No modular (KMS) automorphism exists for the functional."""


class DegenerateAlgebra(ValueError):
    pass


class FiniteAlgebra:
    """Associative algebra on a finite basis, defined by structure constants."""

    def __init__(self, dim: int, table: dict, labels: Sequence[str] | None = None,
                 name: str = ""):
        if dim < 1:
            raise ValueError("algebra dimension must be positive")
        self.dim = dim
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("label count does not match dimension")
        clean = {}
        for (i, j), out in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"structure constant index ({i},{j}) out of range")
            row = {}
            for k, c in out.items():
                if not 0 <= k < dim:
                    raise ValueError(f"structure constant output index {k} out of range")
                c = Q(c)
                if c:
                    row[k] = c
            if row:
                clean[(i, j)] = row
        self.table = clean

    @classmethod
    def from_triples(cls, dim: int, triples: Iterable, labels=None, name: str = "") -> "FiniteAlgebra":
        table: dict = {}
        for i, j, k, c in triples:
            row = table.setdefault((i, j), {})
            row[k] = row.get(k, ZERO) + Q(c)
        return cls(dim, table, labels, name)

    def triples(self) -> list:
        """Nonzero structure constants as sorted (i, j, k, coeff) tuples."""
        return sorted((i, j, k, c) for (i, j), row in self.table.items() for k, c in row.items())

    def __repr__(self):
        return f"FiniteAlgebra({self.name or '?'}, dim={self.dim})"

    def same_structure(self, other: "FiniteAlgebra") -> bool:
        return self.dim == other.dim and self.table == other.table

    # -- arithmetic on raw coefficient tuples / sparse dicts ---------------

    def basis_product(self, i: int, j: int) -> dict:
        return self.table.get((i, j), {})

    def mul_sp(self, x: dict, y: dict) -> dict:
        out: dict = {}
        table = self.table
        for i, a in x.items():
            for j, b in y.items():
                row = table.get((i, j))
                if row:
                    ab = a * b
                    for k, c in row.items():
                        v = out.get(k, ZERO) + ab * c
                        if v:
                            out[k] = v
                        else:
                            del out[k]
        return out

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        table = self.table
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            for j, b in ys:
                row = table.get((i, j))
                if row:
                    ab = a * b
                    for k, c in row.items():
                        out[k] += ab * c
        return tuple(out)

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of b -> x b."""
        return Matrix.from_columns([self.mul(x, unit_vec(self.dim, j)) for j in range(self.dim)],
                                   self.dim)

    def right_matrix(self, x: Sequence) -> Matrix:
        """Matrix of a -> a x."""
        return Matrix.from_columns([self.mul(unit_vec(self.dim, j), x) for j in range(self.dim)],
                                   self.dim)

    # -- distinguished elements ---------------------------------------------

    @cached_property
    def unit(self) -> tuple | None:
        n = self.dim
        rows, rhs = [], []
        for i in range(n):
            target = unit_vec(n, i)
            for side in (0, 1):
                for p in range(n):
                    row = [ZERO] * n
                    for k in range(n):
                        prod = self.table.get((k, i) if side == 0 else (i, k), {})
                        row[k] = prod.get(p, ZERO)
                    rows.append(row)
                    rhs.append(target[p])
        try:
            return solve_linear(Matrix(rows, n), rhs)
        except (NoSolution, UnderDetermined):
            return None

    def one(self) -> tuple:
        if self.unit is None:
            raise DegenerateAlgebra(f"{self!r} has no unit")
        return self.unit

    def basis(self, i: int) -> "Element":
        return Element(self, unit_vec(self.dim, i))

    def element(self, coeffs: Sequence) -> "Element":
        return Element(self, tuple(Q(c) for c in coeffs))

    def zero(self) -> "Element":
        return Element(self, zero_vec(self.dim))

    def is_commutative(self) -> bool:
        return all(self.table.get((i, j), {}) == self.table.get((j, i), {})
                   for i in range(self.dim) for j in range(i + 1, self.dim))


@dataclass(frozen=True, eq=False)
class Element:
    parent: FiniteAlgebra
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.parent.dim:
            raise ValueError("coefficient length does not match algebra dimension")

    def _check(self, other: "Element"):
        if other.parent is not self.parent:
            raise ValueError("elements of different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.parent, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.parent, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Element":
        return Element(self.parent, tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.parent, self.parent.mul(self.coeffs, other.coeffs))
        s = Q(other)
        return Element(self.parent, tuple(s * x for x in self.coeffs))

    def __rmul__(self, s):
        s = Q(s)
        return Element(self.parent, tuple(s * x for x in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.parent is other.parent and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.parent), self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_invertible(self) -> bool:
        return self.parent.left_matrix(self.coeffs).is_invertible()

    def inverse(self) -> "Element":
        """Two-sided inverse in a unital algebra."""
        A = self.parent
        x = solve_linear(A.left_matrix(self.coeffs), A.one())
        if A.mul(x, self.coeffs) != A.one():
            raise ValueError("element has a right inverse only")
        return Element(A, x)

    def __repr__(self):
        terms = [f"{c}*{self.parent.labels[i]}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class Functional:
    parent: FiniteAlgebra
    covector: tuple

    def __post_init__(self):
        if len(self.covector) != self.parent.dim:
            raise ValueError("covector length does not match algebra dimension")

    def __call__(self, x) -> Fraction:
        coeffs = x.coeffs if isinstance(x, Element) else x
        return dot(self.covector, coeffs)

    def __eq__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        return self.parent is other.parent and self.covector == other.covector

    def __hash__(self):
        return hash((id(self.parent), self.covector))

    def is_zero(self) -> bool:
        return not any(self.covector)

    def gram(self) -> Matrix:
        """G[i][j] = omega(e_i e_j)."""
        A = self.parent
        n = A.dim
        rows = []
        for i in range(n):
            rows.append(tuple(sum((self.covector[k] * c for k, c in A.basis_product(i, j).items()), ZERO)
                              for j in range(n)))
        return Matrix(rows, n)

    def compose(self, T: Matrix, source: FiniteAlgebra) -> "Functional":
        """The functional a -> omega(T a) on ``source``."""
        return Functional(source, T.T().apply(self.covector))

    def right_twist(self, y: Sequence) -> "Functional":
        """The functional a -> omega(a y)."""
        return Functional(self.parent, self.parent.right_matrix(y).T().apply(self.covector))

    def left_twist(self, y: Sequence) -> "Functional":
        """The functional a -> omega(y a)."""
        return Functional(self.parent, self.parent.left_matrix(y).T().apply(self.covector))


@dataclass(frozen=True, eq=False)
class Multiplier:
    """A pair (L, R) with L(b) = m b and R(a) = a m."""

    parent: FiniteAlgebra
    L: Matrix
    R: Matrix

    @classmethod
    def from_element(cls, A: FiniteAlgebra, x: Sequence) -> "Multiplier":
        return cls(A, A.left_matrix(x), A.right_matrix(x))

    def is_valid(self) -> bool:
        return multiplier_defect(self.parent, self.L, self.R) is None

    def as_element(self) -> tuple:
        """L(1), available for unital parents."""
        return self.L.apply(self.parent.one())

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        # (m n)(b) = m(n b); a(m n) = (a m) n
        return Multiplier(self.parent, self.L @ other.L, other.R @ self.R)

    def __eq__(self, other):
        if not isinstance(other, Multiplier):
            return NotImplemented
        return self.parent is other.parent and self.L == other.L and self.R == other.R

    def __hash__(self):
        return hash((id(self.parent), self.L, self.R))


# -- structural checks --------------------------------------------------------

@dataclass
class StructureReport:
    associative: bool
    nondegenerate: bool
    idempotent: bool
    unital: bool
    unit: tuple | None
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.associative and self.nondegenerate and self.idempotent and self.unital


def associativity_witness(A: FiniteAlgebra):
    n = A.dim
    for i in range(n):
        ei = {i: ONE}
        for j in range(n):
            ij = A.basis_product(i, j)
            for k in range(n):
                left = A.mul_sp(ij, {k: ONE})
                right = A.mul_sp(ei, A.basis_product(j, k))
                if left != right:
                    return (i, j, k)
    return None


def check_structure(A: FiniteAlgebra) -> StructureReport:
    n = A.dim
    wit = {}
    assoc = associativity_witness(A)
    if assoc is not None:
        wit["associative"] = assoc
    # a -> (a e_j)_j and a -> (e_j a)_j must be injective
    right_ann = RowSpace(n)
    left_ann = RowSpace(n)
    for j in range(n):
        for p in range(n):
            right_ann.add({i: A.basis_product(i, j).get(p, ZERO) for i in range(n)
                           if A.basis_product(i, j).get(p)})
            left_ann.add({i: A.basis_product(j, i).get(p, ZERO) for i in range(n)
                          if A.basis_product(j, i).get(p)})
    nondeg = right_ann.rank == n and left_ann.rank == n
    if not nondeg:
        wit["nondegenerate"] = (right_ann.rank, left_ann.rank)
    products = RowSpace(n)
    for (i, j), row in sorted(A.table.items()):
        products.add(row)
    idem = products.rank == n
    if not idem:
        wit["idempotent"] = products.rank
    unit = A.unit
    return StructureReport(assoc is None, nondeg, idem, unit is not None, unit, wit)


def has_local_units(A: FiniteAlgebra) -> bool:
    """At finite dimension a full-basis local unit is a unit."""
    return A.unit is not None


def multiplier_defect(A: FiniteAlgebra, L: Matrix, R: Matrix):
    """First basis pair violating the multiplier compatibility equations, or None."""
    n = A.dim
    Lc = [L.column(k) for k in range(n)]
    Rc = [R.column(k) for k in range(n)]
    for i in range(n):
        ei = unit_vec(n, i)
        for j in range(n):
            ej = unit_vec(n, j)
            eij = A.mul(ei, ej)
            if L.apply(eij) != A.mul(Lc[i], ej):
                return ("L(ab)=L(a)b", i, j)
            if R.apply(eij) != A.mul(ei, Rc[j]):
                return ("R(ab)=aR(b)", i, j)
            if A.mul(Rc[i], ej) != A.mul(ei, Lc[j]):
                return ("R(a)b=aL(b)", i, j)
    return None


def multiplier_basis(A: FiniteAlgebra, solve: bool = False) -> list:
    """Basis of the multiplier algebra M(A).

    A unital algebra is its own multiplier algebra (L(b) = L(1)b, R(a) = aR(1)
    and R(1) = L(1)), so its basis elements are returned directly unless
    ``solve`` asks for the compatibility equations to be solved anyway.
    """
    rep = check_structure(A)
    if not rep.nondegenerate:
        raise DegenerateAlgebra("multiplier algebra of a degenerate algebra is not defined")
    n = A.dim
    if rep.unital and not solve:
        return [Multiplier.from_element(A, unit_vec(n, k)) for k in range(n)]
    nn = n * n

    def Lv(p, k):
        return p * n + k

    def Rv(p, k):
        return nn + p * n + k

    t = A.table
    rs = RowSpace(2 * nn)
    for i in range(n):
        for j in range(n):
            tij = t.get((i, j), {})
            for p in range(n):
                eq1: dict = {}
                eq2: dict = {}
                eq3: dict = {}
                for k, c in tij.items():
                    _acc(eq1, Lv(p, k), c)
                    _acc(eq2, Rv(p, k), c)
                for m in range(n):
                    c = t.get((m, j), {}).get(p)
                    if c:
                        _acc(eq1, Lv(m, i), -c)
                        _acc(eq3, Rv(m, i), c)
                    c = t.get((i, m), {}).get(p)
                    if c:
                        _acc(eq2, Rv(m, j), -c)
                        _acc(eq3, Lv(m, j), -c)
                for eq in (eq1, eq2, eq3):
                    if eq:
                        rs.add(eq)
    out = []
    for sol in sorted(rs.kernel(), key=lambda d: min(d)):
        L = Matrix([[sol.get(Lv(p, k), ZERO) for k in range(n)] for p in range(n)], n)
        R = Matrix([[sol.get(Rv(p, k), ZERO) for k in range(n)] for p in range(n)], n)
        out.append(Multiplier(A, L, R))
    return out


def _acc(eq: dict, var: int, c) -> None:
    v = eq.get(var, ZERO) + c
    if v:
        eq[var] = v
    else:
        eq.pop(var, None)


def functional_is_faithful(omega: Functional) -> bool:
    G = omega.gram()
    n = omega.parent.dim
    # kernels of a -> omega(a .) and a -> omega(. a)
    return G.rank() == n and G.T().rank() == n


def modular_automorphism(omega: Functional) -> Matrix:
    """The automorphism sigma with omega(a b) = omega(b sigma(a)) for all a, b."""
    A = omega.parent
    G = omega.gram()
    if not functional_is_faithful(omega):
        raise ValueError("modular automorphism requested for a non-faithful functional")
    n = A.dim
    cols = []
    for i in range(n):
        # omega(e_j s) = omega(e_i e_j) for every j
        try:
            cols.append(solve_linear(G, G.rows[i]))
        except NoSolution as exc:
            raise NoKms(f"KMS system inconsistent at basis {i}") from exc
    sigma = Matrix.from_columns(cols, n)
    if homomorphism_witness(A, A, sigma) is not None or not sigma.is_invertible():
        raise NoKms("solved KMS map is not an automorphism")
    return sigma


def homomorphism_witness(A: FiniteAlgebra, B: FiniteAlgebra, T: Matrix, anti: bool = False):
    """First basis pair (i, j) with T(e_i e_j) != T(e_i)T(e_j) (or T(e_j)T(e_i) if anti)."""
    n = A.dim
    cols = [T.column(k) for k in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = T.apply(A.mul(unit_vec(n, i), unit_vec(n, j)))
            rhs = B.mul(cols[j], cols[i]) if anti else B.mul(cols[i], cols[j])
            if lhs != rhs:
                return (i, j)
    return None


def is_homomorphism(A, B, T) -> bool:
    return homomorphism_witness(A, B, T) is None


def is_anti_homomorphism(A, B, T) -> bool:
    return homomorphism_witness(A, B, T, anti=True) is None


def tensor_algebra(A: FiniteAlgebra, B: FiniteAlgebra, name: str = "") -> FiniteAlgebra:
    """A (x) B with (a (x) b)(a' (x) b') = aa' (x) bb', row-major basis a_i (x) b_k."""
    nb = B.dim
    table = {}
    for (i, j), arow in A.table.items():
        for (k, l), brow in B.table.items():
            table[(i * nb + k, j * nb + l)] = {p * nb + q: x * y
                                               for p, x in arow.items() for q, y in brow.items()}
    labels = [f"{a}(x){b}" for a in A.labels for b in B.labels]
    return FiniteAlgebra(A.dim * nb, table, labels, name or f"{A.name}(x){B.name}")


# -- sparse multi-leg tensors -------------------------------------------------
#
# An element of A1 (x) ... (x) Ak is a dict {(i1, ..., ik): coeff} without
# stored zeros. Products and maps act leg by leg.

def simple_tensor(*vectors) -> dict:
    """v1 (x) ... (x) vk from dense tuples or sparse dicts."""
    out = {(): ONE}
    for v in vectors:
        items = v.items() if isinstance(v, dict) else [(i, x) for i, x in enumerate(v) if x]
        out = {key + (i,): c * x for key, c in out.items() for i, x in items}
    return out


def tensor_mul(algs: Sequence[FiniteAlgebra], x: dict, y: dict) -> dict:
    """Leg-wise product in A1 (x) ... (x) Ak."""
    out: dict = {}
    tables = [a.table for a in algs]
    for kx, cx in x.items():
        for ky, cy in y.items():
            terms = {(): cx * cy}
            for t, i, j in zip(tables, kx, ky):
                row = t.get((i, j))
                if not row:
                    terms = None
                    break
                terms = {key + (k,): c * d for key, c in terms.items() for k, d in row.items()}
            if terms:
                for key, c in terms.items():
                    v = out.get(key, ZERO) + c
                    if v:
                        out[key] = v
                    else:
                        del out[key]
    return out


def tensor_map(maps: Sequence, x: dict) -> dict:
    """(T1 (x) ... (x) Tk) x; a ``None`` entry leaves that leg alone."""
    cols = [None if T is None else T.sparse_columns() for T in maps]
    out: dict = {}
    for key, c in x.items():
        terms = {(): c}
        for col, i in zip(cols, key):
            img = {i: ONE} if col is None else col[i]
            terms = {k + (p,): a * b for k, a in terms.items() for p, b in img.items()}
        for k, a in terms.items():
            v = out.get(k, ZERO) + a
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def contract_leg(x: dict, leg: int, covector: Sequence) -> dict:
    """Apply a functional to one leg, leaving a tensor with one leg fewer."""
    out: dict = {}
    for key, c in x.items():
        w = covector[key[leg]]
        if w:
            k = key[:leg] + key[leg + 1:]
            v = out.get(k, ZERO) + c * w
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def flat_tensor(x: dict, dims: Sequence[int]) -> dict:
    """Re-key a multi-leg tensor by its row-major flat index."""
    out = {}
    for key, c in x.items():
        idx = 0
        for i, d in zip(key, dims):
            idx = idx * d + i
        out[idx] = c
    return out


def single_leg(x: dict) -> dict:
    """The sparse vector underlying a one-leg tensor."""
    return {k[0]: c for k, c in x.items()}


def direct_sum_algebra(A: FiniteAlgebra, B: FiniteAlgebra, name: str = "") -> FiniteAlgebra:
    na = A.dim
    table = dict(A.table)
    for (i, j), row in B.table.items():
        table[(i + na, j + na)] = {k + na: c for k, c in row.items()}
    labels = [f"{l}" for l in A.labels] + [f"{l}'" for l in B.labels]
    return FiniteAlgebra(na + B.dim, table, labels, name or f"{A.name}+{B.name}")


def function_algebra(n: int, name: str = "K(X)") -> FiniteAlgebra:
    """K(X) for |X| = n, on the indicator basis f_x."""
    return FiniteAlgebra(n, {(x, x): {x: ONE} for x in range(n)},
                         [f"f{x + 1}" for x in range(n)], name)


def matrix_algebra(n: int, name: str = "") -> FiniteAlgebra:
    """M_n(Q) on matrix units e_ij, basis index i*n + j."""
    table = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                table[(i * n + j, j * n + l)] = {i * n + l: ONE}
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return FiniteAlgebra(n * n, table, labels, name or f"M{n}")


def algebra_isomorphic_by_relabeling(A: FiniteAlgebra, B: FiniteAlgebra, perm: Sequence[int]) -> bool:
    """Whether e_i -> f_perm[i] carries the structure constants of A onto those of B."""
    if A.dim != B.dim:
        return False
    mapped = {}
    for (i, j), row in A.table.items():
        mapped[(perm[i], perm[j])] = {perm[k]: c for k, c in row.items()}
    return mapped == B.table


__all__ = [
    "FiniteAlgebra", "Element", "Functional", "Multiplier", "StructureReport",
    "NoKms", "DegenerateAlgebra", "check_structure", "has_local_units",
    "multiplier_basis", "multiplier_defect", "functional_is_faithful",
    "modular_automorphism", "homomorphism_witness", "is_homomorphism",
    "is_anti_homomorphism", "tensor_algebra", "direct_sum_algebra",
    "function_algebra", "matrix_algebra", "algebra_isomorphic_by_relabeling",
    "associativity_witness", "simple_tensor", "tensor_mul", "tensor_map",
    "contract_leg", "flat_tensor", "single_leg",
]
