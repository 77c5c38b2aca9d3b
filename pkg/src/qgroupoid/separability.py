"""
Separability idempotents E in B (x) C and the data they determine.

E is stored as its coefficient matrix ``E[i][j]`` over the grid b_i (x) c_j,
so ``E @ w`` contracts the C-leg against a covector w on C and
``E.T() @ w`` contracts the B-leg. All derived maps are solved from their
defining relations and re-verified; nothing is taken on trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .algebra import (
    FiniteAlgebra, Functional, NoKms, check_structure, functional_is_faithful,
    homomorphism_witness, modular_automorphism, tensor_algebra,
)
from .checks import Check, CheckResult, SKIP, VerificationError, require
from .exactalg import (
    ONE, ZERO, Matrix, NoSolution, UnderDetermined, kron_vec, solve_columns,
    solve_linear, span_rank, unit_vec,
)


class NotSeparability(ValueError):
    """The input is not a (regular) separability idempotent."""

    def __init__(self, check_id: str, witness=None, detail: str = ""):
        super().__init__(f"{check_id} failed" + (f" at {witness!r}" if witness is not None else "")
                         + (f": {detail}" if detail else ""))
        self.check_id = check_id
        self.witness = witness
        self.detail = detail


def e_tensor(E: Matrix) -> tuple:
    """E as a flat coefficient vector of B (x) C."""
    return tuple(x for r in E.rows for x in r)


def e_matrix(t: Sequence, nB: int, nC: int) -> Matrix:
    return Matrix._raw(tuple(tuple(t[i * nC:(i + 1) * nC]) for i in range(nB)), nC)


def map_tensor(T1: Matrix, T2: Matrix, t: Sequence) -> tuple:
    """(T1 (x) T2) applied to a flat two-fold tensor."""
    n2 = T2.ncols
    out = [ZERO] * (T1.nrows * T2.nrows)
    c1 = T1.columns()
    c2 = T2.columns()
    m2 = T2.nrows
    for idx, x in enumerate(t):
        if not x:
            continue
        i, k = divmod(idx, n2)
        for p, a in enumerate(c1[i]):
            if a:
                xa = x * a
                for q, b in enumerate(c2[k]):
                    if b:
                        out[p * m2 + q] += xa * b
    return tuple(out)


def multiply_legs(A: FiniteAlgebra, t: Sequence) -> tuple:
    """m(t) for t in A (x) A."""
    n = A.dim
    out = [ZERO] * n
    for idx, x in enumerate(t):
        if x:
            for k, c in A.basis_product(*divmod(idx, n)).items():
                out[k] += x * c
    return tuple(out)


# -- solving the derived data -----------------------------------------------

def _solve_S_B(B: FiniteAlgebra, C: FiniteAlgebra, E: Matrix) -> Matrix:
    nB, nC = B.dim, C.dim
    BC = tensor_algebra(B, C)
    Et = e_tensor(E)
    one_B, one_C = B.one(), C.one()
    M = Matrix.from_columns([BC.mul(Et, kron_vec(one_B, unit_vec(nC, l))) for l in range(nC)], nB * nC)
    rhs = [BC.mul(Et, kron_vec(unit_vec(nB, k), one_C)) for k in range(nB)]
    return _solve_map("S_B defining relation", M, rhs, nC)


def _solve_S_C(B: FiniteAlgebra, C: FiniteAlgebra, E: Matrix) -> Matrix:
    nB, nC = B.dim, C.dim
    BC = tensor_algebra(B, C)
    Et = e_tensor(E)
    one_B, one_C = B.one(), C.one()
    M = Matrix.from_columns([BC.mul(kron_vec(unit_vec(nB, l), one_C), Et) for l in range(nB)], nB * nC)
    rhs = [BC.mul(kron_vec(one_B, unit_vec(nC, k)), Et) for k in range(nC)]
    return _solve_map("S_C defining relation", M, rhs, nB)


def solve_antipodal_maps(B: FiniteAlgebra, C: FiniteAlgebra, E: Matrix) -> tuple:
    """Solve E(b (x) 1) = E(1 (x) S_B b) and (1 (x) c)E = (S_C c (x) 1)E basis-wise.

    Returns (S_B, S_C) as matrices C <- B and B <- C. Raises
    :class:`NotSeparability` if either system is inconsistent or not
    uniquely solvable, or if a solved map is not anti-multiplicative.
    """
    S_B = _solve_S_B(B, C, E)
    S_C = _solve_S_C(B, C, E)
    w = homomorphism_witness(B, C, S_B, anti=True)
    if w is not None:
        raise NotSeparability("S_B anti-multiplicative", w)
    w = homomorphism_witness(C, B, S_C, anti=True)
    if w is not None:
        raise NotSeparability("S_C anti-multiplicative", w)
    return S_B, S_C


def _solve_map(check_id: str, M: Matrix, rhs: list, n: int) -> Matrix:
    try:
        cols = solve_columns(M, rhs)
    except NoSolution as exc:
        raise NotSeparability(check_id, (getattr(exc, "column", None),), "inconsistent") from exc
    except UnderDetermined as exc:
        raise NotSeparability(check_id, (getattr(exc, "column", None),),
                              f"non-unique, kernel dimension {len(exc.kernel)}") from exc
    return Matrix.from_columns(cols, n)


def _solve_normalized_functional(check_id: str, M: Matrix, target: tuple) -> tuple:
    try:
        return solve_linear(M, target)
    except NoSolution as exc:
        raise NotSeparability(check_id, None, "inconsistent") from exc
    except UnderDetermined as exc:
        raise NotSeparability(check_id, None, f"non-unique, kernel dimension {len(exc.kernel)}") from exc


def distinguished_functionals(B: FiniteAlgebra, C: FiniteAlgebra, E: Matrix) -> tuple:
    """The functionals with (phi_B (x) i)E = 1_C and (i (x) phi_C)E = 1_B."""
    # (phi_B (x) i)E = E^T phi_B and (i (x) phi_C)E = E phi_C
    phi_B = _solve_normalized_functional("phi_B normalization", E.T(), C.one())
    phi_C = _solve_normalized_functional("phi_C normalization", E, B.one())
    return Functional(B, phi_B), Functional(C, phi_C)


def kms_automorphisms(S_B: Matrix, S_C: Matrix, phi_B: Functional, phi_C: Functional) -> tuple:
    """sigma_B = (S_C S_B)^-1 and sigma_C = S_B S_C, checked against the KMS solves."""
    sigma_B = (S_C @ S_B).inverse()
    sigma_C = S_B @ S_C
    if modular_automorphism(phi_B) != sigma_B:
        raise VerificationError("KMS sigma_B", None, "(S_C S_B)^-1 differs from the modular automorphism of phi_B")
    if modular_automorphism(phi_C) != sigma_C:
        raise VerificationError("KMS sigma_C", None, "S_B S_C differs from the modular automorphism of phi_C")
    return sigma_B, sigma_C


# -- the certified datum ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SeparabilityDatum:
    B: FiniteAlgebra
    C: FiniteAlgebra
    E: Matrix
    S_B: Matrix
    S_C: Matrix
    phi_B: Functional
    phi_C: Functional
    sigma_B: Matrix
    sigma_C: Matrix

    @classmethod
    def certify(cls, B: FiniteAlgebra, C: FiniteAlgebra, E) -> "SeparabilityDatum":
        """Run every separability check; raise NotSeparability on the first failure."""
        results, datum = analyze(B, C, E)
        for r in results:
            if not r.passed:
                raise NotSeparability(r.id, r.witness, r.detail)
        return datum

    @property
    def nB(self) -> int:
        return self.B.dim

    @property
    def nC(self) -> int:
        return self.C.dim

    @cached_property
    def one_B(self) -> tuple:
        return self.B.one()

    @cached_property
    def one_C(self) -> tuple:
        return self.C.one()

    @cached_property
    def BC(self) -> FiniteAlgebra:
        return tensor_algebra(self.B, self.C)

    @cached_property
    def BB(self) -> FiniteAlgebra:
        return tensor_algebra(self.B, self.B)

    @cached_property
    def CC(self) -> FiniteAlgebra:
        return tensor_algebra(self.C, self.C)

    @cached_property
    def E_tensor(self) -> tuple:
        return e_tensor(self.E)

    @cached_property
    def E_terms(self) -> list:
        """Nonzero entries (i, j, E_ij), the Sweedler sum E_(1) (x) E_(2)."""
        return [(i, j, x) for i, r in enumerate(self.E.rows) for j, x in enumerate(r) if x]

    @cached_property
    def S_B_inv(self) -> Matrix:
        return self.S_B.inverse()

    @cached_property
    def S_C_inv(self) -> Matrix:
        return self.S_C.inverse()

    @cached_property
    def sigma_B_inv(self) -> Matrix:
        return self.sigma_B.inverse()

    @cached_property
    def sigma_C_inv(self) -> Matrix:
        return self.sigma_C.inverse()

    @cached_property
    def F1(self) -> tuple:
        """(i (x) S_C)E in B (x) B."""
        return map_tensor(Matrix.identity(self.nB), self.S_C, self.E_tensor)

    @cached_property
    def F2(self) -> tuple:
        """(S_B (x) i)E in C (x) C."""
        return map_tensor(self.S_B, Matrix.identity(self.nC), self.E_tensor)

    def delta_B(self, u: Sequence) -> tuple:
        """F1 (1 (x) u)."""
        return self.BB.mul(self.F1, kron_vec(self.one_B, u))

    def delta_C(self, v: Sequence) -> tuple:
        """(v (x) 1) F2."""
        return self.CC.mul(kron_vec(v, self.one_C), self.F2)

    @cached_property
    def delta_B_basis(self) -> list:
        return [self.delta_B(unit_vec(self.nB, k)) for k in range(self.nB)]

    @cached_property
    def delta_C_basis(self) -> list:
        return [self.delta_C(unit_vec(self.nC, k)) for k in range(self.nC)]

    def left_leg(self, w: Sequence) -> tuple:
        """(i (x) w)E for a covector w on C."""
        return self.E.apply(w)

    def right_leg(self, w: Sequence) -> tuple:
        """(w (x) i)E for a covector w on B."""
        return self.E.T().apply(w)

    def eps(self, v: Sequence, u: Sequence) -> object:
        """The pairing eps(v u) = phi_B(S_C(v) u) of C with B."""
        return self.phi_B(self.B.mul(self.S_C.apply(v), u))

    @cached_property
    def eps_matrix(self) -> Matrix:
        """Eps[j][i] = eps(c_j b_i)."""
        return Matrix([[self.eps(unit_vec(self.nC, j), unit_vec(self.nB, i)) for i in range(self.nB)]
                       for j in range(self.nC)], self.nB)

    @cached_property
    def pairing_CB(self) -> Matrix:
        """P1[j][k] = <c_j, u_k>_1 = phi_C(S_B(u_k) c_j)."""
        C = self.C
        return Matrix([[self.phi_C(C.mul(self.S_B.column(k), unit_vec(self.nC, j))) for k in range(self.nB)]
                       for j in range(self.nC)], self.nB)

    @cached_property
    def pairing_BC(self) -> Matrix:
        """P2[i][l] = <b_i, v_l>_2 = phi_B(b_i S_C(v_l))."""
        B = self.B
        return Matrix([[self.phi_B(B.mul(unit_vec(self.nB, i), self.S_C.column(l))) for l in range(self.nC)]
                       for i in range(self.nB)], self.nC)


def analyze(B: FiniteAlgebra, C: FiniteAlgebra, E) -> tuple:
    """Every separability check in dependency order.

    Returns (results, datum); datum is None unless all checks pass. Checks
    whose prerequisites failed are reported as skipped.
    """
    if not isinstance(E, Matrix):
        E = Matrix(E, C.dim)
    if E.shape != (B.dim, C.dim):
        raise ValueError(f"E has shape {E.shape}, expected {(B.dim, C.dim)}")
    results: list = []
    failed: set = set()

    def record(cid: str, anchor: str, fn, needs=()):
        missing = [n for n in needs if n in failed]
        if missing:
            r = CheckResult(cid, anchor, SKIP, None, "prerequisite failed: " + ", ".join(missing))
        else:
            r = Check(cid, anchor, fn).run()
        results.append(r)
        if not r.passed:
            failed.add(cid)

    nB, nC = B.dim, C.dim
    st: dict = {}

    for name, alg in (("B", B), ("C", C)):
        def structure(alg=alg):
            rep = check_structure(alg)
            return None if rep.ok else rep.witnesses or "no unit"
        record(f"{name} structure", "associative, non-degenerate, idempotent, unital", structure)

    base = ("B structure", "C structure")

    def idempotent():
        BC = tensor_algebra(B, C)
        Et = e_tensor(E)
        E2 = BC.mul(Et, Et)
        for idx, (x, y) in enumerate(zip(E2, Et)):
            if x != y:
                return divmod(idx, nC)
        return None
    record("E idempotent", "E E = E", idempotent, base)

    def left_full():
        r = span_rank([E.column(j) for j in range(nC)], nB)
        return None if r == nB else {"rank": r, "dim B": nB}
    record("left leg full", "span{(i (x) w)E} = B", left_full)

    def right_full():
        r = span_rank(E.rows, nC)
        return None if r == nC else {"rank": r, "dim C": nC}
    record("right leg full", "span{(w (x) i)E} = C", right_full)

    full = base + ("E idempotent", "left leg full", "right leg full")

    def solve(key, solver):
        def fn():
            try:
                st[key] = solver(B, C, E)
            except NotSeparability as exc:
                raise VerificationError(exc.check_id, exc.witness, exc.detail) from exc
        return fn
    record("S_B defining relation", "E(b (x) 1) = E(1 (x) S_B(b))", solve("S_B", _solve_S_B), full)
    record("S_C defining relation", "(1 (x) c)E = (S_C(c) (x) 1)E", solve("S_C", _solve_S_C), full)

    def anti(key, src, dst):
        return lambda: homomorphism_witness(src, dst, st[key], anti=True)
    record("S_B anti-multiplicative", "S_B(bb') = S_B(b') S_B(b)", anti("S_B", B, C),
           ("S_B defining relation",))
    record("S_C anti-multiplicative", "S_C(cc') = S_C(c') S_C(c)", anti("S_C", C, B),
           ("S_C defining relation",))
    have_S = ("S_B defining relation", "S_C defining relation",
              "S_B anti-multiplicative", "S_C anti-multiplicative")

    def nondeg(which):
        def fn():
            if which == "B":
                img = st["S_B"].apply(B.one())
                return None if img == C.one() else "S_B(1) != 1"
            img = st["S_C"].apply(C.one())
            return None if img == B.one() else "S_C(1) != 1"
        return fn
    record("S_B non-degenerate", "S_B(B) C = C", nondeg("B"), have_S[:1])
    record("S_C non-degenerate", "B S_C(C) = B", nondeg("C"), have_S[1:2])

    def phiB():
        st["phi_B"] = Functional(B, _solve_normalized_functional("phi_B normalization", E.T(), C.one()))
    record("phi_B normalization", "(phi_B (x) i)E = 1", phiB, base)

    def phiC():
        st["phi_C"] = Functional(C, _solve_normalized_functional("phi_C normalization", E, B.one()))
    record("phi_C normalization", "(i (x) phi_C)E = 1", phiC, base)

    def regular():
        bad = [n for n, M in (("S_B", st["S_B"]), ("S_C", st["S_C"])) if not M.is_invertible()]
        return None if not bad else bad
    record("regular", "S_B, S_C are anti-isomorphisms", regular, have_S)

    def flip_symmetry():
        lhs = map_tensor(st["S_B"], st["S_C"], e_tensor(E))
        rhs = e_tensor(E.T())
        return _first_diff(lhs, rhs, nC)
    record("flip symmetry", "(S_B (x) S_C)E = zeta E", flip_symmetry, have_S + ("regular",))

    def modular_invariance():
        S_B, S_C = st["S_B"], st["S_C"]
        lhs = map_tensor(S_C @ S_B, S_B @ S_C, e_tensor(E))
        return _first_diff(lhs, e_tensor(E), nC)
    record("E modular invariance", "(S_C S_B (x) S_B S_C)E = E", modular_invariance, have_S + ("regular",))

    phis = ("phi_B normalization", "phi_C normalization")
    for name in ("B", "C"):
        def faithful(name=name):
            return None if functional_is_faithful(st["phi_" + name]) else "degenerate Gram matrix"
        record(f"phi_{name} faithful", "a -> phi(a .) and a -> phi(. a) injective", faithful, phis)

    def phiC_from_B():
        g = st["phi_B"].compose(st["S_C"], C)
        return _first_diff(g.covector, st["phi_C"].covector)
    record("phi_C = phi_B S_C", "phi_C = phi_B o S_C", phiC_from_B, phis + have_S)

    def phiB_from_C():
        g = st["phi_C"].compose(st["S_B"], B)
        return _first_diff(g.covector, st["phi_B"].covector)
    record("phi_B = phi_C S_B", "phi_B = phi_C o S_B", phiB_from_C, phis + have_S)

    kms_needs = phis + have_S + ("regular", "phi_B faithful", "phi_C faithful")

    def kms_B():
        st["sigma_B"] = (st["S_C"] @ st["S_B"]).inverse()
        try:
            m = modular_automorphism(st["phi_B"])
        except NoKms as exc:
            return str(exc)
        return _first_matrix_diff(m, st["sigma_B"])
    record("KMS sigma_B", "sigma_B = (S_C S_B)^-1 is the modular automorphism of phi_B", kms_B, kms_needs)

    def kms_C():
        st["sigma_C"] = st["S_B"] @ st["S_C"]
        try:
            m = modular_automorphism(st["phi_C"])
        except NoKms as exc:
            return str(exc)
        return _first_matrix_diff(m, st["sigma_C"])
    record("KMS sigma_C", "sigma_C = S_B S_C is the modular automorphism of phi_C", kms_C, kms_needs)

    if failed:
        return results, None
    datum = SeparabilityDatum(B, C, E, st["S_B"], st["S_C"], st["phi_B"], st["phi_C"],
                              st["sigma_B"], st["sigma_C"])
    return results, datum


def _first_diff(xs: Sequence, ys: Sequence, ncols: int | None = None):
    for idx, (x, y) in enumerate(zip(xs, ys)):
        if x != y:
            return divmod(idx, ncols) if ncols else idx
    return None


def _first_matrix_diff(X: Matrix, Y: Matrix):
    if X.shape != Y.shape:
        return {"shapes": (X.shape, Y.shape)}
    for i, (r, s) in enumerate(zip(X.rows, Y.rows)):
        for j, (x, y) in enumerate(zip(r, s)):
            if x != y:
                return (i, j)
    return None


def verify_separability(B: FiniteAlgebra, C: FiniteAlgebra, E) -> list:
    """All separability checks as a list of results; failures carry witnesses."""
    return analyze(B, C, E)[0]


def check_regular(datum: SeparabilityDatum) -> bool:
    S_B, S_C = datum.S_B, datum.S_C
    if not (S_B.is_invertible() and S_C.is_invertible()):
        return False
    Et = datum.E_tensor
    if map_tensor(S_B, S_C, Et) != e_tensor(datum.E.T()):
        raise VerificationError("flip symmetry")
    if map_tensor(S_C @ S_B, S_B @ S_C, Et) != Et:
        raise VerificationError("E modular invariance")
    return True


# -- Radon-Nikodym ------------------------------------------------------------

@dataclass(frozen=True)
class RadonNikodym:
    """g = f(. y); ``left`` is y' with g = f(y' .) when f is distinguished."""

    y: tuple
    invertible: bool
    faithful: bool
    left: tuple | None = None


def radon_nikodym(datum: SeparabilityDatum, f: Functional, g: Functional) -> RadonNikodym:
    """The unique y with g = f(. y), for f faithful on B or on C.

    For f the distinguished functional the element comes straight from E;
    otherwise it is y_g y_f^-1 with both factors relative to the
    distinguished functional.
    """
    if f.parent is not g.parent:
        raise ValueError("functionals live on different algebras")
    if f.parent is datum.B:
        phi, alg = datum.phi_B, datum.B
    elif f.parent is datum.C:
        phi, alg = datum.phi_C, datum.C
    else:
        raise ValueError("functional is not on a base algebra of this datum")
    if not functional_is_faithful(f):
        raise ValueError("radon_nikodym needs a faithful reference functional")

    left = None
    if f == phi:
        y, left = _rn_from_distinguished(datum, g)
    else:
        y_f, _ = _rn_from_distinguished(datum, f)
        y_g, _ = _rn_from_distinguished(datum, g)
        y = alg.mul(y_g, alg.element(y_f).inverse().coeffs)

    n = alg.dim
    for i in range(n):
        e = unit_vec(n, i)
        if g(e) != f(alg.mul(e, y)):
            raise VerificationError("Radon-Nikodym reconstruction", i)
        if left is not None and g(e) != f(alg.mul(left, e)):
            raise VerificationError("Radon-Nikodym left variant", i)
    invertible = alg.left_matrix(y).is_invertible()
    faithful = functional_is_faithful(g)
    if invertible != faithful:
        raise VerificationError("Radon-Nikodym invertibility", None,
                                f"y invertible={invertible} but g faithful={faithful}")
    return RadonNikodym(y, invertible, faithful, left)


def _rn_from_distinguished(datum: SeparabilityDatum, g: Functional) -> tuple:
    if g.parent is datum.B:
        # y = (i (x) g S_C)E, y' = (i (x) g S_B^-1)E
        y = datum.left_leg(datum.S_C.T().apply(g.covector))
        left = datum.left_leg(datum.S_B_inv.T().apply(g.covector))
    else:
        # x = (g S_C^-1 (x) i)E, x' = (g S_B (x) i)E
        y = datum.right_leg(datum.S_C_inv.T().apply(g.covector))
        left = datum.right_leg(datum.S_B.T().apply(g.covector))
    return y, left


def twisted_modular_automorphism(datum: SeparabilityDatum, y: Sequence) -> Matrix:
    """Modular automorphism of phi_B(. y) for invertible y: b -> y sigma_B(b) y^-1."""
    B = datum.B
    y_inv = B.element(y).inverse().coeffs
    cols = [B.mul(B.mul(y, datum.sigma_B.column(k)), y_inv) for k in range(datum.nB)]
    return Matrix.from_columns(cols, datum.nB)


def sample_invertible(A: FiniteAlgebra) -> tuple:
    """A deterministic invertible element other than the unit, when one exists."""
    one = A.one()
    for k in range(A.dim - 1, -1, -1):
        for s in (1, 2, -3):
            cand = tuple(a + (s if i == k else 0) for i, a in enumerate(one))
            if A.left_matrix(cand).is_invertible():
                return tuple(ONE * c for c in cand)
    return one


# -- checks on a certified datum ----------------------------------------------

def base_checks(d: SeparabilityDatum) -> list:
    """Identities of the legs F1, F2, the base coproducts and the KMS data."""
    nB, nC = d.nB, d.nC
    B, C, BB, CC = d.B, d.C, d.BB, d.CC

    def f1_commutes():
        for k in range(nB):
            u = unit_vec(nB, k)
            if BB.mul(kron_vec(u, d.one_B), d.F1) != BB.mul(d.F1, kron_vec(d.one_B, u)):
                return k
        return None

    def f2_commutes():
        for k in range(nC):
            v = unit_vec(nC, k)
            if CC.mul(kron_vec(v, d.one_C), d.F2) != CC.mul(d.F2, kron_vec(d.one_C, v)):
                return k
        return None

    def pairing1():
        P = d.pairing_CB
        for k in range(nB):
            X = d.delta_B_basis[k]
            for j in range(nC):
                for j2 in range(nC):
                    lhs = sum((c * P[m, k] for m, c in C.basis_product(j, j2).items()), ZERO)
                    rhs = ZERO
                    for idx, x in enumerate(X):
                        if x:
                            p, q = divmod(idx, nB)
                            rhs += x * P[j, p] * P[j2, q]
                    if lhs != rhs:
                        return (j, j2, k)
        return None

    def pairing2():
        P = d.pairing_BC
        for l in range(nC):
            X = d.delta_C_basis[l]
            for i in range(nB):
                for i2 in range(nB):
                    lhs = sum((c * P[m, l] for m, c in B.basis_product(i, i2).items()), ZERO)
                    rhs = ZERO
                    for idx, x in enumerate(X):
                        if x:
                            p, q = divmod(idx, nC)
                            rhs += x * P[i, p] * P[i2, q]
                    if lhs != rhs:
                        return (i, i2, l)
        return None

    def multiplicative(alg, AA, delta_basis, delta):
        def fn():
            n = alg.dim
            for i in range(n):
                for j in range(n):
                    prod = alg.basis_product(i, j)
                    lhs = delta(tuple(prod.get(k, ZERO) for k in range(n)))
                    if lhs != AA.mul(delta_basis[i], delta_basis[j]):
                        return (i, j)
            return None
        return fn

    def rn_basis_functionals():
        for side, alg in (("B", B), ("C", C)):
            phi = d.phi_B if side == "B" else d.phi_C
            n = alg.dim
            for k in range(n):
                g = Functional(alg, unit_vec(n, k))
                radon_nikodym(d, phi, g)
            radon_nikodym(d, phi, phi)
        return None

    def rn_unit():
        if radon_nikodym(d, d.phi_B, d.phi_B).y != d.one_B:
            return "B"
        if radon_nikodym(d, d.phi_C, d.phi_C).y != d.one_C:
            return "C"
        return None

    def kms_faithful():
        y0 = sample_invertible(B)
        f = d.phi_B.right_twist(y0)
        if radon_nikodym(d, d.phi_B, f).y != y0:
            return "Radon-Nikodym of phi_B(. y0)"
        return _first_matrix_diff(modular_automorphism(f), twisted_modular_automorphism(d, y0))

    def rn_general_reference():
        y0 = sample_invertible(B)
        f = d.phi_B.right_twist(y0)
        for k in range(nB):
            g = Functional(B, unit_vec(nB, k))
            radon_nikodym(d, f, g)
        return None

    checks = [
        Check("F1 commutation", "(u (x) 1)F1 = F1(1 (x) u)", f1_commutes),
        Check("F2 commutation", "(v (x) 1)F2 = F2(1 (x) v)", f2_commutes),
        Check("m_B F1 = 1", "m_B F1 = E_(1) S_C(E_(2)) = 1",
              lambda: None if multiply_legs(B, d.F1) == d.one_B else "m_B F1 != 1"),
        Check("m_C F2 = 1", "m_C F2 = S_B(E_(1)) E_(2) = 1",
              lambda: None if multiply_legs(C, d.F2) == d.one_C else "m_C F2 != 1"),
        Check("Delta_B pairing duality", "<cc', u>_1 = <c (x) c', Delta_B(u)>_1", pairing1),
        Check("Delta_C pairing duality", "<bb', v>_2 = <b (x) b', Delta_C(v)>_2", pairing2),
        Check("Radon-Nikodym basis functionals", "g = phi(. y), y invertible iff g faithful",
              rn_basis_functionals),
        Check("Radon-Nikodym identity", "phi = phi(. 1)", rn_unit),
        Check("Radon-Nikodym general reference", "g = f(. y_g y_f^-1)", rn_general_reference),
        Check("KMS of faithful functionals", "sigma_f = y sigma_B(.) y^-1 for f = phi_B(. y)", kms_faithful),
    ]
    # only true for commutative bases: on M_2 the square of Delta_B(e11) is not Delta_B(e11)
    if B.is_commutative():
        checks.append(Check("Delta_B multiplicative", "Delta_B(uu') = Delta_B(u) Delta_B(u')",
                            multiplicative(B, BB, d.delta_B_basis, d.delta_B)))
    if C.is_commutative():
        checks.append(Check("Delta_C multiplicative", "Delta_C(vv') = Delta_C(v) Delta_C(v')",
                            multiplicative(C, CC, d.delta_C_basis, d.delta_C)))
    return checks


def certify_or_raise(B: FiniteAlgebra, C: FiniteAlgebra, E) -> SeparabilityDatum:
    d = SeparabilityDatum.certify(B, C, E)
    require(base_checks(d))
    return d


__all__ = [
    "NotSeparability", "SeparabilityDatum", "RadonNikodym", "analyze",
    "solve_antipodal_maps", "distinguished_functionals", "kms_automorphisms",
    "verify_separability", "check_regular", "radon_nikodym", "base_checks",
    "certify_or_raise", "e_tensor", "e_matrix", "map_tensor", "multiply_legs",
    "twisted_modular_automorphism", "sample_invertible",
]
