"""
The dual description file written by ``dualize``, and its stand-alone checker.

Schema (all rationals are "p/q" strings, matrices are sparse [row, col, "p/q"]
lists, basis index of u_k <> v_l is k * dim C + l)::

    scalar               "rational"
    basis                description of the index convention
    factors              {"B": dim B, "C": dim C}
    dual_of              {"dim": dim A, "meta": instance meta}
    algebra              {dim, labels, mult}            structure constants of B <> C
    coproduct            [[w, p, q, "c"], ...]          Delta^(e_w) = sum c e_p (x) e_q
    counit               ["c", ...]                     eps^ as a covector
    antipode             matrix of S^
    source_map           matrix of eps_s^
    target_map           matrix of eps_t^
    canonical_idempotent {"gamma", "gamma_t": matrices on B (x) B, C (x) C;
                          "element": [[p, q, "c"], ...]}
    right_integral       psi^ as a covector
    left_integral        phi^ as a covector
    modular_element      {"gamma", "gamma_t", "L", "R"}  delta as a pair and as actions
    sigma, sigma_prime   modular automorphisms of phi^ and psi^
    biduality            {"dimension", "rank"}

``check_dual_data`` rebuilds everything from these fields alone and checks
the axioms of the dual without access to the original datum.
"""

from __future__ import annotations

from .algebra import (
    Functional, check_structure, contract_leg, functional_is_faithful,
    homomorphism_witness, modular_automorphism, multiplier_defect, tensor_mul,
)
from .checks import Check, run_checks
from .dual import DualWmha, biduality_check, pair_action_left, pair_action_right
from .exactalg import ONE, ZERO, Matrix, kron, same_span, span_rank, sparse, unit_vec
from .instances import InputError, algebra_from_dict, algebra_to_dict, parse_rational, rational_str
from .wmha import _acc, solve_invariant_functionals

BASIS_NOTE = "u_k <> v_l at index k * dim C + l; for the pair groupoid f_x <> f_y is the matrix unit e_xy"


def _matrix_entries(M: Matrix) -> list:
    return [[i, j, rational_str(x)] for i, r in enumerate(M.rows) for j, x in enumerate(r) if x]


def _covector(v) -> list:
    return [rational_str(x) for x in v]


def dual_to_dict(h: DualWmha) -> dict:
    sigma = modular_automorphism(h.phi_hat)
    sigma_prime = modular_automorphism(h.psi_hat)
    delta = h.modular_element
    d = h.datum
    bid = biduality_check(h)
    return {
        "scalar": "rational",
        "basis": BASIS_NOTE,
        "factors": {"B": h.nB, "C": h.nC},
        "dual_of": {"dim": h.wmha.nA},
        "algebra": algebra_to_dict(h.Ahat),
        "coproduct": [[q, p, p2, rational_str(c)] for q, D in enumerate(h.delta_basis)
                      for (p, p2), c in sorted(D.items())],
        "counit": _covector(h.eps_hat.covector),
        "antipode": _matrix_entries(h.S_hat),
        "source_map": _matrix_entries(h.eps_s),
        "target_map": _matrix_entries(h.eps_t),
        "canonical_idempotent": {
            "gamma": _matrix_entries(h.E_gamma),
            "gamma_t": _matrix_entries(h.E_gamma_adj),
            "element": [[p, q, rational_str(c)] for (p, q), c in sorted(h.E_hat.items())],
        },
        "right_integral": _covector(h.psi_hat.covector),
        "left_integral": _covector(h.phi_hat.covector),
        "modular_element": {
            "gamma": _matrix_entries(d.sigma_B_inv @ d.sigma_B_inv),
            "gamma_t": _matrix_entries(d.sigma_C_inv @ d.sigma_C_inv),
            "L": _matrix_entries(delta.L),
            "R": _matrix_entries(delta.R),
        },
        "sigma": _matrix_entries(sigma),
        "sigma_prime": _matrix_entries(sigma_prime),
        "biduality": {"dimension": bid.dimension, "rank": bid.rank},
    }


# -- reading back -------------------------------------------------------------------------

def _read_matrix(entries, n: int, m: int, where: str) -> Matrix:
    if not isinstance(entries, list):
        raise InputError(f"{where}: expected a list of [row, col, \"p/q\"]")
    rows = [[ZERO] * m for _ in range(n)]
    for t, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != 3:
            raise InputError(f"{where}[{t}]: expected [row, col, \"p/q\"]")
        i, j = e[0], e[1]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < n and 0 <= j < m):
            raise InputError(f"{where}[{t}]: index out of range")
        rows[i][j] = parse_rational(e[2], f"{where}[{t}]")
    return Matrix(rows, m)


def _read_covector(v, n: int, where: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise InputError(f"{where}: expected {n} rationals")
    return tuple(parse_rational(x, where) for x in v)


def _read_tensor(entries, n: int, arity: int, where: str) -> list:
    if not isinstance(entries, list):
        raise InputError(f"{where}: expected a list")
    out = []
    for t, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != arity + 1:
            raise InputError(f"{where}[{t}]: expected {arity} indices and a rational")
        idx = e[:arity]
        if not all(isinstance(i, int) and 0 <= i < n for i in idx):
            raise InputError(f"{where}[{t}]: index out of range")
        out.append((tuple(idx), parse_rational(e[arity], f"{where}[{t}]")))
    return out


class DualData:
    """The fields of a dual file, parsed into exact objects."""

    def __init__(self, data):
        if not isinstance(data, dict) or data.get("scalar") != "rational":
            raise InputError('dual file: expected an object with "scalar": "rational"')
        try:
            self.Ahat = algebra_from_dict(data["algebra"], "B<>C")
            n = self.dim = self.Ahat.dim
            f = data["factors"]
            self.nB, self.nC = int(f["B"]), int(f["C"])
            if self.nB * self.nC != n:
                raise InputError("dual file: factors do not multiply to the dimension")
            self.dual_of = int(data["dual_of"]["dim"])
            self.delta_basis = [dict() for _ in range(n)]
            for (q, p, p2), c in _read_tensor(data["coproduct"], n, 3, "coproduct"):
                self.delta_basis[q][(p, p2)] = c
            self.counit = _read_covector(data["counit"], n, "counit")
            self.S = _read_matrix(data["antipode"], n, n, "antipode")
            self.eps_s = _read_matrix(data["source_map"], n, n, "source_map")
            self.eps_t = _read_matrix(data["target_map"], n, n, "target_map")
            ci = data["canonical_idempotent"]
            self.gamma = _read_matrix(ci["gamma"], self.nB ** 2, self.nB ** 2, "gamma")
            self.gamma_t = _read_matrix(ci["gamma_t"], self.nC ** 2, self.nC ** 2, "gamma_t")
            self.E = {k: c for k, c in _read_tensor(ci["element"], n, 2, "element")}
            self.psi = _read_covector(data["right_integral"], n, "right_integral")
            self.phi = _read_covector(data["left_integral"], n, "left_integral")
            me = data["modular_element"]
            self.delta_gamma = _read_matrix(me["gamma"], self.nB, self.nB, "modular_element.gamma")
            self.delta_gamma_t = _read_matrix(me["gamma_t"], self.nC, self.nC, "modular_element.gamma_t")
            self.delta_L = _read_matrix(me["L"], n, n, "modular_element.L")
            self.delta_R = _read_matrix(me["R"], n, n, "modular_element.R")
            self.sigma = _read_matrix(data["sigma"], n, n, "sigma")
            self.sigma_prime = _read_matrix(data["sigma_prime"], n, n, "sigma_prime")
        except (KeyError, TypeError) as exc:
            raise InputError(f"dual file: missing or malformed field {exc}") from exc

    @property
    def one(self) -> tuple:
        return self.Ahat.one()

    def coproduct(self, omega) -> dict:
        out: dict = {}
        for idx, x in enumerate(omega):
            if x:
                for key, c in self.delta_basis[idx].items():
                    _acc(out, key, x * c)
        return out

    def mul2(self, x: dict, y: dict) -> dict:
        return tensor_mul((self.Ahat, self.Ahat), x, y)


def check_dual_data(data, jobs: int = 1) -> list:
    """Re-check the dual axioms using the file contents only."""
    return run_checks(dual_file_checks(DualData(data)), "file", jobs)


def dual_file_checks(f: DualData) -> list:
    A, n = f.Ahat, f.dim

    def e(k):
        return unit_vec(n, k)

    def structure():
        rep = check_structure(A)
        return None if rep.ok else rep.witnesses or "no unit"

    def coproduct():
        for q in range(n):
            D = f.delta_basis[q]
            lhs: dict = {}
            rhs: dict = {}
            for (p, p2), x in D.items():
                for (r, s), y in f.delta_basis[p].items():
                    _acc(lhs, (r, s, p2), x * y)
                for (r, s), y in f.delta_basis[p2].items():
                    _acc(rhs, (p, r, s), x * y)
            if lhs != rhs:
                return ("coassociativity", q)
            for q2 in range(n):
                if f.coproduct(A.mul(e(q), e(q2))) != f.mul2(D, f.delta_basis[q2]):
                    return ("multiplicativity", q, q2)
        return None

    def counit():
        for q in range(n):
            D = f.delta_basis[q]
            for leg in (0, 1):
                got = [ZERO] * n
                for (i,), c in contract_leg(D, leg, f.counit).items():
                    got[i] = c
                if tuple(got) != e(q):
                    return (leg, q)
        return None

    def canonical_idempotent():
        E = f.E
        g_cols, gt_cols = f.gamma.sparse_columns(), f.gamma_t.sparse_columns()
        if f.coproduct(f.one) != E:
            return "E != Delta(1)"
        if f.mul2(E, E) != E:
            return "E not idempotent"
        for q in range(n):
            D = f.delta_basis[q]
            if f.mul2(E, D) != D or f.mul2(D, E) != D:
                return ("absorption", q)
            for q2 in range(n):
                x = {(q, q2): ONE}
                if pair_action_left(g_cols, f.nB, f.nC, x) != f.mul2(E, x):
                    return ("gamma action", q, q2)
                if pair_action_right(gt_cols, f.nC, x) != f.mul2(x, E):
                    return ("gamma_t action", q, q2)
        return None

    def antipode():
        if not f.S.is_invertible():
            return "S not bijective"
        wit = homomorphism_witness(A, A, f.S, anti=True)
        if wit is not None:
            return ("anti-multiplicative", wit)
        if f.eps_s @ f.eps_s != f.eps_s or f.eps_t @ f.eps_t != f.eps_t:
            return "source or target map not idempotent"
        for q in range(n):
            s = [ZERO] * n
            t = [ZERO] * n
            for (p, p2), c in f.delta_basis[q].items():
                for m, x in A.mul_sp(sparse(f.S.column(p)), {p2: ONE}).items():
                    s[m] += c * x
                for m, x in A.mul_sp({p: ONE}, sparse(f.S.column(p2))).items():
                    t[m] += c * x
            if tuple(s) != f.eps_s.column(q):
                return ("m(S (x) i)Delta", q)
            if tuple(t) != f.eps_t.column(q):
                return ("m(i (x) S)Delta", q)
        return None

    def integrals():
        right = solve_invariant_functionals(n, f.delta_basis, f.eps_s.columns(), "right")
        left = solve_invariant_functionals(n, f.delta_basis, f.eps_t.columns(), "left")
        if not same_span(right + [sparse(f.psi)], right, n) or not any(f.psi):
            return "psi is not a right integral"
        if not same_span(left + [sparse(f.phi)], left, n) or not any(f.phi):
            return "phi is not a left integral"
        psi, phi = Functional(A, f.psi), Functional(A, f.phi)
        if not (functional_is_faithful(psi) and functional_is_faithful(phi)):
            return "integrals not faithful"
        S2 = f.S @ f.S
        if modular_automorphism(phi) != f.sigma or f.sigma != S2:
            return "sigma != S^2"
        if modular_automorphism(psi) != f.sigma_prime or f.sigma_prime @ S2 != Matrix.identity(n):
            return "sigma' != S^-2"
        return None

    def modular_element():
        L, R = f.delta_L, f.delta_R
        if multiplier_defect(A, L, R) is not None:
            return ("not a multiplier", multiplier_defect(A, L, R))
        if L != kron(f.delta_gamma, Matrix.identity(f.nC)) or R != kron(Matrix.identity(f.nB), f.delta_gamma_t):
            return "actions do not match the adjointable pair"
        if not (L.is_invertible() and R.is_invertible()):
            return "delta not invertible"
        phi = Functional(A, f.phi)
        for q in range(n):
            if phi(f.S.column(q)) != phi(R.column(q)):
                return ("phi(S w) != phi(w delta)", q)
        S2 = f.S @ f.S
        if L.inverse() @ R != S2 @ S2:
            return "delta^-1 w delta != S^4 w"
        return None

    def biduality():
        G = Functional(A, f.psi).gram()
        rank = span_rank([sparse(G.column(q)) for q in range(n)], n)
        if rank != f.dual_of:
            return {"rank": rank, "dim A": f.dual_of}
        return None

    return [
        Check("file algebra", "B<>C associative, non-degenerate, idempotent, unital", structure),
        Check("file coproduct", "Delta coassociative and multiplicative", coproduct),
        Check("file counit", "(eps (x) i)Delta = i = (i (x) eps)Delta", counit),
        Check("file canonical idempotent", "E = Delta(1) idempotent, absorbs Delta, acts as (gamma, gamma^t)",
              canonical_idempotent),
        Check("file antipode", "S anti-isomorphism, m(S (x) i)Delta = eps_s, m(i (x) S)Delta = eps_t", antipode),
        Check("file integrals", "psi right, phi left, faithful, sigma = S^2, sigma' = S^-2", integrals),
        Check("file modular element", "phi(S w) = phi(w delta), delta^-1 w delta = S^4 w", modular_element),
        Check("file biduality", "span{psi(. w')} has dimension dim A", biduality),
    ]


__all__ = ["dual_to_dict", "check_dual_data", "dual_file_checks", "DualData", "BASIS_NOTE"]
