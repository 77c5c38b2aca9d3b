"""
Exact rational linear algebra.

Scalars are ``fractions.Fraction``. Dense vectors are tuples, sparse vectors
are ``{index: Fraction}`` dicts with no stored zeros, and linear maps are
:class:`Matrix` objects whose column ``j`` is the image of basis vector ``j``.

Tensor indices are flattened row-major everywhere: the basis vector
``e_i (x) f_k`` of ``V (x) W`` sits at position ``i * dim(W) + k``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are refused: they would silently import rounding error.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact scalar {x!r}")
    return Fraction(x)


def vec(xs: Iterable) -> tuple:
    return tuple(Q(x) for x in xs)


def zero_vec(n: int) -> tuple:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> tuple:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x}


def dense(sv: dict, n: int) -> tuple:
    out = [ZERO] * n
    for i, x in sv.items():
        out[i] = x
    return tuple(out)


def sp_add(a: dict, b: dict, scale=ONE) -> dict:
    """Return a + scale*b as a new sparse vector."""
    out = dict(a)
    for i, x in b.items():
        y = out.get(i, ZERO) + scale * x
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


def sp_axpy(acc: dict, scale, b: dict) -> None:
    """In place: acc += scale*b."""
    if not scale:
        return
    for i, x in b.items():
        y = acc.get(i, ZERO) + scale * x
        if y:
            acc[i] = y
        else:
            acc.pop(i, None)


def sp_scale(a: dict, s) -> dict:
    if not s:
        return {}
    return {i: s * x for i, x in a.items()}


def sp_dot(a: dict, b: dict) -> Fraction:
    if len(b) < len(a):
        a, b = b, a
    total = ZERO
    for i, x in a.items():
        y = b.get(i)
        if y is not None:
            total += x * y
    return total


def dot(a: Sequence, b: Sequence) -> Fraction:
    total = ZERO
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


class NoSolution(ValueError):
    """The linear system is inconsistent."""


class UnderDetermined(ValueError):
    """The linear system has more than one solution."""

    def __init__(self, particular: tuple, kernel: list):
        super().__init__(f"solution not unique: kernel dimension {len(kernel)}")
        self.particular = particular
        self.kernel = kernel


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(vec(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "Matrix":
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "nrows", len(rows))
        object.__setattr__(m, "ncols", ncols)
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(unit_vec(n, i) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls._raw(tuple(zero_vec(n) for _ in range(m)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "Matrix":
        cols = [vec(c) for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls._raw(rows, len(cols))

    @classmethod
    def from_sparse_columns(cls, cols: Sequence[dict], nrows: int) -> "Matrix":
        rows = [[ZERO] * len(cols) for _ in range(nrows)]
        for j, c in enumerate(cols):
            for i, x in c.items():
                rows[i][j] = x
        return cls._raw(tuple(tuple(r) for r in rows), len(cols))

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def sparse_columns(self) -> list:
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cols

    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix._raw(tuple(() for _ in range(self.ncols)), 0)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(tuple(tuple(x + y for x, y in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(tuple(tuple(x - y for x, y in zip(r, s))
                                 for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-x for x in r) for r in self.rows), self.ncols)

    def scale(self, s) -> "Matrix":
        s = Q(s)
        return Matrix._raw(tuple(tuple(s * x for x in r) for r in self.rows), self.ncols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch: {self.shape} applied to length {len(v)}")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz if r[j]), ZERO) for r in self.rows)

    def apply_sparse(self, v: dict) -> dict:
        out = {}
        for i, r in enumerate(self.rows):
            s = ZERO
            for j, x in v.items():
                y = r[j]
                if y:
                    s += y * x
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            orows = other.rows
            n = other.ncols
            out = []
            for r in self.rows:
                acc = [ZERO] * n
                for k, x in enumerate(r):
                    if x:
                        for j, y in enumerate(orows[k]):
                            if y:
                                acc[j] += x * y
                out.append(tuple(acc))
            return Matrix._raw(tuple(out), n)
        return self.apply(other)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def kernel(self) -> list:
        return kernel(self)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + list(unit_vec(n, i)) for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix._raw(tuple(tuple(r[n:]) for r in red[:n]), n)


def rref(rows: Sequence[Sequence], ncols: int) -> tuple:
    """Reduced row echelon form. Returns (rows, pivot column list)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = ONE / pr[c]
        if inv != ONE:
            for j in range(c, ncols):
                if pr[j]:
                    pr[j] *= inv
        nzc = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for j in nzc:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return m, pivots


def kernel(A: Matrix) -> list:
    """Basis of {x : A x = 0}, one vector per free column."""
    red, piv = rref(A.rows, A.ncols)
    pivset = set(piv)
    basis = []
    for f in range(A.ncols):
        if f in pivset:
            continue
        x = [ZERO] * A.ncols
        x[f] = ONE
        for r, p in enumerate(piv):
            x[p] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve_linear(A: Matrix, b: Sequence) -> tuple:
    """Solve A x = b exactly.

    Returns the unique solution. Raises :class:`NoSolution` if the system is
    inconsistent and :class:`UnderDetermined` (carrying one particular
    solution and a kernel basis) if it has more than one solution.
    """
    b = vec(b)
    if len(b) != A.nrows:
        raise ValueError(f"shape mismatch: {A.shape} with right-hand side of length {len(b)}")
    n = A.ncols
    aug = [list(r) + [y] for r, y in zip(A.rows, b)]
    red, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        raise NoSolution("inconsistent linear system")
    x = [ZERO] * n
    for r, p in enumerate(piv):
        x[p] = red[r][n]
    x = tuple(x)
    if len(piv) < n:
        raise UnderDetermined(x, kernel(A))
    return x


def solve_columns(A: Matrix, rhs: Sequence[Sequence]) -> list:
    """Solve A x = b for every b in ``rhs`` with a single elimination.

    Raises :class:`NoSolution` or :class:`UnderDetermined` like
    :func:`solve_linear`; the exception's ``column`` attribute names the
    offending right-hand side.
    """
    n, k = A.ncols, len(rhs)
    rhs = [vec(b) for b in rhs]
    for b in rhs:
        if len(b) != A.nrows:
            raise ValueError("right-hand side length does not match matrix rows")
    aug = [list(r) + [b[i] for b in rhs] for i, r in enumerate(A.rows)]
    red, piv = rref(aug, n + k)
    coef_piv = [p for p in piv if p < n]
    for p in piv:
        if p >= n:
            exc = NoSolution(f"inconsistent linear system for right-hand side {p - n}")
            exc.column = p - n
            raise exc
    out = []
    for c in range(k):
        x = [ZERO] * n
        for r, p in enumerate(coef_piv):
            x[p] = red[r][n + c]
        out.append(tuple(x))
    if len(coef_piv) < n:
        exc = UnderDetermined(out[0] if out else zero_vec(n), kernel(A))
        exc.column = 0
        raise exc
    return out


def kron(X: Matrix, Y: Matrix) -> Matrix:
    """Kronecker product; (X (x) Y)[(i,k),(j,l)] = X[i,j] Y[k,l]."""
    rows = []
    for xr in X.rows:
        for yr in Y.rows:
            rows.append(tuple((x * y) if (x and y) else ZERO for x in xr for y in yr))
    return Matrix._raw(tuple(rows), X.ncols * Y.ncols)


def kron_vec(v: Sequence, w: Sequence) -> tuple:
    return tuple((x * y) if (x and y) else ZERO for x in v for y in w)


def sp_kron(v: dict, w: dict, dim_w: int) -> dict:
    return {i * dim_w + k: x * y for i, x in v.items() for k, y in w.items()}


def direct_sum(X: Matrix, Y: Matrix) -> Matrix:
    rows = [tuple(r) + zero_vec(Y.ncols) for r in X.rows]
    rows += [zero_vec(X.ncols) + tuple(r) for r in Y.rows]
    return Matrix._raw(tuple(rows), X.ncols + Y.ncols)


def unflatten(index: int, dims: Sequence[int]) -> tuple:
    out = []
    for d in reversed(dims):
        index, r = divmod(index, d)
        out.append(r)
    return tuple(reversed(out))


def flatten(multi: Sequence[int], dims: Sequence[int]) -> int:
    index = 0
    for i, d in zip(multi, dims):
        index = index * d + i
    return index


def permute_factors(t, dims: Sequence[int], perm: Sequence[int]):
    """Move tensor factor ``perm[k]`` of ``t`` to position ``k``.

    ``t`` is a dense tuple or a sparse dict over the flattened product of
    ``dims``; the result has the same representation.
    """
    dims = tuple(dims)
    if sorted(perm) != list(range(len(dims))):
        raise ValueError(f"not a permutation of {len(dims)} factors: {perm}")
    new_dims = tuple(dims[p] for p in perm)
    total = 1
    for d in dims:
        total *= d
    if isinstance(t, dict):
        out = {}
        for idx, x in t.items():
            if idx >= total or idx < 0:
                raise ValueError("index out of range for the given factor dimensions")
            m = unflatten(idx, dims)
            out[flatten([m[p] for p in perm], new_dims)] = x
        return out
    if len(t) != total:
        raise ValueError(f"tensor length {len(t)} does not match dimensions {dims}")
    out = [ZERO] * total
    for idx, x in enumerate(t):
        if x:
            m = unflatten(idx, dims)
            out[flatten([m[p] for p in perm], new_dims)] = x
    return tuple(out)


def flip(t, dim_v: int, dim_w: int):
    """The flip V (x) W -> W (x) V."""
    return permute_factors(t, (dim_v, dim_w), (1, 0))


def flip23(t, dims: Sequence[int]):
    """Exchange the middle two factors of a four-fold tensor."""
    return permute_factors(t, dims, (0, 2, 1, 3))


def permutation_matrix_of_factors(dims: Sequence[int], perm: Sequence[int]) -> Matrix:
    total = 1
    for d in dims:
        total *= d
    cols = [permute_factors({j: ONE}, dims, perm) for j in range(total)]
    return Matrix.from_sparse_columns(cols, total)


class RowSpace:
    """Incrementally built span of sparse vectors, kept in reduced echelon form.

    Every stored row has coefficient 1 at its pivot and 0 at every other
    pivot, so reducing a vector needs one pass over the pivots it touches.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in [p for p in v if p in self.rows]:
            c = v.get(p)
            if c:
                sp_axpy(v, -c, self.rows[p])
        return v

    def add(self, v: dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = ONE / r[p]
        if inv != ONE:
            r = {i: x * inv for i, x in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                sp_axpy(row, -c, r)
        self.rows[p] = r
        return True

    def add_all(self, vs: Iterable[dict], stop_at: int | None = None) -> int:
        for v in vs:
            self.add(v)
            if stop_at is not None and self.rank >= stop_at:
                break
        return self.rank

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def kernel(self) -> list:
        """Kernel basis when the stored rows are read as equations on dim unknowns."""
        free = [f for f in range(self.dim) if f not in self.rows]
        out = []
        for f in free:
            x = {f: ONE}
            for p, row in self.rows.items():
                c = row.get(f)
                if c:
                    x[p] = -c
            out.append(x)
        return out

    def basis(self) -> list:
        return [self.rows[p] for p in sorted(self.rows)]


def span_rank(vectors: Iterable, dim: int) -> int:
    rs = RowSpace(dim)
    for v in vectors:
        rs.add(v if isinstance(v, dict) else sparse(v))
    return rs.rank


def same_span(xs: Iterable, ys: Iterable, dim: int) -> bool:
    a, b = RowSpace(dim), RowSpace(dim)
    for v in xs:
        a.add(v if isinstance(v, dict) else sparse(v))
    for v in ys:
        b.add(v if isinstance(v, dict) else sparse(v))
    if a.rank != b.rank:
        return False
    return all(a.contains(r) for r in b.basis())


def sparse_kernel(equations: Iterable[dict], nvars: int) -> list:
    rs = RowSpace(nvars)
    for eq in equations:
        if eq:
            rs.add(eq)
    return rs.kernel()


__all__ = [
    "Q", "ZERO", "ONE", "Matrix", "NoSolution", "UnderDetermined", "RowSpace",
    "solve_linear", "solve_columns", "kernel", "rref", "kron", "kron_vec", "sp_kron", "direct_sum",
    "flip", "flip23", "permute_factors", "permutation_matrix_of_factors",
    "flatten", "unflatten", "vec", "zero_vec", "unit_vec", "sparse", "dense",
    "sp_add", "sp_axpy", "sp_scale", "sp_dot", "dot", "span_rank", "same_span",
    "sparse_kernel",
]
