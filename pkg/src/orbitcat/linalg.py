"""Exact dense linear algebra over finite fields.

Matrices are numpy int64 arrays of field codes, paired with a FiniteField.
Row reduction, kernels, solving and rank all come from one reduced
row-echelon routine with a fixed pivoting rule (first nonzero entry in
column order), so every basis this module emits is deterministic.

Characteristic polynomials use the Samuelson-Berkowitz recurrence, which
is division-free and batches over a stack of matrices; minimal
polynomials come from the first linear dependence among matrix powers.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .ffield import FiniteField
from .poly import Poly


class Mat:
    """Dense matrix over a finite field (row-major entries)."""

    __slots__ = ("field", "a")

    def __init__(self, field: FiniteField, data):
        a = np.asarray(data, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        self.field = field
        self.a = a % field.p if field.n == 1 else a % field.q

    @classmethod
    def eye(cls, field, m):
        return cls(field, np.eye(m, dtype=np.int64))

    @classmethod
    def zeros(cls, field, r, c):
        return cls(field, np.zeros((r, c), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def entries(self):
        """Row-major list of Scalar entries."""
        return [self.field.scalar(int(c)) for c in self.a.ravel()]

    def __add__(self, other):
        self._check(other)
        return Mat(self.field, self.field.vadd(self.a, other.a))

    def __sub__(self, other):
        self._check(other)
        return Mat(self.field, self.field.vsub(self.a, other.a))

    def __neg__(self):
        return Mat(self.field, self.field.vneg(self.a))

    def __matmul__(self, other):
        self._check(other, shapes=False)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Mat(self.field, self.field.vmatmul(self.a, other.a))

    def __mul__(self, scalar_code):
        return Mat(self.field, self.field.vmul(self.a, int(scalar_code)))

    __rmul__ = __mul__

    def transpose(self):
        return Mat(self.field, self.a.T.copy())

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field.p, self.field.n, self.a.shape, self.a.tobytes()))

    def _check(self, other, shapes=True):
        if not isinstance(other, Mat) or other.field != self.field:
            raise ValueError("field mismatch")
        if shapes and self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self):
        return f"Mat({self.field!r}, {self.a.tolist()})"


# ---------------------------------------------------------------------------
# row reduction and friends (raw-array API used throughout the library)


def rref(field: FiniteField, M) -> tuple:
    """Reduced row echelon form.  Returns (R, pivot column list)."""
    R = np.array(M, dtype=np.int64)
    if R.ndim != 2:
        raise ValueError("rref needs a 2-d array")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = R[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = field.inv(int(R[r, c]))
        R[r] = field.vmul(R[r], inv)
        mask = np.nonzero(R[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            R[mask] = field.vsub(R[mask], field.vmul(R[mask, c][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field, M) -> int:
    return len(rref(field, M)[1])


def kernel_basis(field, M):
    """Echelonized basis of the right null space, as a list of 1-d arrays.

    The basis comes straight from the reduced echelon form: one vector per
    free column, with a 1 in the free position and the negated pivot-row
    entries above it.
    """
    M = np.asarray(M, dtype=np.int64)
    rows, cols = M.shape
    R, pivots = rref(field, M)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fcol in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fcol] = 1
        for r, pcol in enumerate(pivots):
            v[pcol] = field.neg(int(R[r, fcol]))
        basis.append(v)
    return basis


def solve(field, A, B) -> Optional[np.ndarray]:
    """Particular solution X of A X = B (free variables zero), or None."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    single = B.ndim == 1
    if single:
        B = B[:, None]
    if A.shape[0] != B.shape[0]:
        raise ValueError("incompatible shapes in solve")
    aug = np.concatenate([A, B], axis=1)
    R, pivots = rref(field, aug)
    ncols = A.shape[1]
    if any(p >= ncols for p in pivots):
        return None
    X = np.zeros((ncols, B.shape[1]), dtype=np.int64)
    for r, p in enumerate(pivots):
        X[p] = R[r, ncols:]
    return X[:, 0] if single else X


def inverse(field, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("inverse of non-square matrix")
    X = solve(field, A, field.eye(m))
    if X is None or not np.array_equal(field.vmatmul(A, X), field.eye(m)):
        raise ValueError("matrix is singular")
    return X


def is_invertible(field, A) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(field, A) == A.shape[0]


class SpanSolver:
    """Echelonized span of row vectors with coordinate recovery.

    reduce(v) returns (residual, coords) where coords are relative to the
    echelon basis rows; v lies in the span iff the residual vanishes.
    """

    def __init__(self, field, rows):
        self.field = field
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2:
            rows = rows.reshape(len(rows), -1)
        R, pivots = rref(field, rows)
        self.basis = R[: len(pivots)].copy()
        self.pivots = list(pivots)

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, v):
        v = np.array(v, dtype=np.int64).ravel()
        coords = np.zeros(self.dim, dtype=np.int64)
        for r, p in enumerate(self.pivots):
            c = int(v[p])
            if c:
                coords[r] = c
                v = self.field.vsub(v, self.field.vmul(c, self.basis[r]))
        return v, coords

    def contains(self, v) -> bool:
        res, _ = self.reduce(v)
        return not res.any()

    def coords(self, v):
        res, coords = self.reduce(v)
        if res.any():
            raise ValueError("vector not in span")
        return coords

    def batch_coords(self, V):
        """Coordinates for many vectors at once; V has shape (N, width).

        The stored basis is in reduced echelon form, so the coordinates are
        the pivot-column entries; a single reconstruction product verifies
        membership."""
        V = np.asarray(V, dtype=np.int64)
        if self.dim == 0:
            if V.any():
                raise ValueError("some vector not in span")
            return np.zeros((V.shape[0], 0), dtype=np.int64)
        coords = V[:, self.pivots]
        recon = self.field.vmatmul(coords, self.basis)
        if not np.array_equal(recon, V):
            raise ValueError("some vector not in span")
        return coords


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials


def charpoly_batched(field, A) -> np.ndarray:
    """Characteristic polynomials of a stack of matrices.

    A has shape (N, m, m); the result has shape (N, m+1) with coefficients
    in descending power order, leading coefficient 1.  Samuelson-Berkowitz:
    division-free, extends the char poly across principal submatrices via
    Toeplitz-style products with the Krylov scalars R * Ai^k * C.
    """
    A = np.asarray(A, dtype=np.int64)
    N, m, _ = A.shape
    polys = np.ones((N, 1), dtype=np.int64)
    for i in range(m):
        Ai = A[:, :i, :i]
        Rrow = A[:, i, :i]
        Ccol = A[:, :i, i]
        a = A[:, i, i]
        # s[k] = Rrow . Ai^k . Ccol
        s = np.zeros((N, i), dtype=np.int64)
        v = Ccol
        for k in range(i):
            s[:, k] = field.vsum(field.vmul(Rrow, v), axis=1)
            if k < i - 1:
                v = field.vmatmul(Ai, v[:, :, None])[:, :, 0]
        # p_{i+1} = (lambda - a) * p_i  -  sum_k s_k * trunc(p_i, i - k)
        new = np.zeros((N, i + 2), dtype=np.int64)
        new[:, : i + 1] = field.vadd(new[:, : i + 1], polys)
        new[:, 1:] = field.vsub(new[:, 1:], field.vmul(a[:, None], polys))
        for k in range(i):
            keep = i - k  # leading coefficients of p_i kept after truncation
            chunk = field.vmul(s[:, k][:, None], polys[:, :keep])
            new[:, i + 2 - keep :] = field.vsub(new[:, i + 2 - keep :], chunk)
        polys = new
    return polys


def char_poly(field, A) -> Poly:
    """Characteristic polynomial (monic) of a single square matrix."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[0] != A.shape[1]:
        raise ValueError("characteristic polynomial of non-square matrix")
    desc = charpoly_batched(field, A[None, :, :])[0]
    return Poly(field, list(desc[::-1]))


class _KrylovTracker:
    """Incremental echelon with coordinate tracking in the original rows.

    Feed vectors one at a time; the first vector that is dependent on the
    earlier ones yields its combination coefficients.
    """

    def __init__(self, field, width):
        self.field = field
        self.rows = []  # echelonized (vector, combo) pairs
        self.pivots = []
        self.count = 0
        self.width = width

    def add(self, v):
        """Returns None if independent, else combination coefficients."""
        F = self.field
        v = np.array(v, dtype=np.int64).ravel()
        combo = np.zeros(self.count + 1, dtype=np.int64)
        combo[self.count] = 1
        for (w, cw), p in zip(self.rows, self.pivots):
            c = int(v[p])
            if c:
                v = F.vsub(v, F.vmul(c, w))
                combo[: len(cw)] = F.vsub(combo[: len(cw)], F.vmul(c, cw))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return combo
        p = int(nz[0])
        inv = F.inv(int(v[p]))
        self.rows.append((F.vmul(v, inv), F.vmul(combo, inv)))
        self.pivots.append(p)
        self.count += 1
        return None


def min_poly(field, A) -> Poly:
    """Minimal polynomial via the first dependence among powers of A."""
    A = np.asarray(A, dtype=np.int64)
    m = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("minimal polynomial of non-square matrix")
    if m == 0:
        return Poly.one(field)
    tracker = _KrylovTracker(field, m * m)
    power = field.eye(m)
    for k in range(m + 1):
        combo = tracker.add(power.ravel())
        if combo is not None:
            return Poly(field, [int(c) for c in combo])
        power = field.vmatmul(power, A)
    raise AssertionError("no dependence among matrix powers")  # unreachable


def min_poly_of_action(field, mul, dim: int, start) -> Poly:
    """Minimal polynomial of an element given its multiplication action.

    mul(v) must return the product x*v in coordinates; start is the
    coordinate vector of the identity.  Iterates powers of the element
    itself, so the cost stays linear in the ambient dimension.
    """
    tracker = _KrylovTracker(field, dim)
    cur = np.array(start, dtype=np.int64)
    for k in range(dim + 1):
        combo = tracker.add(cur)
        if combo is not None:
            return Poly(field, [int(c) for c in combo])
        cur = mul(cur)
    raise AssertionError("no dependence among element powers")


# ---------------------------------------------------------------------------
# public wrappers in terms of Mat


def mat_rank(m: Mat) -> int:
    """Rank by row reduction."""
    return rank(m.field, m.a)


def mat_kernel(m: Mat):
    """Echelonized right-kernel basis as a list of column vectors."""
    return [Mat(m.field, v[:, None]) for v in kernel_basis(m.field, m.a)]


def mat_solve(a: Mat, b: Mat) -> Optional[Mat]:
    """Particular solution x of a x = b, or None when inconsistent."""
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    X = solve(a.field, a.a, b.a)
    return None if X is None else Mat(a.field, X)


def mat_min_poly(m: Mat) -> Poly:
    if m.rows != m.cols:
        raise ValueError("matrix must be square")
    return min_poly(m.field, m.a)


def mat_char_poly(m: Mat) -> Poly:
    if m.rows != m.cols:
        raise ValueError("matrix must be square")
    return char_poly(m.field, m.a)
