"""Dense complex matrices over two interchangeable scalar kernels.

The exact kernel stores Gaussian rationals (a + b*i with a, b rational) and
gives decidable equality; the float kernel stores complex128 and compares
through explicit tolerances.  All values are immutable and all operations
are pure, so matrices can be shared freely across campaign workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import (
    ExactKernelUnsupportedError,
    KernelMismatchError,
    SchemaError,
    ShapeMismatchError,
    SingularMatrixError,
)

EXACT = "exact"
FLOAT = "float"

_KERNELS = (EXACT, FLOAT)


def _frac(x) -> Fraction:
    """Coerce to Fraction, refusing floats (exactness would be accidental)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} in the exact kernel")


class GaussianRational:
    """Immutable complex number re + im*i with rational components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, cls):
            return value
        if isinstance(value, (int, Fraction, str)):
            return cls(value)
        if isinstance(value, tuple) and len(value) == 2:
            return cls(value[0], value[1])
        raise TypeError(f"cannot coerce {value!r} to GaussianRational")

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and self.im == 0
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


@dataclass(frozen=True)
class Tolerance:
    """Residual acceptance rule: r passes against scale s iff r <= abs + rel*s.

    The exact kernel ignores tolerances entirely (abs = rel = 0 semantics).
    """

    abs: float = 0.0
    rel: float = 1e-9

    def __post_init__(self):
        if self.abs < 0 or self.rel < 0:
            raise ValueError("tolerance components must be nonnegative")

    def passes(self, residual: float, scale: float = 1.0) -> bool:
        return residual <= self.abs + self.rel * scale


DEFAULT_TOL = Tolerance()
RANK_TOL = Tolerance(rel=1e-10)

# Smallest positive double; keeps "nonzero exact residual" nonzero in float.
_TINY = 5e-324


class Matrix:
    """Immutable dense complex matrix in one of the two kernels."""

    __slots__ = ("kernel", "rows", "cols", "_data")

    def __init__(self, kernel: str, rows: int, cols: int, data):
        if kernel not in _KERNELS:
            raise ValueError(f"unknown kernel {kernel!r}")
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- construction ------------------------------------------------------

    @classmethod
    def exact(cls, rows) -> "Matrix":
        """Exact-kernel matrix from nested entries (int, Fraction, str, (re, im))."""
        data = tuple(tuple(GaussianRational.coerce(e) for e in row) for row in rows)
        r = len(data)
        c = len(data[0]) if r else 0
        if any(len(row) != c for row in data):
            raise ShapeMismatchError("ragged rows")
        return cls(EXACT, r, c, data)

    @classmethod
    def from_complex(cls, array_like) -> "Matrix":
        """Float-kernel matrix from anything numpy can coerce to complex128."""
        a = np.array(array_like, dtype=np.complex128)
        if a.ndim != 2:
            raise ShapeMismatchError("expected a 2-d array")
        a.setflags(write=False)
        return cls(FLOAT, a.shape[0], a.shape[1], a)

    @classmethod
    def _wrap_float(cls, a: np.ndarray) -> "Matrix":
        a = np.ascontiguousarray(a, dtype=np.complex128)
        a.setflags(write=False)
        return cls(FLOAT, a.shape[0], a.shape[1], a)

    # -- basic queries -----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int):
        if self.kernel == EXACT:
            return self._data[i][j]
        return complex(self._data[i, j])

    def __getitem__(self, key):
        i, j = key
        return self.entry(i, j)

    def to_complex_array(self) -> np.ndarray:
        if self.kernel == FLOAT:
            return np.array(self._data, copy=True)
        out = np.zeros((self.rows, self.cols), dtype=np.complex128)
        for i, row in enumerate(self._data):
            for j, e in enumerate(row):
                out[i, j] = e.to_complex()
        return out

    def to_float(self) -> "Matrix":
        """Convert to the float kernel (identity on float matrices)."""
        if self.kernel == FLOAT:
            return self
        return Matrix._wrap_float(self.to_complex_array())

    def is_zero(self) -> bool:
        if self.kernel == EXACT:
            return all(e.is_zero() for row in self._data for e in row)
        return not np.any(self._data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.kernel != other.kernel or self.shape != other.shape:
            return False
        if self.kernel == EXACT:
            return self._data == other._data
        return bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self):
        return f"Matrix({self.kernel}, {self.rows}x{self.cols})"

    # -- arithmetic --------------------------------------------------------

    def _check_same_kernel(self, other: "Matrix"):
        if self.kernel != other.kernel:
            raise KernelMismatchError(f"{self.kernel} vs {other.kernel}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_kernel(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"add {self.shape} vs {other.shape}")
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data + other._data)
        data = tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self._data, other._data)
        )
        return Matrix(EXACT, self.rows, self.cols, data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_kernel(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"sub {self.shape} vs {other.shape}")
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data - other._data)
        data = tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self._data, other._data)
        )
        return Matrix(EXACT, self.rows, self.cols, data)

    def __neg__(self) -> "Matrix":
        if self.kernel == FLOAT:
            return Matrix._wrap_float(-self._data)
        return Matrix(
            EXACT, self.rows, self.cols,
            tuple(tuple(-e for e in row) for row in self._data),
        )

    def __mul__(self, scalar) -> "Matrix":
        """Scalar multiple; use @ for the matrix product."""
        if isinstance(scalar, Matrix):
            raise TypeError("use A @ B for matrix products")
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data * complex(scalar))
        s = GaussianRational.coerce(scalar)
        return Matrix(
            EXACT, self.rows, self.cols,
            tuple(tuple(e * s for e in row) for row in self._data),
        )

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_kernel(other)
        if self.cols != other.rows:
            raise ShapeMismatchError(f"mul {self.shape} vs {other.shape}")
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data @ other._data)
        n, k, m = self.rows, self.cols, other.cols
        bd = other._data
        out = []
        for i in range(n):
            ai = self._data[i]
            row = []
            for j in range(m):
                acc_re = Fraction(0)
                acc_im = Fraction(0)
                for t in range(k):
                    x = ai[t]
                    if x.re == 0 and x.im == 0:
                        continue
                    y = bd[t][j]
                    acc_re += x.re * y.re - x.im * y.im
                    acc_im += x.re * y.im + x.im * y.re
                row.append(GaussianRational(acc_re, acc_im))
            out.append(tuple(row))
        return Matrix(EXACT, n, m, tuple(out))

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ShapeMismatchError("powers need a square matrix")
        if k < 0:
            raise ValueError("negative powers not supported; invert first")
        result = identity(self.rows, self.kernel)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base_needed = k >> 1
            if base_needed:
                base = base @ base
            k = base_needed
        return result

    # -- structural maps ---------------------------------------------------

    def transpose(self) -> "Matrix":
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data.T)
        data = tuple(
            tuple(self._data[i][j] for i in range(self.rows))
            for j in range(self.cols)
        )
        return Matrix(EXACT, self.cols, self.rows, data)

    def conjugate(self) -> "Matrix":
        if self.kernel == FLOAT:
            return Matrix._wrap_float(np.conj(self._data))
        return Matrix(
            EXACT, self.rows, self.cols,
            tuple(tuple(e.conjugate() for e in row) for row in self._data),
        )

    def adjoint(self) -> "Matrix":
        """Conjugate transpose."""
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data.conj().T)
        data = tuple(
            tuple(self._data[i][j].conjugate() for i in range(self.rows))
            for j in range(self.cols)
        )
        return Matrix(EXACT, self.cols, self.rows, data)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        """Rows r0:r1, columns c0:c1."""
        if self.kernel == FLOAT:
            return Matrix._wrap_float(self._data[r0:r1, c0:c1])
        data = tuple(row[c0:c1] for row in self._data[r0:r1])
        return Matrix(EXACT, r1 - r0, c1 - c0, data)


# -- constructors ----------------------------------------------------------


def identity(n: int, kernel: str = EXACT) -> Matrix:
    if kernel == FLOAT:
        return Matrix._wrap_float(np.eye(n, dtype=np.complex128))
    data = tuple(
        tuple(GR_ONE if i == j else GR_ZERO for j in range(n)) for i in range(n)
    )
    return Matrix(EXACT, n, n, data)


def zeros(rows: int, cols: int, kernel: str = EXACT) -> Matrix:
    if kernel == FLOAT:
        return Matrix._wrap_float(np.zeros((rows, cols), dtype=np.complex128))
    data = tuple(tuple(GR_ZERO for _ in range(cols)) for _ in range(rows))
    return Matrix(EXACT, rows, cols, data)


def diagonal(entries, kernel: str = EXACT) -> Matrix:
    entries = list(entries)
    n = len(entries)
    if kernel == FLOAT:
        return Matrix._wrap_float(np.diag(np.array(entries, dtype=np.complex128)))
    data = tuple(
        tuple(GaussianRational.coerce(entries[i]) if i == j else GR_ZERO
              for j in range(n))
        for i in range(n)
    )
    return Matrix(EXACT, n, n, data)


def hstack(a: Matrix, b: Matrix) -> Matrix:
    a._check_same_kernel(b)
    if a.rows != b.rows:
        raise ShapeMismatchError("hstack needs equal row counts")
    if a.kernel == FLOAT:
        return Matrix._wrap_float(np.hstack([a._data, b._data]))
    data = tuple(ra + rb for ra, rb in zip(a._data, b._data))
    return Matrix(EXACT, a.rows, a.cols + b.cols, data)


def vstack(a: Matrix, b: Matrix) -> Matrix:
    a._check_same_kernel(b)
    if a.cols != b.cols:
        raise ShapeMismatchError("vstack needs equal column counts")
    if a.kernel == FLOAT:
        return Matrix._wrap_float(np.vstack([a._data, b._data]))
    return Matrix(EXACT, a.rows + b.rows, a.cols, a._data + b._data)


# -- elementary operations -------------------------------------------------


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """AB - BA for square matrices of equal size."""
    if not (a.is_square and b.is_square and a.rows == b.rows):
        raise ShapeMismatchError("commutator needs equal square matrices")
    return a @ b - b @ a


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    """Block-diagonal assembly; rectangular blocks are allowed."""
    a._check_same_kernel(b)
    rows = a.rows + b.rows
    cols = a.cols + b.cols
    if a.kernel == FLOAT:
        out = np.zeros((rows, cols), dtype=np.complex128)
        out[: a.rows, : a.cols] = a._data
        out[a.rows :, a.cols :] = b._data
        return Matrix._wrap_float(out)
    top = tuple(row + tuple(GR_ZERO for _ in range(b.cols)) for row in a._data)
    bottom = tuple(
        tuple(GR_ZERO for _ in range(a.cols)) + row for row in b._data
    )
    return Matrix(EXACT, rows, cols, top + bottom)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; satisfies (A kron B)(C kron D) = AC kron BD."""
    a._check_same_kernel(b)
    if a.kernel == FLOAT:
        return Matrix._wrap_float(np.kron(a._data, b._data))
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = []
    for i in range(rows):
        ia, ib = divmod(i, b.rows)
        row = []
        for j in range(cols):
            ja, jb = divmod(j, b.cols)
            row.append(a._data[ia][ja] * b._data[ib][jb])
        out.append(tuple(row))
    return Matrix(EXACT, rows, cols, tuple(out))


# -- exact elimination -----------------------------------------------------


def _exact_rref(a: Matrix) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row echelon form and pivot columns, exact arithmetic."""
    work = [list(row) for row in a._data]
    nrows, ncols = a.rows, a.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not work[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = GR_ONE / work[r][c]
        work[r] = [e * inv for e in work[r]]
        for i in range(nrows):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [e - f * p for e, p in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work, pivots


def rank(a: Matrix, tol: Tolerance | None = None) -> int:
    """Exact kernel: elimination rank.  Float: column-pivoted QR rank."""
    if a.rows == 0 or a.cols == 0:
        return 0
    if a.kernel == EXACT:
        return len(_exact_rref(a)[1])
    tol = tol or RANK_TOL
    r = scipy.linalg.qr(a._data, mode="r", pivoting=True)[0]
    diag = np.abs(np.diagonal(r))
    if diag.size == 0:
        return 0
    cutoff = tol.abs + tol.rel * float(diag.max())
    return int(np.count_nonzero(diag > cutoff))


def nullspace_basis(a: Matrix, tol: Tolerance | None = None) -> Matrix:
    """Columns spanning ker(A); empty (n x 0) when A is injective."""
    n = a.cols
    if a.kernel == EXACT:
        rref, pivots = _exact_rref(a)
        free = [c for c in range(n) if c not in pivots]
        cols = []
        for fc in free:
            v = [GR_ZERO] * n
            v[fc] = GR_ONE
            for r, pc in enumerate(pivots):
                v[pc] = -rref[r][fc]
            cols.append(v)
        data = tuple(tuple(cols[j][i] for j in range(len(free))) for i in range(n))
        return Matrix(EXACT, n, len(free), data)
    r = rank(a, tol)
    if a.rows == 0 or n == 0:
        return Matrix._wrap_float(np.eye(n, dtype=np.complex128))
    vh = np.linalg.svd(a._data)[2]
    return Matrix._wrap_float(vh[r:].conj().T)


def columnspace_basis(a: Matrix, tol: Tolerance | None = None) -> Matrix:
    """Columns spanning range(A): pivot columns exactly, left singular vectors in float."""
    if a.kernel == EXACT:
        pivots = _exact_rref(a)[1]
        data = tuple(tuple(row[c] for c in pivots) for row in a._data)
        return Matrix(EXACT, a.rows, len(pivots), data)
    r = rank(a, tol)
    if r == 0:
        return zeros(a.rows, 0, FLOAT)
    u = np.linalg.svd(a._data)[0]
    return Matrix._wrap_float(u[:, :r])


def inverse(a: Matrix, tol: Tolerance | None = None) -> Matrix:
    if not a.is_square:
        raise ShapeMismatchError("inverse needs a square matrix")
    n = a.rows
    if n == 0:
        return a
    if a.kernel == FLOAT:
        if rank(a, tol) < n:
            raise SingularMatrixError(f"numerical rank below {n}")
        return Matrix._wrap_float(np.linalg.inv(a._data))
    aug = hstack(a, identity(n, EXACT))
    rref, pivots = _exact_rref(aug)
    if pivots[: n] != list(range(n)):
        raise SingularMatrixError("exact rank deficient")
    data = tuple(tuple(row[n:]) for row in rref[:n])
    return Matrix(EXACT, n, n, data)


def solve(a: Matrix, b: Matrix, tol: Tolerance | None = None) -> Matrix:
    """X with A·X = B for invertible square A."""
    if not a.is_square:
        raise ShapeMismatchError("solve needs a square A")
    if a.rows != b.rows:
        raise ShapeMismatchError("incompatible right-hand side")
    a._check_same_kernel(b)
    n = a.rows
    if n == 0:
        return b
    if a.kernel == FLOAT:
        if rank(a, tol) < n:
            raise SingularMatrixError(f"numerical rank below {n}")
        return Matrix._wrap_float(np.linalg.solve(a._data, b._data))
    aug = hstack(a, b)
    rref, pivots = _exact_rref(aug)
    if pivots[: n] != list(range(n)):
        raise SingularMatrixError("exact rank deficient")
    data = tuple(tuple(row[n:]) for row in rref[:n])
    return Matrix(EXACT, n, b.cols, data)


def operator_norm_estimate(a: Matrix) -> float:
    """Largest singular value, float kernel only.

    Computed by a full SVD (LAPACK bidiagonalization), which is well inside
    the 1e-10 relative-accuracy budget at desk scale.
    """
    if a.kernel != FLOAT:
        raise ExactKernelUnsupportedError(
            "operator norms are irrational in general; convert with to_float()"
        )
    if a.rows == 0 or a.cols == 0:
        return 0.0
    return float(np.linalg.svd(a._data, compute_uv=False)[0])


def fro_norm(a: Matrix) -> float:
    """Frobenius norm as a float; exact entries overflowing a double give inf."""
    if a.kernel == FLOAT:
        return float(np.linalg.norm(a._data))
    total = 0.0
    for row in a._data:
        for e in row:
            if e.is_zero():
                continue
            try:
                total += float(e.abs_sq())
            except OverflowError:
                return math.inf
    return math.sqrt(total)


def residual_of(diff: Matrix, tol: Tolerance, scale: float) -> tuple[float, bool]:
    """Residual magnitude and pass verdict for a difference matrix.

    Exact kernel: verdict is exact zeroness and the tolerance is ignored;
    the reported magnitude is clamped away from 0.0 for nonzero matrices.
    """
    if diff.kernel == EXACT:
        if diff.is_zero():
            return 0.0, True
        return max(fro_norm(diff), _TINY), False
    r = fro_norm(diff)
    return r, tol.passes(r, scale)


# -- JSON schema -----------------------------------------------------------


def matrix_to_json(a: Matrix) -> dict:
    """Schema: {"kernel","rows","cols","entries":[[re,im],...]} row-major."""
    entries: list[list] = []
    if a.kernel == EXACT:
        for row in a._data:
            for e in row:
                entries.append([str(e.re), str(e.im)])
    else:
        for i in range(a.rows):
            for j in range(a.cols):
                z = a._data[i, j]
                entries.append([float(z.real), float(z.imag)])
    return {"kernel": a.kernel, "rows": a.rows, "cols": a.cols, "entries": entries}


def matrix_from_json(obj) -> Matrix:
    if not isinstance(obj, dict):
        raise SchemaError("matrix JSON must be an object")
    try:
        kernel = obj["kernel"]
        rows = obj["rows"]
        cols = obj["cols"]
        entries = obj["entries"]
    except KeyError as exc:
        raise SchemaError(f"matrix JSON missing key {exc}") from None
    if kernel not in _KERNELS:
        raise SchemaError(f"unknown kernel {kernel!r}")
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise SchemaError("rows/cols must be nonnegative integers")
    if len(entries) != rows * cols:
        raise SchemaError(f"expected {rows * cols} entries, got {len(entries)}")
    if kernel == FLOAT:
        flat = np.empty(rows * cols, dtype=np.complex128)
        for k, pair in enumerate(entries):
            try:
                re, im = pair
                flat[k] = complex(float(re), float(im))
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"bad float entry {pair!r}") from exc
        return Matrix._wrap_float(flat.reshape(rows, cols))
    data = []
    it = iter(entries)
    for _ in range(rows):
        row = []
        for _ in range(cols):
            pair = next(it)
            try:
                re, im = pair
                row.append(GaussianRational(Fraction(str(re)), Fraction(str(im))))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad exact entry {pair!r}") from exc
        data.append(tuple(row))
    return Matrix(EXACT, rows, cols, tuple(data))
