"""Small dense matrices over the rationals.

Entries are Python ints or :class:`fractions.Fraction`; every product and
comparison is exact.  Floating point appears only in
:func:`spectral_radius_estimate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import AsymmetricMatrixError, DimensionError

Number = Union[int, Fraction]

DEFAULT_PD_TOL = 1e-9


def to_exact(x) -> Number:
    """Coerce a scalar to int or Fraction.

    Floats are read through their shortest repr, so ``0.7`` becomes ``7/10``.
    Strings are parsed as decimals or ``p/q`` fractions.
    """
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        q = x
    elif isinstance(x, Rational):
        q = Fraction(x.numerator, x.denominator)
    elif isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        q = Fraction(repr(x))
    elif isinstance(x, str):
        q = Fraction(x.strip())
    else:
        q = Fraction(x)
    return q.numerator if q.denominator == 1 else q


@dataclass(frozen=True)
class Vector:
    entries: tuple

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", tuple(to_exact(x) for x in entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Number]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.entries)

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries)

    def __repr__(self) -> str:
        return f"Vector({[str(x) for x in self.entries]})"


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix stored as a tuple of row tuples."""

    data: tuple

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_exact(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise DimensionError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "data", data)

    @classmethod
    def _raw(cls, data: tuple) -> "Matrix":
        # trusted constructor: entries already exact, shape already checked
        m = object.__new__(cls)
        object.__setattr__(m, "data", data)
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._raw(tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __iter__(self):
        return iter(self.data)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.data)))

    @property
    def is_binary(self) -> bool:
        return all(x in (0, 1) for row in self.data for x in row)

    @property
    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.data for x in row)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_symmetric(self, tol: float = 0) -> bool:
        if not self.is_square:
            return False
        n = self.rows
        return all(
            abs(self.data[i][j] - self.data[j][i]) <= tol
            for i in range(n)
            for j in range(i + 1, n)
        )

    def scale(self, c) -> "Matrix":
        c = to_exact(c)
        return Matrix._raw(tuple(tuple(_norm(c * x) for x in row) for row in self.data))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        if isinstance(other, Vector):
            return mat_vec(self, other)
        return NotImplemented

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix._raw(
            tuple(tuple(_norm(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix._raw(
            tuple(tuple(_norm(a - b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        )

    def inf_norm(self) -> Number:
        """Maximum absolute row sum, exact."""
        return max(sum(abs(x) for x in row) for row in self.data)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.data], dtype=float)

    def tolist(self) -> list:
        return [list(row) for row in self.data]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix([{body}])"


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    bt = tuple(zip(*b.data))
    return Matrix._raw(
        tuple(
            tuple(_norm(sum(x * y for x, y in zip(row, col) if x and y)) for col in bt)
            for row in a.data
        )
    )


def mat_vec(a: Matrix, x: Vector) -> Vector:
    if a.cols != x.dim:
        raise DimensionError(f"cannot apply {a.shape} matrix to vector of dim {x.dim}")
    return Vector(sum(u * v for u, v in zip(row, x.entries)) for row in a.data)


def mat_power(a: Matrix, k: int) -> Matrix:
    if not a.is_square:
        raise DimensionError("power of a non-square matrix")
    result = Matrix.identity(a.rows)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def is_nilpotent(a: Matrix) -> bool:
    """Exact test: ``a**n == 0`` for an n x n matrix."""
    n = a.rows
    p = a
    e = 1
    while e < n:
        p = mat_mul(p, p)
        e *= 2
        if p.is_zero:
            return True
    return p.is_zero


def spectral_radius_estimate(a: Matrix, iters: int = 20) -> float:
    """Upper estimate of the spectral radius by repeated squaring.

    Returns ``||a^(2^iters)||_inf ** (2^-iters)``, computed with per-step
    renormalisation so that neither overflow nor underflow occurs.  The
    value never falls below the true radius (Gelfand).  Nilpotent inputs
    are detected exactly and give ``0.0``.
    """
    if not a.is_square:
        raise DimensionError("spectral radius of a non-square matrix")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if is_nilpotent(a):
        return 0.0
    b = a.to_numpy()
    scale = np.abs(b).sum(axis=1).max()
    b = b / scale
    # a^(2^k) = scale^(2^k) * exp(log_rest) * b
    log_rest = 0.0
    for k in range(1, iters + 1):
        b = b @ b
        nrm = np.abs(b).sum(axis=1).max()
        if nrm == 0.0:
            return 0.0
        b /= nrm
        log_rest = 2.0 * log_rest + math.log(nrm)
    return float(scale) * math.exp(log_rest / 2.0**iters)


def partial_map_radius(a: Matrix) -> int | None:
    """Exact spectral radius of a 0/1 matrix with at most one 1 per row.

    Such a matrix is the adjacency matrix of a partial function, so its
    radius is 1 if the functional digraph has a cycle and 0 otherwise.
    Returns None when the matrix is not of that shape.
    """
    if not a.is_square or not a.is_binary:
        return None
    succ = []
    for row in a.data:
        ones = [j for j, x in enumerate(row) if x]
        if len(ones) > 1:
            return None
        succ.append(ones[0] if ones else None)
    n = a.rows
    for start in range(n):
        v = start
        for _ in range(n):
            v = succ[v]
            if v is None:
                break
            if v == start:
                return 1
    return 0


def _check_symmetric(s: Matrix, tol: float) -> None:
    if not s.is_square:
        raise DimensionError("expected a square matrix")
    if not s.is_symmetric(tol):
        raise AsymmetricMatrixError("matrix is not symmetric within tolerance")


def symmetric_pivots(s: Matrix, tol: float = DEFAULT_PD_TOL) -> tuple[bool, list]:
    """Symmetric Gaussian elimination without row exchanges.

    Returns ``(psd, pivots)``.  A pivot within ``tol`` of zero is accepted
    only if the rest of its column is also within ``tol`` of zero; such a
    column is skipped.  A pivot below ``-tol`` rejects immediately.
    """
    _check_symmetric(s, tol)
    n = s.rows
    m = [list(row) for row in s.data]
    pivots = []
    for k in range(n):
        d = m[k][k]
        pivots.append(d)
        if d > tol:
            for i in range(k + 1, n):
                f = Fraction(m[i][k]) / d if m[i][k] else 0
                if f:
                    for j in range(k + 1, n):
                        m[i][j] -= f * m[k][j]
        elif d >= -tol:
            if any(abs(m[i][k]) > tol for i in range(k + 1, n)):
                return False, pivots
        else:
            return False, pivots
    return True, pivots


def is_positive_definite(s: Matrix, tol: float = DEFAULT_PD_TOL) -> bool:
    """True iff every elimination pivot of ``s`` exceeds ``tol``."""
    _check_symmetric(s, tol)
    n = s.rows
    m = [list(row) for row in s.data]
    for k in range(n):
        d = m[k][k]
        if not d > tol:
            return False
        for i in range(k + 1, n):
            f = Fraction(m[i][k]) / d if m[i][k] else 0
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return True


def is_positive_semidefinite(s: Matrix, tol: float = DEFAULT_PD_TOL) -> bool:
    return symmetric_pivots(s, tol)[0]


@dataclass(frozen=True)
class MatrixSet:
    """Indexed family ``A_1..A_m`` of square matrices of a common size.

    Symbols are 1-based throughout; use :meth:`matrix` rather than indexing
    ``matrices`` directly.
    """

    matrices: tuple

    def __init__(self, matrices: Iterable):
        mats = tuple(m if isinstance(m, Matrix) else Matrix(m) for m in matrices)
        if not mats:
            raise DimensionError("empty matrix set")
        n = mats[0].rows
        for m in mats:
            if m.shape != (n, n):
                raise DimensionError("all matrices must be square of the same size")
        object.__setattr__(self, "matrices", mats)

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].rows

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def matrix(self, k: int) -> Matrix:
        if not 1 <= k <= self.m:
            raise IndexError(f"symbol {k} outside 1..{self.m}")
        return self.matrices[k - 1]

    def product(self, word: Sequence[int]) -> Matrix:
        """``A_{w_1} A_{w_2} ... A_{w_t}``; the empty word gives the identity."""
        result = Matrix.identity(self.dim)
        for k in word:
            result = mat_mul(result, self.matrix(k))
        return result

    def transpose(self) -> "MatrixSet":
        return MatrixSet(m.T for m in self.matrices)

    @property
    def is_binary(self) -> bool:
        return all(m.is_binary for m in self.matrices)

    @property
    def is_nonnegative(self) -> bool:
        return all(m.is_nonnegative for m in self.matrices)
