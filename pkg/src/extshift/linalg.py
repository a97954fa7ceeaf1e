"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``.  The modulus
must satisfy ``p*p < 2**63`` so that a single multiply never overflows; the
default is the Mersenne prime 2**31 - 1.  Reduction is deterministic (first
nonzero row below the working row is the pivot), so identical inputs give
identical echelon forms on every platform.

A numba-compiled kernel is used for the elimination loop when numba is
importable; the pure-numpy fallback computes exactly the same result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

MAX_MODULUS = 3037000499  # floor(sqrt(2**63 - 1)); p*p must fit in int64

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, exact for every 64-bit integer."""
    if m < 2:
        return False
    for q in _MR_BASES:
        if m % q == 0:
            return m == q
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p.  ``p > n`` is checked wherever the ambient
    variable count n is known (generic draws need it), not here."""

    p: int = 2147483647

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.p > MAX_MODULUS:
            raise ValueError(
                f"modulus {self.p} too large for the int64 multiply-reduce kernels "
                f"(need p <= {MAX_MODULUS})"
            )

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)


class MatrixFp:
    """Dense matrix over F_p (row-major numpy int64 storage)."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        self.a = a % p
        self.p = p

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "MatrixFp":
        m = cls.__new__(cls)
        m.a = np.zeros((rows, cols), dtype=np.int64)
        m.p = p
        return m

    @classmethod
    def identity(cls, n: int, p: int) -> "MatrixFp":
        m = cls.__new__(cls)
        m.a = np.eye(n, dtype=np.int64)
        m.p = p
        return m

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def copy(self) -> "MatrixFp":
        m = MatrixFp.__new__(MatrixFp)
        m.a = self.a.copy()
        m.p = self.p
        return m

    def __matmul__(self, other: "MatrixFp") -> "MatrixFp":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        prod = (self.a @ other.a) % self.p
        m = MatrixFp.__new__(MatrixFp)
        m.a = prod
        m.p = self.p
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixFp):
            return NotImplemented
        return (
            self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"MatrixFp({self.a.tolist()}, p={self.p})"

    def column(self, j: int) -> list[int]:
        return [int(x) for x in self.a[:, j]]


def _rref_numpy(a: np.ndarray, p: int) -> list[int]:
    """Full reduced row echelon form in place; returns pivot columns."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        touched = np.nonzero(col)[0]
        if touched.size:
            a[touched] = (a[touched] - np.outer(col[touched], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


if _HAVE_NUMBA:

    @njit(cache=True)
    def _powmod(a, e, p):  # pragma: no cover - compiled
        r = 1
        b = a % p
        while e > 0:
            if e & 1:
                r = r * b % p
            b = b * b % p
            e >>= 1
        return r

    @njit(cache=True)
    def _rref_kernel(a, p):  # pragma: no cover - compiled
        rows, cols = a.shape
        piv = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k == -1:
                continue
            if k != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = t
            inv = _powmod(a[r, c], p - 2, p)
            if inv != 1:
                for j in range(cols):
                    a[r, j] = a[r, j] * inv % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            piv[r] = c
            r += 1
        return piv[:r]

    def _rref_inplace(a: np.ndarray, p: int) -> list[int]:
        if a.size == 0:
            return []
        return [int(c) for c in _rref_kernel(a, p)]

else:  # pragma: no cover

    def _rref_inplace(a: np.ndarray, p: int) -> list[int]:
        if a.size == 0:
            return []
        return _rref_numpy(a, p)


def rref(m: MatrixFp) -> tuple[MatrixFp, tuple[int, ...]]:
    """Reduced row echelon form and the ascending pivot columns."""
    out = m.copy()
    pivots = _rref_inplace(out.a, m.p)
    return out, tuple(pivots)


def rank(m: MatrixFp) -> int:
    a = m.a.copy()
    return len(_rref_inplace(a, m.p))


def rank_and_kernel_dim(m: MatrixFp) -> tuple[int, int]:
    r = rank(m)
    return r, m.cols - r


def inverse(m: MatrixFp) -> MatrixFp:
    """Inverse via elimination on the augmented matrix."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = np.concatenate([m.a.copy(), np.eye(n, dtype=np.int64)], axis=1)
    pivots = _rref_inplace(aug, m.p)
    if list(pivots) != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    inv = MatrixFp.__new__(MatrixFp)
    inv.a = aug[:, n:].copy()
    inv.p = m.p
    return inv


def random_invertible(n: int, field: PrimeField, rng: np.random.Generator) -> MatrixFp:
    """Uniform random n x n matrix, redrawn until nonsingular.

    For p > n the expected number of draws is below 1/(1 - n/p) ~ 1, so
    termination is essentially immediate at the default modulus.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if field.p <= n:
        raise ValueError(f"need p > n for generic draws (p={field.p}, n={n})")
    while True:
        a = rng.integers(0, field.p, size=(n, n), dtype=np.int64)
        m = MatrixFp.__new__(MatrixFp)
        m.a = a
        m.p = field.p
        if rank(m) == n:
            return m


# ---------------------------------------------------------------------------
# incremental echelon (rank growth, prefix ranks, leading-position extraction)
# ---------------------------------------------------------------------------

_SMALL_WIDTH = 24


class RowReducer:
    """Incremental row echelon form over F_p.

    Rows are inserted one at a time; each is reduced against the stored pivot
    rows and, if nonzero, becomes a new pivot row at its leftmost nonzero
    column.  The accumulated pivot-column set equals the RREF pivot set of
    all inserted rows, so with columns sorted descending in the monomial
    order the pivots read off leading monomials.

    Uses plain Python lists below ``_SMALL_WIDTH`` columns and vectorised
    numpy reduction above it.
    """

    def __init__(self, width: int, p: int):
        self.width = width
        self.p = p
        self.pivot_cols: list[int] = []
        self._small = width < _SMALL_WIDTH
        self._rows: list = []  # small path: pivot rows normalised to 1 at pivot
        self._buf: np.ndarray | None = None  # wide path: growing row buffer

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def add(self, vec) -> bool:
        """Insert a row (list or 1-D array); returns True if the rank grew."""
        if self._small:
            return self._add_small(list(vec))
        return self._add_wide(np.asarray(vec, dtype=np.int64))

    def add_unit(self, col: int) -> bool:
        """Insert the standard basis row with 1 at ``col``."""
        if self._small:
            v = [0] * self.width
            v[col] = 1
            return self._add_small(v)
        v = np.zeros(self.width, dtype=np.int64)
        v[col] = 1
        return self._add_wide(v)

    def _add_small(self, v: list[int]) -> bool:
        p = self.p
        for pc, row in zip(self.pivot_cols, self._rows):
            c = v[pc]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        for j, x in enumerate(v):
            if x:
                inv = pow(x, p - 2, p)
                if inv != 1:
                    v = [t * inv % p for t in v]
                self.pivot_cols.append(j)
                self._rows.append(v)
                return True
        return False

    def _add_wide(self, v: np.ndarray) -> bool:
        p = self.p
        k = len(self.pivot_cols)
        if k:
            coeff = v[self.pivot_cols]
            if np.any(coeff):
                v = (v - coeff @ self._buf[:k]) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        j = int(nz[0])
        inv = pow(int(v[j]), p - 2, p)
        if inv != 1:
            v = v * inv % p
        if self._buf is None:
            self._buf = np.zeros((8, self.width), dtype=np.int64)
        elif k == self._buf.shape[0]:
            grown = np.zeros((2 * k, self.width), dtype=np.int64)
            grown[:k] = self._buf
            self._buf = grown
        self._buf[k] = v
        self.pivot_cols.append(j)
        return True


def rank_rows(rows: Iterable[Sequence[int]], width: int, p: int) -> int:
    """Rank of a collection of length-``width`` rows over F_p."""
    red = RowReducer(width, p)
    for r in rows:
        red.add(r)
    return red.rank


def prefix_ranks(
    segments: Sequence[Sequence[Sequence[int]]], width: int, p: int
) -> list[int]:
    """Ranks of the cumulative row spans after each segment of rows."""
    red = RowReducer(width, p)
    out = []
    for seg in segments:
        for r in seg:
            red.add(r)
        out.append(red.rank)
    return out
