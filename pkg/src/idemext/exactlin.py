"""Dense exact linear algebra over a prime field F_p.

Every basis, solution or splitting handed out by this module is read off a
reduced row-echelon form, so repeated runs produce identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np


class NoSolution(ValueError):
    """Raised when a linear system is inconsistent."""


class NotInvertible(ValueError):
    """Raised when a square matrix is singular."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime 2 <= p <= 97."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"prime must be an int, got {self.p!r}")
        if not 2 <= self.p <= 97 or not _is_prime(self.p):
            raise ValueError(f"p must be a prime in [2, 97], got {self.p}")

    def matrix(self, rows: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> "Matrix":
        a = np.asarray(rows, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        elif a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        return Matrix(self, a)

    def zeros(self, r: int, c: int) -> "Matrix":
        return Matrix(self, np.zeros((r, c), dtype=np.int64))

    def eye(self, n: int) -> "Matrix":
        return Matrix(self, np.eye(n, dtype=np.int64))

    def column(self, entries: Iterable[int]) -> "Matrix":
        a = np.asarray(list(entries), dtype=np.int64).reshape(-1, 1)
        return Matrix(self, a)

    def inverse(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)


class Matrix:
    """Immutable matrix with entries reduced mod p.

    The underlying array is marked read-only; arithmetic returns new matrices.
    Shapes with a zero dimension are allowed.
    """

    __slots__ = ("field", "a", "_hash")

    def __init__(self, field: PrimeField, a: np.ndarray):
        arr = np.array(a, dtype=np.int64, copy=True) % field.p
        if arr.ndim != 2:
            raise ValueError(f"matrix must be 2-dimensional, got shape {arr.shape}")
        arr.flags.writeable = False
        self.field = field
        self.a = arr
        self._hash = None

    @classmethod
    def _wrap(cls, field: PrimeField, arr: np.ndarray) -> "Matrix":
        # arr must already be reduced and owned by the caller
        m = object.__new__(cls)
        arr.flags.writeable = False
        m.field = field
        m.a = arr
        m._hash = None
        return m

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.field, self.a.T.copy())

    def _check(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: F_{self.p} vs F_{other.p}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix._wrap(self.field, (self.a @ other.a) % self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._wrap(self.field, (self.a + other.a) % self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._wrap(self.field, (self.a - other.a) % self.p)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.field, (-self.a) % self.p)

    def __mul__(self, scalar: int) -> "Matrix":
        return Matrix._wrap(self.field, (self.a * (int(scalar) % self.p)) % self.p)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self is other:
            return True
        a, b = self.a, other.a
        return self.field == other.field and a.shape == b.shape and not (a != b).any()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.shape, self.a.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix(F_{self.p}, {self.a.tolist()})"

    def is_zero(self) -> bool:
        return not self.a.any()

    def to_list(self) -> list[list[int]]:
        return self.a.tolist()

    def entries(self) -> list[int]:
        return self.a.reshape(-1).tolist()

    def vec(self) -> np.ndarray:
        """Row-major flattening as a plain int64 array."""
        return self.a.reshape(-1)

    def hstack(self, *others: "Matrix") -> "Matrix":
        return hstack([self, *others])

    def vstack(self, *others: "Matrix") -> "Matrix":
        return vstack([self, *others])


def hstack(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    return Matrix._wrap(field, np.hstack([m.a for m in ms]))


def vstack(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    return Matrix._wrap(field, np.vstack([m.a for m in ms]))


def block_diag(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    r = sum(m.rows for m in ms)
    c = sum(m.cols for m in ms)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in ms:
        out[i:i + m.rows, j:j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Matrix._wrap(field, out)


def block(rows: Sequence[Sequence[Matrix]]) -> Matrix:
    return vstack([hstack(list(r)) for r in rows])


@numba.njit(cache=True)
def _rref_kernel(a, p, ncols):
    m, n = a.shape
    piv = np.empty(min(m, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(n):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        # Fermat inverse; p is prime
        x = a[r, c]
        inv = 1
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * x) % p
            x = (x * x) % p
            e >>= 1
        if inv != 1:
            for j in range(n):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            f = a[i, c]
            if i != r and f != 0:
                for j in range(n):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        piv[r] = c
        r += 1
    return piv[:r]


# below this many entries the numpy path is used, so small problems never wait on the JIT
SMALL_RREF = 16


def _rref_small(a: np.ndarray, p: int, ncols: int) -> list[int]:
    """In-place reduction with numpy row operations; same result as the kernel."""
    m = a.shape[0]
    piv: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        f = a[:, c].copy()
        f[r] = 0
        a -= np.outer(f, a[r])
        a %= p
        piv.append(c)
        r += 1
    return piv


def _rref_array(a: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a copy of ``a`` mod p, pivoting only in the first ``ncols`` columns."""
    a = np.array(a, dtype=np.int64) % p
    n = a.shape[1] if ncols is None else ncols
    if a.size <= SMALL_RREF:
        return a, _rref_small(a, p, n)
    return a, _rref_kernel(a, p, n).tolist()


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    out, piv = _rref_array(m.a, m.p)
    return Matrix._wrap(m.field, out), piv


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref_array(m.a, m.p)[1])


def _kernel_array(a: np.ndarray, p: int) -> np.ndarray:
    m, n = a.shape
    r, piv = _rref_array(a, p)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    k = np.zeros((n, len(free)), dtype=np.int64)
    for idx, j in enumerate(free):
        k[j, idx] = 1
        for i, c in enumerate(piv):
            k[c, idx] = (-r[i, j]) % p
    return k


def kernel_basis(m: Matrix) -> Matrix:
    """Canonical kernel basis as columns, ordered by ascending free column."""
    return Matrix._wrap(m.field, _kernel_array(m.a, m.p))


def _solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    m, n = a.shape
    aug = np.hstack([a, b])
    r, piv = _rref_array(aug, p, ncols=n)
    k = len(piv)
    if r[k:, n:].any():
        raise NoSolution("inconsistent linear system")
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x


def solve_canonical(a: Matrix, b: Matrix) -> Matrix:
    """Solve ``a x = b`` with every free variable set to 0.

    ``b`` may have several columns; each is solved independently.
    """
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return Matrix._wrap(a.field, _solve_array(a.a, b.a, a.p))


def _reducer(basis: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    if basis.size == 0:
        return np.zeros((0, basis.shape[0]), dtype=np.int64), []
    r, piv = _rref_array(basis.T, p)
    return r[: len(piv)], piv


def _reduce_with(v: np.ndarray, rows: np.ndarray, piv: list[int], p: int) -> np.ndarray:
    # v has shape (n, k); subtract v[c] * row for each pivot c
    if not piv:
        return v % p
    coeff = v[piv, :]  # (r, k)
    return (v - rows.T @ coeff) % p


def coset_reduce(v: Matrix, image_basis: Matrix) -> Matrix:
    """Canonical representative of ``v`` modulo the column span of ``image_basis``."""
    v._check(image_basis)
    if image_basis.cols and image_basis.rows != v.rows:
        raise ValueError(f"dimension mismatch {image_basis.shape} vs {v.shape}")
    rows, piv = _reducer(image_basis.a, v.p)
    return Matrix._wrap(v.field, _reduce_with(v.a, rows, piv, v.p))


def invert(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise NotInvertible(f"non-square matrix {m.shape}")
    n = m.rows
    aug = np.hstack([m.a, np.eye(n, dtype=np.int64)])
    r, piv = _rref_array(aug, m.p, ncols=n)
    if len(piv) != n:
        raise NotInvertible("matrix is singular")
    return Matrix._wrap(m.field, r[:, n:].copy())


def complement_basis(sub: Matrix, ambient_dim: int) -> Matrix:
    """Standard basis vectors, chosen greedily by index, completing ``sub`` to a basis."""
    p = sub.p
    if sub.cols and sub.rows != ambient_dim:
        raise ValueError(f"sub has {sub.rows} rows, expected {ambient_dim}")
    a = sub.a if sub.cols else np.zeros((ambient_dim, 0), dtype=np.int64)
    if a.shape[1] and len(_rref_array(a, p)[1]) != a.shape[1]:
        raise ValueError("columns of sub are linearly dependent")
    chosen: list[int] = []
    span = a
    for j in range(ambient_dim):
        rows, piv = _reducer(span, p)
        e = np.zeros((ambient_dim, 1), dtype=np.int64)
        e[j, 0] = 1
        if _reduce_with(e, rows, piv, p).any():
            chosen.append(j)
            span = np.hstack([span, e])
    out = np.zeros((ambient_dim, len(chosen)), dtype=np.int64)
    for k, j in enumerate(chosen):
        out[j, k] = 1
    return Matrix._wrap(sub.field, out)


@numba.njit(cache=True)
def _batched_rank_kernel(a, p):
    N, m, n = a.shape
    rk = np.zeros(N, dtype=np.int64)
    for t in range(N):
        rk[t] = _rref_kernel(a[t].copy(), p, n).shape[0]
    return rk


def batched_rank(stack: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices with shape (N, m, n)."""
    a = np.ascontiguousarray(stack, dtype=np.int64) % p
    if a.shape[0] == 0 or a.shape[1] == 0 or a.shape[2] == 0:
        return np.zeros(a.shape[0], dtype=np.int64)
    return _batched_rank_kernel(a, p)
