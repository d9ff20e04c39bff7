"""Prime-field arithmetic and exact dense linear algebra.

Matrices are plain ``numpy.int64`` arrays whose entries live in ``[0, p)``.
Products of two reduced entries stay below ``p**2``, which fits comfortably
in 64 bits for any prime below ``2**31``, so elimination can be vectorized
without object arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 32003

# Entries are reduced before every product; p**2 must not overflow int64.
_MAX_PRIME = 2**31 - 1


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p) or p == 2 or p > _MAX_PRIME:
        raise ValueError(f"modulus must be an odd prime below 2**31, got {p}")
    return p


def inv(a: int, p: int = DEFAULT_PRIME) -> int:
    """Multiplicative inverse of ``a`` modulo ``p``."""
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FieldElem:
    """An element of the prime field F_p.

    Mostly useful for scalar bookkeeping and tests; bulk work goes through
    the array functions below.
    """

    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise ValueError("elements of different prime fields")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> "FieldElem":
        return FieldElem(inv(self.value, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return FieldElem(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, e: int):
        return FieldElem(pow(self.value, e, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value


def as_matrix(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Copy ``M`` into a fresh 2-d int64 array reduced into ``[0, p)``."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, 0)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    np.remainder(A, p, out=A)
    return A


def _float_matmul(A: np.ndarray, B: np.ndarray, p: int, bmax: int) -> np.ndarray:
    # exact while (inner chunk) * (p - 1) * bmax stays below 2**53
    k = A.shape[1]
    chunk = max(1, (2**53) // ((p - 1) * bmax + 1))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, k, chunk):
        part = A[:, s:s + chunk].astype(np.float64) @ B[s:s + chunk].astype(np.float64)
        out += part.astype(np.int64) % p
        out %= p
    return out


def matmul(A: np.ndarray, B: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Exact product modulo ``p``.

    float64 holds integers exactly up to 2**53, so the BLAS product is exact
    as long as the inner dimension times (p-1)**2 stays below that bound;
    otherwise the inner dimension is split into chunks.  For primes above
    about 2**26 a single product is already too big, so ``B`` is split into
    16-bit limbs first.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if (p - 1) ** 2 < 2**53:
        return _float_matmul(A, B, p, p - 1)
    lo, hi = B & 0xFFFF, B >> 16
    return (_float_matmul(A, lo, p, 0xFFFF)
            + _float_matmul(A, hi, p, (p - 1) >> 16) * 0x10000) % p


_PANEL = 48


def _row_echelon(A: np.ndarray, p: int) -> list[int]:
    """Blocked right-looking LU with row pivoting (first nonzero).

    On return the leading ``len(pivots)`` rows of ``A`` hold a row echelon
    form of the input and the pivot columns are returned. Each panel of
    columns is factored with vector operations; the trailing block is then
    updated with a single exact float64 product, which is where almost all
    the work happens.
    """
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    c0 = 0
    while c0 < n and r < m:
        c1 = min(n, c0 + _PANEL)
        P = A[r:, c0:c1]  # view; pivoting swaps whole rows of A
        L = np.zeros((m - r, c1 - c0), dtype=np.int64)
        k = 0
        for j in range(c1 - c0):
            if r + k == m:
                break
            nz = np.flatnonzero(P[k:, j])
            if nz.size == 0:
                continue
            s = k + int(nz[0])
            if s != k:
                A[[r + k, r + s]] = A[[r + s, r + k]]
                L[[k, s]] = L[[s, k]]
            piv_inv = pow(int(P[k, j]), -1, p)
            below = k + 1 + np.flatnonzero(P[k + 1:, j])
            L[k, k] = 1
            if below.size:
                f = (P[below, j] * piv_inv) % p
                L[below, k] = f
                P[np.ix_(below, np.arange(j, c1 - c0))] = (
                    P[below, j:] - f[:, None] * P[k, j:]) % p
            pivots.append(c0 + j)
            k += 1
        if k and c1 < n:
            # U12 = L11^{-1} A12 by forward substitution, then A22 -= L21 U12.
            U = A[r:r + k, c1:]
            for i in range(1, k):
                U[i] = (U[i] - matmul(L[i:i + 1, :i], U[:i], p)[0]) % p
            if r + k < m:
                upd = matmul(L[k:, :k], U, p)
                A[r + k:, c1:] = (A[r + k:, c1:] - upd) % p
        r += k
        c0 = c1
    return pivots


def _upper_solve(T: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Solve ``T X = B`` for upper triangular ``T`` with nonzero diagonal."""
    r = T.shape[0]
    X = np.zeros_like(B)
    for b1 in range(r, 0, -_PANEL):
        b0 = max(0, b1 - _PANEL)
        rhs = B[b0:b1].copy()
        if b1 < r:
            rhs = (rhs - matmul(T[b0:b1, b1:], X[b1:], p)) % p
        for i in range(b1 - 1, b0 - 1, -1):
            row = rhs[i - b0]
            if i + 1 < b1:
                row = (row - matmul(T[i:i + 1, i + 1:b1], X[i + 1:b1], p)[0]) % p
            X[i] = row * pow(int(T[i, i]), -1, p) % p
    return X


def rref(M, p: int = DEFAULT_PRIME) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    A = as_matrix(M, p)
    if A.size == 0:
        return A[:0].copy(), []
    pivots = _row_echelon(A, p)
    U = A[: len(pivots)]
    if not pivots:
        return U.copy(), []
    return _upper_solve(U[:, pivots], U, p), pivots


def rank(M, p: int = DEFAULT_PRIME) -> int:
    A = as_matrix(M, p)
    if A.size == 0:
        return 0
    # Fewer rows means fewer (and shorter) elimination sweeps.
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    return len(_row_echelon(A, p))


def kernel_basis(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Basis of the right kernel ``{v : M v = 0}`` as rows of an array.

    One vector per free column, in increasing column order; the vector for
    free column ``f`` has a 1 at ``f`` and zeros at every other free column.
    """
    A = as_matrix(M, p)
    n = A.shape[1]
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    if not free:
        return K
    K[np.arange(len(free)), free] = 1
    if pivots:
        K[:, pivots] = (-R[:, free].T) % p
    return K
