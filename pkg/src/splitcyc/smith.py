"""Smith normal form over Z/p^K.

Z/p^K is a chain ring, so a pivot of least valuation divides every entry
of the remaining block and elimination never needs gcd steps.  Matrices are
numpy int64 arrays when p^{2K} times the dimension is safe, object arrays
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SAFE = 2**62


def _dtype(N: int, dim: int):
    return np.int64 if N * N * max(dim, 1) < _SAFE else object


def as_matrix(M, N: int, dim: int | None = None) -> np.ndarray:
    arr = np.array(M, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    dim = dim if dim is not None else max(arr.shape) if arr.size else 1
    arr = arr % N
    return arr.astype(_dtype(N, dim))


@dataclass
class SmithForm:
    """U @ M @ V = diag(p^valuations[0], ..., p^valuations[rank-1], 0, ...)."""

    valuations: list[int]
    rank: int
    shape: tuple[int, int]
    p: int
    K: int
    U: np.ndarray | None = None
    V: np.ndarray | None = None
    V_inv: np.ndarray | None = None

    @property
    def divisors(self) -> list[int]:
        """Diagonal entries; 0 marks a zero pivot (value >= p^K)."""
        n = min(self.shape)
        return [self.p**v for v in self.valuations] + [0] * (n - self.rank)

    @property
    def valuation_sum(self) -> int:
        return sum(self.valuations)


def smith_normal_form(M, p: int, K: int, left: bool = False, right: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix reduced mod p^K.

    ``left``/``right`` request the unimodular transforms (``right`` also
    returns the inverse of V).
    """
    N = p**K
    A = np.array(M, dtype=object)
    if A.ndim != 2:
        A = A.reshape(len(M), -1) if len(M) else np.zeros((0, 0), dtype=object)
    r, c = A.shape
    dt = _dtype(N, max(r, c, 1))
    A = (A % N).astype(dt)
    U = np.eye(r, dtype=dt) if left else None
    V = np.eye(c, dtype=dt) if right else None
    Vi = np.eye(c, dtype=dt) if right else None
    vals: list[int] = []
    t = 0
    for k in range(min(r, c)):
        sub = A[k:, k:]
        pos = None
        while t < K:
            mask = (sub % p ** (t + 1)) != 0
            if mask.any():
                flat = int(np.argmax(mask))
                pos = divmod(flat, sub.shape[1])
                break
            t += 1
        if pos is None:
            break
        i, j = pos[0] + k, pos[1] + k
        if i != k:
            A[[k, i]] = A[[i, k]]
            if left:
                U[[k, i]] = U[[i, k]]
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            if right:
                V[:, [k, j]] = V[:, [j, k]]
                Vi[[k, j]] = Vi[[j, k]]
        pk = p**t
        unit = int(A[k, k]) // pk
        uinv = pow(unit, -1, N)
        A[k] = (A[k] * uinv) % N
        if left:
            U[k] = (U[k] * uinv) % N
        A[k, k] = pk
        # clear column k below the pivot; columns left of k are already zero
        w = A[k + 1:, k] // pk
        nz = np.flatnonzero(w)
        if nz.size:
            rows = nz + k + 1
            A[rows, k:] = (A[rows, k:] - np.outer(w[nz], A[k, k:])) % N
            if left:
                U[rows] = (U[rows] - np.outer(w[nz], U[k])) % N
        # clear row k right of the pivot; column k is now zero off the pivot
        w = A[k, k + 1:] // pk
        if w.any():
            A[k, k + 1:] = 0
            if right:
                V[:, k + 1:] = (V[:, k + 1:] - np.outer(V[:, k], w)) % N
                Vi[k] = (Vi[k] + w @ Vi[k + 1:]) % N
        vals.append(t)
    return SmithForm(vals, len(vals), (r, c), p, K, U, V, Vi)


def elementary_divisors(M, p: int, K: int) -> list[int]:
    """Nonzero, non-unit p-power divisors of the cokernel of M (row span) mod p^K."""
    sf = smith_normal_form(M, p, K)
    return [p**v for v in sf.valuations if v > 0]


def span_invariants(rows, p: int, K: int) -> tuple[int, int]:
    """(rank, valuation sum) of the Z_p-span of the given rows at precision K."""
    rows = np.asarray(rows)
    if rows.size == 0:
        return 0, 0
    sf = smith_normal_form(rows, p, K)
    return sf.rank, sf.valuation_sum


def matmul_mod(A, B, N: int) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.dtype == object or B.dtype == object or N * N * max(A.shape[-1], 1) >= _SAFE:
        return (A.astype(object) @ B.astype(object)) % N
    return (A @ B) % N


def matpow_mod(A, e: int, N: int) -> np.ndarray:
    n = A.shape[0]
    result = np.eye(n, dtype=A.dtype)
    base = A % N
    while e:
        if e & 1:
            result = matmul_mod(result, base, N)
        e >>= 1
        if e:
            base = matmul_mod(base, base, N)
    return result


def log_p(n: int, p: int) -> int:
    k = round(math.log(n, p))
    if p**k != n:
        raise ValueError(f"{n} is not a power of {p}")
    return k
