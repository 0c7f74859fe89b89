"""Dense linear algebra over a prime field, on int64 matrices with entries in ``[0, p)``."""

from __future__ import annotations

import numpy as np

from . import _kernels

__all__ = ["rref", "rank", "nullspace", "column_basis", "solve", "right_inverse", "matmul", "zeros", "eye"]


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return (A @ B) % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return A.reshape(A.shape) % p, np.zeros(0, dtype=np.int64)
    return _kernels.rref_mod_p(A, p)


def rank(A: np.ndarray, p: int) -> int:
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    R, piv = rref(A, p)
    piv = list(piv)
    free = [c for c in range(n) if c not in piv]
    N = zeros(n, len(free))
    for k, f in enumerate(free):
        N[f, k] = 1
        for r, c in enumerate(piv):
            N[c, k] = (-R[r, f]) % p
    return N


def column_basis(A: np.ndarray, p: int) -> np.ndarray:
    """Linearly independent columns of ``A`` spanning its column space."""
    A = np.asarray(A, dtype=np.int64)
    if A.shape[1] == 0:
        return zeros(A.shape[0], 0)
    _, piv = rref(A, p)
    return A[:, piv] % p


def solve(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Some ``X`` with ``A X = B``; raises ``ValueError`` if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    m, n = A.shape
    k = B.shape[1]
    if m == 0:
        return zeros(n, k)
    R, piv = rref(np.hstack([A, B]), p)
    piv = list(piv)
    if any(c >= n for c in piv):
        raise ValueError("linear system is inconsistent")
    X = zeros(n, k)
    for r, c in enumerate(piv):
        X[c] = R[r, n:]
    return X


def right_inverse(Q: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``Q L = I`` for ``Q`` of full row rank."""
    return solve(Q, eye(Q.shape[0]), p)
