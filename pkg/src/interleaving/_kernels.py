"""Hot loops over F_p, with numba and pure-numpy implementations.

The numba versions are used when numba imports and the environment variable
``INTERLEAVING_DISABLE_NUMBA`` is unset (or ``0``).  Both implementations are
always importable under their suffixed names so they can be benchmarked and
cross-checked against each other.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "rref_mod_p", "search_assignments", "rref_numpy", "search_numpy"]

_CHUNK = 1 << 15


def _disabled() -> bool:
    return os.environ.get("INTERLEAVING_DISABLE_NUMBA", "").strip().lower() not in {"", "0", "false", "no"}


def rref_numpy(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``A`` over F_p; returns ``(R, pivot_columns)``."""
    R = np.array(A, dtype=np.int64, copy=True) % p
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, np.asarray(pivots, dtype=np.int64)


def search_numpy(term_a, term_b, term_ptr, target, nvars, p, start, total):
    """First code in ``start, start+1, ...`` (mod ``total``) solving every row.

    A code is the base-``p`` expansion of an assignment ``x`` of ``nvars``
    variables; row ``r`` asks ``sum x[a]*x[b] == target[r] (mod p)`` over its
    terms ``term_ptr[r]:term_ptr[r+1]``.  Returns ``-1`` when none exists.
    """
    powers = np.asarray([p**v for v in range(nvars)], dtype=np.int64)
    nrows = len(target)
    for off in range(0, total, _CHUNK):
        codes = (start + np.arange(off, min(off + _CHUNK, total), dtype=np.int64)) % total
        x = (codes[:, None] // powers[None, :]) % p
        ok = np.ones(len(codes), dtype=bool)
        for r in range(nrows):
            s = np.zeros(len(codes), dtype=np.int64)
            for t in range(term_ptr[r], term_ptr[r + 1]):
                s += x[:, term_a[t]] * x[:, term_b[t]]
            ok &= (s % p) == target[r]
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if hits.size:
            return int(codes[hits[0]])
    return -1


try:  # pragma: no cover - exercised via the backend switch
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


if njit is not None:

    @njit(cache=True)
    def _inv_mod(a, p):
        result = 1
        base = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_kernel(R, p):
        m, n = R.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if R[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for k in range(n):
                    tmp = R[r, k]
                    R[r, k] = R[piv, k]
                    R[piv, k] = tmp
            inv = _inv_mod(R[r, c], p)
            for k in range(n):
                R[r, k] = (R[r, k] * inv) % p
            for i in range(m):
                if i != r:
                    f = R[i, c]
                    if f != 0:
                        for k in range(n):
                            R[i, k] = (R[i, k] - f * R[r, k]) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    def rref_numba(A: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        R = np.array(A, dtype=np.int64, copy=True) % p
        if R.size == 0:
            return R, np.zeros(0, dtype=np.int64)
        pivots = _rref_kernel(R, p)
        return R, pivots

    @njit(cache=True)
    def _search_kernel(term_a, term_b, term_ptr, target, nvars, p, start, total):
        x = np.zeros(max(nvars, 1), dtype=np.int64)
        nrows = target.shape[0]
        for k in range(total):
            code = (start + k) % total
            c = code
            for v in range(nvars):
                x[v] = c % p
                c //= p
            ok = True
            for r in range(nrows):
                s = 0
                for t in range(term_ptr[r], term_ptr[r + 1]):
                    s += x[term_a[t]] * x[term_b[t]]
                if s % p != target[r]:
                    ok = False
                    break
            if ok:
                return code
        return -1

    def search_numba(term_a, term_b, term_ptr, target, nvars, p, start, total):
        return int(
            _search_kernel(
                np.asarray(term_a, dtype=np.int64),
                np.asarray(term_b, dtype=np.int64),
                np.asarray(term_ptr, dtype=np.int64),
                np.asarray(target, dtype=np.int64),
                int(nvars),
                int(p),
                int(start),
                int(total),
            )
        )

else:  # pragma: no cover
    rref_numba = None
    search_numba = None


if rref_numba is not None and not _disabled():
    BACKEND = "numba"
    rref_mod_p = rref_numba
    search_assignments = search_numba
else:
    BACKEND = "numpy"
    rref_mod_p = rref_numpy
    search_assignments = search_numpy
