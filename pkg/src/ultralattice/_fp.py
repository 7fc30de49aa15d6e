"""Dense linear algebra over F_p on numpy integer arrays.

Vectors are rows.  Every function returns fresh arrays reduced into ``[0, p)``.
"""
from __future__ import annotations

import numpy as np


def _as(a, p) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def rref(a, p):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = _as(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def row_basis(a, p, ncols=None) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, ncols if ncols is not None else (a.shape[-1] if a.ndim == 2 else 0)), dtype=np.int64)
    return rref(a, p)[0]


def nullspace(a, p, ncols=None) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        n = ncols if ncols is not None else a.shape[-1]
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    n = r.shape[1]
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(piv):
            out[t, c] = (-r[i, f]) % p
    return out


def in_span(v, basis, p) -> bool:
    v = _as(v, p)
    basis = np.asarray(basis, dtype=np.int64)
    if not v.any():
        return True
    if basis.size == 0:
        return False
    return rank(np.vstack([basis, v]), p) == rank(basis, p)


def quotient_basis(big, small, p) -> np.ndarray:
    """Rows of ``big`` whose classes form a basis of ``span(big) / span(small)``."""
    big = np.asarray(big, dtype=np.int64)
    small = np.asarray(small, dtype=np.int64)
    n = big.shape[1] if big.ndim == 2 and big.size else (small.shape[1] if small.size else 0)
    cur = row_basis(small, p, n) if small.size else np.zeros((0, n), dtype=np.int64)
    picked = []
    for row in big:
        if not in_span(row, cur, p):
            picked.append(row % p)
            cur = row_basis(np.vstack([cur, row]), p)
    return np.array(picked, dtype=np.int64).reshape(len(picked), n)


def intersect(a, b, p) -> np.ndarray:
    """Basis of ``span(a) ∩ span(b)`` (Zassenhaus)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        n = a.shape[-1] if a.ndim == 2 else b.shape[-1]
        return np.zeros((0, n), dtype=np.int64)
    n = a.shape[1]
    top = np.hstack([a, a])
    bot = np.hstack([b, np.zeros_like(b)])
    r, piv = rref(np.vstack([top, bot]), p)
    out = [row[n:] for row, c in zip(r, piv) if c >= n]
    return np.array(out, dtype=np.int64).reshape(len(out), n)
