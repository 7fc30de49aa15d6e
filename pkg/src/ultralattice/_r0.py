"""Windowed F_p-linear algebra for modules over a monomial subring ``R0``.

An element of ``R0^m`` with exponents below a bound ``B`` (grid units) is a
dense F_p row of length ``m*B``, position ``j*B + t`` holding the coefficient
of ``T^t e_j``.  Spans over ``R0`` become F_p-spans of monoid shifts, cut
back to the window by keeping only combinations whose overflow cancels.
For data that is homogeneous (monomial generators and relations) every step
is exact degree by degree; otherwise the results are cross-checked against
a doubled window by the callers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _fp


def shift_rows(rows: np.ndarray, m: int, width: int, t: int, new_width: int) -> np.ndarray:
    """Multiply every row (layout ``m × width``) by ``T^t``, re-laid out at ``new_width``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, m, width)
    out = np.zeros((rows.shape[0], m, new_width), dtype=np.int64)
    keep = max(0, min(width, new_width - t))
    if keep:
        out[:, :, t:t + keep] = rows[:, :, :keep]
    return out.reshape(rows.shape[0], m * new_width)


def restrict_width(rows: np.ndarray, m: int, width: int, new_width: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, m, width)
    out = np.zeros((rows.shape[0], m, new_width), dtype=np.int64)
    keep = min(width, new_width)
    out[:, :, :keep] = rows[:, :, :keep]
    return out.reshape(rows.shape[0], m * new_width)


def support_width(row: np.ndarray, m: int, width: int) -> int:
    """One past the largest exponent carrying a nonzero coefficient."""
    nz = np.flatnonzero(np.asarray(row).reshape(m, width).any(axis=0))
    return int(nz[-1]) + 1 if len(nz) else 0


def windowed_span(rows, m: int, width: int, shifts, B: int, p: int) -> np.ndarray:
    """Basis of ``span_Fp{T^t r : t in shifts, r in rows} ∩ {exponents < B}``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, m * width)
    shifts = [t for t in shifts if t < B]
    if rows.shape[0] == 0 or not shifts:
        return np.zeros((0, m * B), dtype=np.int64)
    wide = max(B, width + max(shifts))
    stack = np.vstack([shift_rows(rows, m, width, t, wide) for t in shifts]) % p
    full = stack.reshape(-1, m, wide)
    high = full[:, :, B:].reshape(stack.shape[0], -1)
    low = full[:, :, :B].reshape(stack.shape[0], -1)
    if high.size and high.any():
        combos = _fp.nullspace(high.T, p, ncols=stack.shape[0])
        low = (combos @ low) % p
    basis = _fp.row_basis(low, p, m * B)
    return basis.reshape(-1, m * B)


def left_kernel(rows: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{c : c @ rows = 0}``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows.shape[1] == 0:
        return np.eye(rows.shape[0], dtype=np.int64)
    return _fp.nullspace(rows.T, p, ncols=rows.shape[0])


@dataclass
class KernelData:
    """Everything the torsion and syzygy computations need at one window size."""

    m: int
    B: int
    kernel: np.ndarray        # rows, layout m × B
    relations: np.ndarray     # rows, layout m × B (contained in kernel)
    generators: np.ndarray    # lifts of a basis of kernel / (m0·kernel + relations)
    exponent: object          # grid index, 0 for torsion-free, or float('inf')


def kernel_of_images(images, m: int, B: int, semigroup: list, p: int) -> np.ndarray:
    """``{z ∈ R0^m, exponents < B : Σ z_j·images_j = 0}`` (to the known precision).

    ``images[j]`` is a list of Series (one per ambient coordinate) for ``e_j``.
    """
    basis = [(j, t) for j in range(m) for t in semigroup if t < B]
    if not basis:
        return np.zeros((0, m * B), dtype=np.int64)
    M = len(images[0]) if images else 0
    if M == 0:
        out = np.zeros((len(basis), m * B), dtype=np.int64)
        for r, (j, t) in enumerate(basis):
            out[r, j * B + t] = 1
        return out
    entries = [s for col in images for s in col]
    W = min(s.prec for s in entries)
    lo = min(min(s.v for s in entries), 0)
    width = W - lo
    mat = np.zeros((len(basis), M * width), dtype=np.int64)
    for r, (j, t) in enumerate(basis):
        for i, s in enumerate(images[j]):
            mat[r, i * width:(i + 1) * width] = s.coeff_window(lo - t, W - t)
    ker = left_kernel(mat % p, p)
    out = np.zeros((ker.shape[0], m * B), dtype=np.int64)
    for r, (j, t) in enumerate(basis):
        out[:, j * B + t] = ker[:, r]
    return out % p


def torsion_data(images, relations: np.ndarray, m: int, B: int, semigroup: list, p: int) -> KernelData:
    """Torsion of ``R0^m / Rel`` where ``images`` realizes ``R0^m → (R0^m/Rel)[1/T]``.

    ``relations`` are rows of layout ``m × width`` for any width; they are
    spread over the monoid and cut back to the window.
    """
    relations = np.asarray(relations, dtype=np.int64)
    K = kernel_of_images(images, m, B, semigroup, p)
    if relations.size:
        rw = relations.shape[1] // m
        rel = windowed_span(relations, m, rw, semigroup, B, p)
    else:
        rel = np.zeros((0, m * B), dtype=np.int64)
    positive = [t for t in semigroup if t > 0]
    m0K = windowed_span(K, m, B, positive, B, p) if K.size else np.zeros((0, m * B), dtype=np.int64)
    denom = np.vstack([m0K, rel]) if (m0K.size or rel.size) else np.zeros((0, m * B), dtype=np.int64)
    gens = _fp.quotient_basis(K, denom, p) if K.size else np.zeros((0, m * B), dtype=np.int64)
    gens = np.array([g for g in gens if not _fp.in_span(g, rel, p)], dtype=np.int64).reshape(-1, m * B)
    return KernelData(m, B, K, rel, gens, _torsion_exponent(gens, rel, m, B, semigroup, p))


def _torsion_exponent(gens, rel, m, B, semigroup, p):
    if gens.shape[0] == 0:
        return 0
    bad = []
    last_checked = -1
    for g in gens:
        w = support_width(g, m, B)
        for t in semigroup:
            if t + w > B:
                break
            last_checked = max(last_checked, t)
            shifted = shift_rows(g, m, B, t, B)[0]
            if not _fp.in_span(shifted, rel, p):
                bad.append(t)
    if not bad:
        return 0
    worst = max(bad)
    later = [t for t in semigroup if t > worst]
    if not later or later[0] > last_checked:
        return float("inf")
    return later[0]


def minimal_subset(vectors: np.ndarray, m: int, width: int, semigroup: list, B: int, p: int) -> list:
    """Indices of a minimal generating subset of the R0-span of ``vectors`` (window ``B``)."""
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, m * width)
    if vectors.shape[0] == 0:
        return []
    positive = [t for t in semigroup if t > 0]
    low = restrict_width(vectors, m, width, B)
    m0 = windowed_span(vectors, m, width, positive, B, p)
    picked = []
    cur = m0
    order = sorted(range(vectors.shape[0]), key=lambda i: (support_width(low[i], m, B) == 0,
                                                          _lead(low[i], m, B), i))
    for i in order:
        row = low[i]
        if not row.any():
            continue
        if not _fp.in_span(row, cur, p):
            picked.append(i)
            cur = _fp.row_basis(np.vstack([cur, row]) if cur.size else row.reshape(1, -1), p)
    return sorted(picked)


def _lead(row, m, B) -> int:
    nz = np.flatnonzero(np.asarray(row).reshape(m, B).any(axis=0))
    return int(nz[0]) if len(nz) else B
