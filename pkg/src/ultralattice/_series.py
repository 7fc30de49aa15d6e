"""Precision-tracked truncated Laurent series in one variable ``u`` over F_p.

This is the linear-algebra kernel behind every lattice computation.  Each
:class:`Series` is stored in relative form (valuation, unit digits, absolute
precision), so that products and quotients propagate the number of known
digits the same way a p-adic number library does.  ``cap`` is the absolute
precision ceiling of the surrounding computation; nothing is ever known at or
beyond it.

Matrices are plain lists of lists of :class:`Series`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EMPTY = np.zeros(0, dtype=np.int64)


def inv_unit(digits: np.ndarray, length: int, p: int) -> np.ndarray:
    """Inverse of a unit power series modulo ``u^length`` (Newton iteration)."""
    if length <= 0:
        return _EMPTY
    a = np.zeros(length, dtype=np.int64)
    n = min(len(digits), length)
    a[:n] = digits[:n] % p
    c0 = pow(int(a[0]), -1, p)
    inv = np.array([c0], dtype=np.int64)
    cur = 1
    while cur < length:
        cur = min(2 * cur, length)
        e = np.convolve(a[:cur], inv)[:cur] % p
        e = (-e) % p
        e[0] = (e[0] + 2) % p
        inv = np.convolve(inv, e)[:cur] % p
    return inv


def mul_trunc(a: np.ndarray, b: np.ndarray, length: int, p: int) -> np.ndarray:
    if length <= 0 or len(a) == 0 or len(b) == 0:
        return np.zeros(max(length, 0), dtype=np.int64)
    out = np.convolve(a[:length], b[:length])[:length] % p
    if len(out) < length:
        out = np.concatenate([out, np.zeros(length - len(out), dtype=np.int64)])
    return out


class Series:
    __slots__ = ("p", "cap", "v", "d", "prec")

    def __init__(self, p: int, cap: int, v: int, d: np.ndarray, prec: int):
        self.p = p
        self.cap = cap
        prec = min(prec, cap)
        d = d[: max(prec - v, 0)]
        nz = np.flatnonzero(d)
        if len(nz) == 0:
            self.v = prec
            self.d = _EMPTY
        else:
            s = int(nz[0])
            self.v = v + s
            self.d = d[s:]
        self.prec = prec

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, p, cap, prec=None):
        prec = cap if prec is None else prec
        return cls(p, cap, prec, _EMPTY, prec)

    @classmethod
    def monomial(cls, p, cap, e, c=1, prec=None):
        prec = cap if prec is None else prec
        return cls(p, cap, e, np.array([c % p], dtype=np.int64), prec)

    @classmethod
    def from_terms(cls, p, cap, terms, prec=None):
        """``terms`` is an iterable of (exponent, coefficient) pairs."""
        prec = cap if prec is None else prec
        terms = [(e, c % p) for e, c in terms if c % p and e < prec]
        if not terms:
            return cls.zero(p, cap, prec)
        v = min(e for e, _ in terms)
        d = np.zeros(prec - v, dtype=np.int64)
        for e, c in terms:
            d[e - v] = (d[e - v] + c) % p
        return cls(p, cap, v, d, prec)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        """True when zero to the known precision."""
        return len(self.d) == 0

    @property
    def rel(self) -> int:
        return self.prec - self.v

    def terms(self):
        nz = np.flatnonzero(self.d)
        return [(self.v + int(i), int(self.d[i])) for i in nz]

    def coeff(self, e: int) -> int:
        if e >= self.prec:
            raise IndexError(e)
        if e < self.v or e - self.v >= len(self.d):
            return 0
        return int(self.d[e - self.v])

    def coeff_window(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficients for exponents in ``[lo, hi)``; requires ``hi <= prec``."""
        out = np.zeros(hi - lo, dtype=np.int64)
        a = max(lo, self.v)
        b = min(hi, self.v + len(self.d))
        if b > a:
            out[a - lo:b - lo] = self.d[a - self.v:b - self.v]
        return out

    def __repr__(self):
        if self.is_zero():
            return f"O(u^{self.prec})"
        body = " + ".join(f"{c}*u^{e}" for e, c in self.terms()[:6])
        return f"({body} + O(u^{self.prec}))"

    # arithmetic -------------------------------------------------------
    def _like(self, v, d, prec):
        return Series(self.p, self.cap, v, d, prec)

    def __neg__(self):
        return self._like(self.v, (-self.d) % self.p, self.prec)

    def __add__(self, other: "Series") -> "Series":
        prec = min(self.prec, other.prec)
        v0 = min(self.v, other.v, prec)
        out = np.zeros(prec - v0, dtype=np.int64)
        for s in (self, other):
            if len(s.d):
                hi = min(len(s.d), prec - s.v)
                if hi > 0:
                    out[s.v - v0:s.v - v0 + hi] += s.d[:hi]
        return self._like(v0, out % self.p, prec)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like(self.v, (self.d * other) % self.p, self.prec)
        if self.is_zero() or other.is_zero():
            prec = min(self.v + other.prec, other.v + self.prec)
            return Series.zero(self.p, self.cap, prec)
        v = self.v + other.v
        rel = min(self.rel, other.rel)
        d = mul_trunc(self.d, other.d, rel, self.p)
        return self._like(v, d, v + rel)

    __rmul__ = __mul__

    def divide(self, other: "Series") -> "Series":
        """``self / other`` for ``other`` nonzero to its precision."""
        if other.is_zero():
            raise ZeroDivisionError("division by a series that is zero to precision")
        dv = other.v
        if self.is_zero():
            return Series.zero(self.p, self.cap, self.prec - dv)
        rel = min(self.rel, other.rel)
        inv = inv_unit(other.d, rel, self.p)
        d = mul_trunc(self.d, inv, rel, self.p)
        v = self.v - dv
        return self._like(v, d, v + rel)

    def shift(self, s: int) -> "Series":
        return self._like(self.v + s, self.d, self.prec + s)

    def with_cap(self, cap: int) -> "Series":
        return Series(self.p, cap, self.v, self.d, min(self.prec, cap))

    def split_at(self, t: int):
        """Return (low, high) with ``self = low + u^t * high`` and ``low`` having exponents < t.

        ``low`` is exactly known when ``t <= prec``.
        """
        if t > self.prec:
            raise ValueError("split point beyond known precision")
        low_terms = [(e, c) for e, c in self.terms() if e < t]
        low = Series.from_terms(self.p, self.cap, low_terms)
        if self.v >= t:
            high = self.shift(-t)
        else:
            k = t - self.v
            high = self._like(0, self.d[k:], self.prec - t)
        return low, high

    def same_as(self, other: "Series") -> bool:
        """Equality up to the smaller of the two precisions."""
        prec = min(self.prec, other.prec)
        lo = min(self.v, other.v, prec)
        return np.array_equal(self.coeff_window(lo, prec), other.coeff_window(lo, prec))


def identity(n, p, cap):
    return [[Series.monomial(p, cap, 0) if i == j else Series.zero(p, cap) for j in range(n)]
            for i in range(n)]


def matvec(M, x):
    out = []
    for row in M:
        acc = None
        for a, b in zip(row, x):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def matmul(A, B):
    """Product of two series matrices (lists of rows)."""
    cols = list(zip(*B)) if B else []
    return [[_dot(row, c) for c in cols] for row in A]


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        t = a * b
        acc = t if acc is None else acc + t
    return acc


@dataclass
class SmithFrame:
    """``uinv @ G @ v = D`` with ``D`` diagonal and pivot valuations ``d`` nondecreasing."""

    rows: int
    cols: int
    rank: int
    d: list
    pivots: list
    uinv: list
    u: list
    v: list
    min_prec: int


def smith(G, p, cap, want_u=True, want_v=True) -> SmithFrame:
    """Smith normal form over the valuation ring F_p[[u]] (global-min pivoting).

    ``G`` is a list of rows.  Global minimum pivoting keeps every matrix entry
    at full absolute precision; transforms lose at most the pivot valuation.
    """
    n = len(G)
    m = len(G[0]) if n else 0
    A = [list(r) for r in G]
    uinv = identity(n, p, cap)
    u = identity(n, p, cap) if want_u else None
    V = identity(m, p, cap) if want_v else None
    pivots = []
    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                e = A[i][j]
                if not e.is_zero() and (best is None or e.v < best[0]):
                    best = (e.v, i, j)
        if best is None:
            break
        _, i0, j0 = best
        if i0 != t:
            A[t], A[i0] = A[i0], A[t]
            uinv[t], uinv[i0] = uinv[i0], uinv[t]
            if u is not None:
                for r in u:
                    r[t], r[i0] = r[i0], r[t]
        if j0 != t:
            for r in A:
                r[t], r[j0] = r[j0], r[t]
            if V is not None:
                for r in V:
                    r[t], r[j0] = r[j0], r[t]
        piv = A[t][t]
        for i in range(t + 1, n):
            if A[i][t].is_zero():
                continue
            c = A[i][t].divide(piv)
            for j in range(t, m):
                A[i][j] = A[i][j] - c * A[t][j]
            for j in range(n):
                uinv[i][j] = uinv[i][j] - c * uinv[t][j]
            if u is not None:
                for r in u:
                    r[t] = r[t] + c * r[i]
        for j in range(t + 1, m):
            if A[t][j].is_zero():
                continue
            c = A[t][j].divide(piv)
            A[t][j] = A[t][j] - c * piv
            if V is not None:
                for r in V:
                    r[j] = r[j] - c * r[t]
        pivots.append(piv)
        t += 1
    rest = [A[i][j].prec for i in range(t, n) for j in range(t, m)]
    return SmithFrame(n, m, t, [q.v for q in pivots], pivots, uinv, u, V,
                      min(rest) if rest else cap)


@dataclass
class HermiteForm:
    """Column echelon form: column ``t`` has pivot ``u^{d[t]}`` in row ``rows[t]``."""

    columns: list        # list of columns (each a list of Series)
    rows: list
    d: list


def hermite(G, p, cap) -> HermiteForm:
    """Canonical column form, spanning the same F_p[[u]]-module as the columns of ``G``.

    Pivot choice: minimal valuation over all remaining columns and unused rows,
    ties broken by lowest row, then lowest column.  Only column operations are
    used, so the column span is unchanged.
    """
    n = len(G)
    m = len(G[0]) if n else 0
    cols = [[G[i][j] for i in range(n)] for j in range(m)]
    remaining = list(range(m))
    used_rows: list[int] = []
    done: list[int] = []
    d: list[int] = []
    while remaining:
        best = None
        for i in range(n):
            if i in used_rows:
                continue
            for j in remaining:
                e = cols[j][i]
                if not e.is_zero() and (best is None or (e.v, i, j) < best):
                    best = (e.v, i, j)
        if best is None:
            break
        dv, i0, j0 = best
        remaining.remove(j0)
        piv_unit = cols[j0][i0].shift(-dv)
        inv = Series(p, cap, 0, inv_unit(piv_unit.d, piv_unit.rel, p), piv_unit.rel)
        cols[j0] = [e * inv for e in cols[j0]]
        pc = cols[j0]
        for j in remaining:
            a = cols[j][i0]
            if a.is_zero():
                continue
            c = a.divide(pc[i0])
            cols[j] = [x - c * y for x, y in zip(cols[j], pc)]
        for j in done:
            a = cols[j][i0]
            if a.is_zero():
                continue
            _, high = a.split_at(min(dv, a.prec))
            if high.is_zero():
                continue
            cols[j] = [x - high * y for x, y in zip(cols[j], pc)]
        used_rows.append(i0)
        done.append(j0)
        d.append(dv)
    return HermiteForm([cols[j] for j in done], used_rows, d)
