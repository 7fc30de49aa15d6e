"""Lattices in ``A^n``, gauge seminorms, closed unit balls and almost elements.

A :class:`Lattice` is the span of finitely many vectors in ``A^n`` over a
coefficient ring: either the level-k unit ball ``A_{<=1}`` or a monomial
subring.  All gauge and almost-element computations happen on the unit-ball
span.  Internally each product factor is handled separately as a matrix of
power series in ``u = T^{1/p^k}``, shifted so that every entry is integral.
"""
from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ._series import Series, hermite, matvec, smith
from .errors import (ConfigMismatch, FloorExceeded, IncomparableAtPrecision, NoStabilization, NotInSpan, NotOpen,
                     PrecisionLoss)
from .ring import (RingConfig, RingElement, base_change_level, elt_norm, parse_element,
                   render_element)
from .valnorm import NormValue, Zero, nv_compare, nv_max, nv_min, nv_mul, nv_pow, p_depth

GUARD_ENV = "ULTRALATTICE_PRECISION_GUARD"


def precision_guard() -> Fraction:
    """Guard band (in units of T-exponent) below ``N`` for Hermite pivots."""
    raw = os.environ.get(GUARD_ENV, "0").strip() or "0"
    try:
        g = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{GUARD_ENV}={raw!r} is not a rational number") from None
    if g < 0:
        raise ValueError(f"{GUARD_ENV} must be non-negative")
    return g


# ---------------------------------------------------------------------------
# coefficient rings

@dataclass(frozen=True)
class UnitBall:
    def to_json(self):
        return "unit_ball"

    def __str__(self):
        return "unit_ball"


UNIT_BALL = UnitBall()


@dataclass(frozen=True)
class MonomialSubring:
    """``F_p[T^{a_1}, ..., T^{a_r}]`` inside the unit ball.

    The exponent monoid must contain every grid point beyond some conductor,
    which is what makes the subring open.
    """

    generators: tuple

    def __post_init__(self):
        gens = sorted({Fraction(g) for g in self.generators} - {Fraction(0)})
        if any(g < 0 for g in gens):
            raise ValueError("monoid generators must be non-negative")
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def conductor_ring(cls, cfg: RingConfig, c=1) -> "MonomialSubring":
        """``F_p + T^c A_{<=1}``, generated by the grid points in ``[c, 2c)``."""
        c = Fraction(c)
        lo = cfg.grid(c)
        return cls(tuple(Fraction(g, cfg.scale) for g in range(lo, 2 * lo)))

    def grid_generators(self, cfg: RingConfig) -> list:
        return [cfg.grid(g) for g in self.generators]

    def _members(self, cfg, bound: int) -> list:
        gens = self.grid_generators(cfg)
        ok = [False] * max(bound, 1)
        ok[0] = True
        for t in range(1, bound):
            ok[t] = any(g <= t and ok[t - g] for g in gens)
        return ok

    def conductor(self, cfg: RingConfig) -> int:
        """Least grid index ``c`` such that every grid point ``>= c`` is in the monoid."""
        gens = self.grid_generators(cfg)
        if not gens or math.gcd(*gens) != 1:
            raise NotOpen(f"monoid generated by {list(map(str, self.generators))} is not open at level {cfg.k}")
        bound = max(gens) * min(gens) + max(gens) + 1
        ok = self._members(cfg, bound)
        missing = [t for t in range(bound) if not ok[t]]
        return missing[-1] + 1 if missing else 0

    def semigroup(self, cfg: RingConfig, bound: int) -> list:
        """Sorted grid indices of monoid elements below ``bound``."""
        c = self.conductor(cfg)
        ok = self._members(cfg, max(bound, c + 1))
        return [t for t in range(bound) if t >= c or ok[t]]

    def contains_exponent(self, cfg, g: int) -> bool:
        if g < 0:
            return False
        c = self.conductor(cfg)
        return g >= c or self._members(cfg, c + 1)[g]

    def contains(self, x: RingElement) -> bool:
        return all(self.contains_exponent(x.cfg, e) for part in x.parts for e, _ in part)

    def to_json(self):
        return {"monomial": [g.numerator if g.denominator == 1 else str(g) for g in self.generators]}

    def __str__(self):
        return "F_p[" + ", ".join(f"T^({g})" for g in self.generators) + "]"


def coeff_ring_from_json(obj):
    if obj in (None, "unit_ball"):
        return UNIT_BALL
    if isinstance(obj, dict) and "monomial" in obj:
        return MonomialSubring(tuple(Fraction(str(g)) for g in obj["monomial"]))
    raise ValueError(f"unknown coefficient ring {obj!r}")


# ---------------------------------------------------------------------------
# series <-> ring element conversion

def work_cap(cfg: RingConfig, offset: int, size: int) -> int:
    """Absolute precision ceiling for a computation of the given matrix size."""
    span = cfg.hi - min(offset, 0)
    return (cfg.hi - cfg.lo) + (size + 1) * span + cfg.scale


def to_series(x: RingElement, f: int, offset: int, cap: int) -> Series:
    cfg = x.cfg
    prec = cfg.hi - offset if x.truncated else cap
    return Series.from_terms(cfg.p, cap, [(e - offset, c) for e, c in x.parts[f]], prec)


def from_series(s: Series, offset: int, cfg: RingConfig, strict: bool = True):
    """Back to a ring-element part; returns (terms dict, truncated flag)."""
    limit = cfg.hi - offset
    trunc = s.prec < s.cap
    if s.prec < limit:
        if strict:
            raise PrecisionLoss(f"result known only below T^({Fraction(s.prec + offset, cfg.scale)})")
        limit = s.prec
        trunc = True
    out = {}
    for e, c in s.terms():
        if e >= limit:
            trunc = True
            continue
        if e + offset < cfg.lo:
            raise FloorExceeded("result has an exponent below the floor")
        out[e + offset] = c
    return out, trunc


def assemble_vectors(cfg: RingConfig, per_factor: list, n: int) -> tuple:
    """Combine per-factor lists of (parts, truncated) columns into product-ring vectors."""
    count = max((len(cols) for cols in per_factor), default=0)
    out = []
    for t in range(count):
        vec = []
        for i in range(n):
            parts, trunc = [], False
            for cols in per_factor:
                if t < len(cols):
                    d, tr = cols[t][i]
                    parts.append(d)
                    trunc = trunc or tr
                else:
                    parts.append({})
            vec.append(RingElement.from_parts(cfg, parts, trunc))
        out.append(tuple(vec))
    return tuple(out)


def column_to_parts(col, offset, cfg, strict=True):
    return [from_series(s, offset, cfg, strict) for s in col]


def vector_offset(vectors, f) -> int | None:
    exps = [e for v in vectors for x in v for e, _ in x.parts[f]]
    return min(exps) if exps else None


# ---------------------------------------------------------------------------
# lattices

@dataclass
class _Frame:
    offset: int
    cap: int
    matrix: list          # rows of Series, shifted by ``offset``
    smith: object


@dataclass(frozen=True, eq=False)
class Lattice:
    cfg: RingConfig
    ambient_rank: int
    generators: tuple
    coeff_ring: object = UNIT_BALL
    depth: int | None = None

    def __post_init__(self):
        if self.ambient_rank < 1:
            raise ValueError("ambient rank must be at least 1")
        gens = tuple(tuple(v) for v in self.generators)
        for v in gens:
            if len(v) != self.ambient_rank:
                raise ConfigMismatch(f"generator of length {len(v)} in rank-{self.ambient_rank} module")
            for x in v:
                if x.cfg != self.cfg:
                    raise ConfigMismatch(f"{x.cfg} vs {self.cfg}")
        if isinstance(self.coeff_ring, MonomialSubring):
            self.coeff_ring.conductor(self.cfg)
        object.__setattr__(self, "generators", gens)

    # constructors -----------------------------------------------------
    @classmethod
    def unit_ball(cls, cfg: RingConfig, n: int) -> "Lattice":
        one, zero = RingElement.one(cfg), RingElement.zero(cfg)
        return cls(cfg, n, tuple(tuple(one if i == j else zero for i in range(n)) for j in range(n)))

    @classmethod
    def zero(cls, cfg: RingConfig, n: int) -> "Lattice":
        return cls(cfg, n, ())

    @classmethod
    def from_strings(cls, cfg: RingConfig, generators, coeff_ring=UNIT_BALL, n=None) -> "Lattice":
        gens = tuple(tuple(parse_element(s, cfg) for s in v) for v in generators)
        if n is None:
            if not gens:
                raise ValueError("ambient rank needed for an empty generator list")
            n = len(gens[0])
        return cls(cfg, n, gens, coeff_ring)

    # inspection -------------------------------------------------------
    @property
    def is_unit_ball_span(self) -> bool:
        return isinstance(self.coeff_ring, UnitBall)

    def __repr__(self):
        gens = [[render_element(x) for x in v] for v in self.generators]
        extra = f", depth={self.depth}" if self.depth is not None else ""
        return f"Lattice(rank={self.ambient_rank}, coeff={self.coeff_ring}, generators={gens}{extra})"

    def to_json(self) -> dict:
        out = {"cfg": self.cfg.to_json(), "rank": self.ambient_rank,
               "coeff_ring": self.coeff_ring.to_json(),
               "generators": [[render_element(x) for x in v] for v in self.generators]}
        if self.depth is not None:
            out["depth"] = self.depth
        return out

    @classmethod
    def from_json(cls, obj) -> "Lattice":
        if isinstance(obj, str):
            obj = json.loads(obj)
        cfg = RingConfig.from_json(obj["cfg"])
        coeff = coeff_ring_from_json(obj.get("coeff_ring", "unit_ball"))
        gens = tuple(tuple(parse_element(s, cfg) for s in v) for v in obj.get("generators", []))
        n = int(obj.get("rank", len(gens[0]) if gens else 1))
        return cls(cfg, n, gens, coeff, obj.get("depth"))

    # cached linear algebra ---------------------------------------------
    @cached_property
    def _frames(self) -> list:
        frames = []
        n, m = self.ambient_rank, len(self.generators)
        for f in range(self.cfg.factors):
            off = vector_offset(self.generators, f)
            off = 0 if off is None else off
            cap = work_cap(self.cfg, off, min(n, m))
            rows = [[to_series(g[i], f, off, cap) for g in self.generators] for i in range(n)]
            frames.append(_Frame(off, cap, rows, smith(rows, self.cfg.p, cap)))
        return frames

    def smith_invariants(self, f: int = 0) -> list:
        """Smith invariants of the unit-ball span, as T-exponents."""
        fr = self._frames[f]
        return [Fraction(d + fr.offset, self.cfg.scale) for d in fr.smith.d]

    def span_rank(self, f: int = 0) -> int:
        return self._frames[f].smith.rank


def _check_vector(x, L: Lattice):
    if len(x) != L.ambient_rank:
        raise ConfigMismatch(f"vector of length {len(x)} against rank-{L.ambient_rank} lattice")
    for xi in x:
        if xi.cfg != L.cfg:
            raise ConfigMismatch(f"{xi.cfg} vs {L.cfg}")


def _is_literal_zero(x) -> bool:
    return all(xi.is_zero() and not xi.truncated for xi in x)


def _coords(L: Lattice, x, f: int):
    """``uinv · x`` in the Smith frame of factor ``f``; raises NotInSpan off ``L[1/T]``."""
    fr = L._frames[f]
    xs = [to_series(xi, f, fr.offset, fr.cap) for xi in x]
    y = matvec(fr.smith.uinv, xs) if xs else []
    for i in range(fr.smith.rank, len(y)):
        if not y[i].is_zero():
            raise NotInSpan("vector is not in the span of the lattice")
    return fr, y


def _factor_gauge(L: Lattice, x, f: int):
    if all(len(xi.parts[f]) == 0 and not xi.truncated for xi in x):
        return ("zero", None)
    fr, y = _coords(L, x, f)
    d = fr.smith.d
    exact = [y[i].v - d[i] for i in range(fr.smith.rank) if not y[i].is_zero()]
    bounds = [y[i].prec - d[i] for i in range(fr.smith.rank) if y[i].is_zero()]
    if exact:
        s = min(exact)
        if bounds and min(bounds) < s:
            raise PrecisionLoss("gauge depends on coefficients beyond the working precision")
        return ("exact", s)
    if not any(len(xi.parts[f]) for xi in x) and any(xi.truncated for xi in x):
        return ("below", min(bounds) if bounds else None)
    raise PrecisionLoss("vector vanishes to the working precision in the lattice frame")


def unitball_span(L: Lattice) -> Lattice:
    """The ``A_{<=1}``-span of the generators, tagged as a unit-ball lattice."""
    if L.is_unit_ball_span:
        return L
    return Lattice(L.cfg, L.ambient_rank, L.generators, UNIT_BALL, L.depth)


def gauge(x: Sequence[RingElement], L: Lattice) -> NormValue:
    """``inf{2^{-s} : x ∈ T^s A_{<=1} L}``, attained on the level-k grid."""
    _check_vector(x, L)
    L = unitball_span(L)
    if _is_literal_zero(x):
        return Zero
    cfg = L.cfg
    vals = []
    for f in range(cfg.factors):
        kind, g = _factor_gauge(L, x, f)
        if kind == "zero":
            vals.append(Zero)
        elif kind == "exact":
            vals.append(NormValue.exact(Fraction(g, cfg.scale)))
        else:
            b = cfg.N if g is None else math.floor(Fraction(g, cfg.scale))
            if b < 1:
                raise PrecisionLoss("truncated zero vector with no usable precision bound")
            vals.append(NormValue.below(b))
    return nv_max(vals)


def gauge_exponent(x, L: Lattice) -> Fraction | None:
    """The exponent ``s`` of an exact gauge ``2^{-s}``; ``None`` for zero."""
    g = gauge(x, L)
    if g.is_zero:
        return None
    if not g.is_exact:
        raise PrecisionLoss(f"gauge is only bounded: {g!r}")
    return g.exponent


def base_change_vector(x, k2: int):
    return tuple(base_change_level(xi, k2) for xi in x)


def base_change_lattice(L: Lattice, k2: int) -> Lattice:
    """``A^{(k2)}_{<=1}``-span of ``L`` (monomial lattices are saturated first)."""
    L = unitball_span(L)
    if k2 == L.cfg.k:
        return L
    cfg2 = L.cfg.with_level(k2)
    gens = tuple(base_change_vector(v, k2) for v in L.generators)
    return Lattice(cfg2, L.ambient_rank, gens, UNIT_BALL, L.depth)


def membership(x, L: Lattice, s) -> bool:
    """Decide ``x ∈ T^s · A_{<=1} L``."""
    _check_vector(x, L)
    s = Fraction(s)
    j = p_depth(s, L.cfg.p)
    if j > L.cfg.k:
        return membership(base_change_vector(x, j), base_change_lattice(L, j), s)
    L = unitball_span(L)
    if _is_literal_zero(x):
        return True
    sg = L.cfg.grid(s)
    undecided = False
    for f in range(L.cfg.factors):
        if all(len(xi.parts[f]) == 0 and not xi.truncated for xi in x):
            continue
        try:
            fr, y = _coords(L, x, f)
        except NotInSpan:
            return False
        for i in range(fr.smith.rank):
            need = fr.smith.d[i] + sg
            if not y[i].is_zero():
                if y[i].v < need:
                    return False
            elif y[i].prec < need:
                undecided = True
    if undecided:
        raise PrecisionLoss(f"membership in T^({s})L depends on coefficients beyond the working precision")
    return True


def lattice_reduce(L: Lattice) -> Lattice:
    """Canonical column Hermite form over the unit ball."""
    if not L.is_unit_ball_span:
        raise ValueError("lattice_reduce needs a unit-ball coefficient ring; saturate with unitball_span first")
    cfg = L.cfg
    guard = precision_guard()
    per_factor = []
    for f in range(cfg.factors):
        fr = L._frames[f]
        hf = hermite(fr.matrix, cfg.p, fr.cap)
        for dv in hf.d:
            if Fraction(dv + fr.offset, cfg.scale) >= cfg.N - guard:
                raise PrecisionLoss(f"pivot T^({Fraction(dv + fr.offset, cfg.scale)}) within the guard band of N={cfg.N}")
        per_factor.append([column_to_parts(col, fr.offset, cfg) for col in hf.columns])
    gens = assemble_vectors(cfg, per_factor, L.ambient_rank)
    return Lattice(cfg, L.ambient_rank, gens, UNIT_BALL, L.depth)


def contains_lattice(big: Lattice, small: Lattice) -> bool:
    """Whether ``A_{<=1}·small ⊆ A_{<=1}·big`` (generator membership)."""
    return all(membership(v, big, 0) for v in small.generators)


def lattice_equal(L1: Lattice, L2: Lattice) -> bool:
    """Equality of unit-ball spans."""
    if L1.cfg != L2.cfg or L1.ambient_rank != L2.ambient_rank:
        return False
    return contains_lattice(L1, L2) and contains_lattice(L2, L1)


# ---------------------------------------------------------------------------
# intersections and almost elements

def _intersect_columns(A: list, B: list, n: int, p: int, cap: int) -> list:
    """``span(A) ∩ span(B)`` for lists of series columns (same offset)."""
    if not A or not B:
        return []
    H = [[a[i] for a in A] + [-b[i] for b in B] for i in range(n)]
    sf = smith(H, p, cap, want_u=False)
    m1 = len(A)
    out = []
    for j in range(sf.rank, len(A) + len(B)):
        coeffs = [sf.v[t][j] for t in range(m1)]
        col = []
        for i in range(n):
            acc = Series.zero(p, cap)
            for a, c in zip(A, coeffs):
                acc = acc + a[i] * c
            col.append(acc)
        if any(not e.is_zero() for e in col):
            out.append(col)
    return out


def lattice_intersection(L1: Lattice, L2: Lattice, shift2=0) -> Lattice:
    """``A_{<=1}L1 ∩ T^{shift2} A_{<=1}L2`` via the kernel of ``[G1 | -G2]``."""
    if L1.cfg != L2.cfg or L1.ambient_rank != L2.ambient_rank:
        raise ConfigMismatch("lattices live in different ambient modules")
    cfg, n = L1.cfg, L1.ambient_rank
    L1, L2 = unitball_span(L1), unitball_span(L2)
    sh = cfg.grid(shift2)
    per_factor = []
    for f in range(cfg.factors):
        o1 = vector_offset(L1.generators, f)
        o2 = vector_offset(L2.generators, f)
        if o1 is None or o2 is None:
            per_factor.append([])
            continue
        off = min(o1, o2 + sh)
        cap = work_cap(cfg, off, 2 * n)
        A = [[to_series(x, f, off, cap) for x in g] for g in L1.generators]
        B = [[to_series(x, f, off - sh, cap) for x in g] for g in L2.generators]
        cols = _intersect_columns(A, B, n, cfg.p, cap)
        per_factor.append([column_to_parts(c, off, cfg) for c in cols])
    gens = assemble_vectors(cfg, per_factor, n)
    return lattice_reduce(Lattice(cfg, n, gens, UNIT_BALL))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _almost_native(L: Lattice, K: int) -> Lattice:
    """``⋂_{1<=n<=max(K, k+1)} (T^{-1/p^n} L_∞ ∩ A^{(k)})`` computed at the native level ``k``."""
    cfg, n = L.cfg, L.ambient_rank
    per_factor = []
    for f in range(cfg.factors):
        fr = L._frames[f]
        sf = fr.smith
        if sf.rank == 0:
            per_factor.append([])
            continue
        basis = [[sf.u[i][t] for i in range(n)] for t in range(sf.rank)]
        # every term is diagonal in the same unimodular frame U, so the
        # intersection keeps, per frame column, the largest shift
        shifts = [None] * sf.rank
        # levels beyond k only round back onto the grid, so one of them closes the intersection
        for level in range(1, max(K, cfg.k + 1) + 1):
            # T^{-1/p^level} in grid units is p^k / p^level, rounded up onto the grid
            for t in range(sf.rank):
                e = _ceil_div(sf.d[t] * cfg.p ** level - cfg.scale, cfg.p ** level) if level > cfg.k \
                    else sf.d[t] - cfg.p ** (cfg.k - level)
                shifts[t] = e if shifts[t] is None else max(shifts[t], e)
        acc = [[x.shift(shifts[t]) for x in basis[t]] for t in range(sf.rank)]
        per_factor.append([column_to_parts(c, fr.offset, cfg) for c in acc])
    gens = assemble_vectors(cfg, per_factor, n)
    return lattice_reduce(Lattice(cfg, n, gens, UNIT_BALL))


@dataclass(frozen=True)
class StabilizationCertificate:
    depth: int
    compared_depth: int
    stable: bool


def almost_elements_certified(L: Lattice, depth: int | None = None):
    """``(M_0)_+`` at depth ``K`` plus a comparison against depth ``K + 1``."""
    K = L.cfg.k + 2 if depth is None else depth
    if K < L.cfg.k:
        raise ValueError(f"depth {K} is below the ring level {L.cfg.k}")
    sat = unitball_span(L)
    if sat.depth is not None and sat.depth != K:
        sat = Lattice(sat.cfg, sat.ambient_rank, sat.generators, UNIT_BALL)
    native = _almost_native(sat, K)
    here = base_change_lattice(native, K)
    here = Lattice(here.cfg, here.ambient_rank, here.generators, UNIT_BALL, K)
    nxt = base_change_lattice(_almost_native(sat, K + 1), K + 1)
    stable = lattice_equal(base_change_lattice(here, K + 1), nxt)
    if not stable:
        warnings.warn(NoStabilization(f"almost elements differ between depth {K} and {K + 1}"))
    return here, StabilizationCertificate(K, K + 1, stable)


def almost_elements(L: Lattice, depth: int | None = None) -> Lattice:
    return almost_elements_certified(L, depth)[0]


# ---------------------------------------------------------------------------
# discrete norms

def _largest_member(x, L: Lattice, step: Fraction) -> int:
    """Largest integer ``m`` with ``x ∈ T^{m·step} L`` (exponential then binary search)."""
    cfg = L.cfg
    limit = 8 * (cfg.N - cfg.floor) / step
    if membership(x, L, 0):
        good, bad = 0, 1
        while membership(x, L, bad * step):
            good, bad = bad, bad * 2
            if bad > limit:
                raise PrecisionLoss("no upper bound for the discrete norm below the search limit")
    else:
        good, bad = -1, 0
        while not membership(x, L, good * step):
            bad, good = good, good * 2
            if -good > limit:
                raise NotInSpan("vector is not in any T-power multiple of the lattice")
    while bad - good > 1:
        mid = (good + bad) // 2
        if membership(x, L, mid * step):
            good = mid
        else:
            bad = mid
    return good


def canonical_pi_adic_norm(x, L: Lattice, n: int) -> NormValue:
    """The canonical extension of the ``T^{1/p^n}``-adic norm: the gauge on the grid ``(1/p^n)Z``."""
    if not 0 <= n <= L.cfg.k:
        raise ValueError(f"n={n} must lie in [0, {L.cfg.k}]")
    _check_vector(x, L)
    if _is_literal_zero(x):
        return Zero
    step = Fraction(1, L.cfg.p ** n)
    return NormValue.exact(_largest_member(x, L, step) * step)


def discrete_norm_infimum(x, L: Lattice) -> NormValue:
    return nv_min(canonical_pi_adic_norm(x, L, n) for n in range(L.cfg.k + 1))


# ---------------------------------------------------------------------------
# subring gauges

@dataclass
class SubringReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _is_full_unit_ball(B0: Lattice) -> bool:
    if B0.ambient_rank != 1 or not B0.is_unit_ball_span:
        return False
    return lattice_equal(B0, Lattice.unit_ball(B0.cfg, 1))


def subring_gauge_checks(B0: Lattice, samples: Sequence[RingElement], root_closed: bool | None = None) -> SubringReport:
    """Ring-seminorm laws of the gauge of a subring lattice ``B0 ⊆ A``."""
    if B0.ambient_rank != 1:
        raise ValueError("a subring lattice lives in A^1")
    unit = _is_full_unit_ball(B0)
    if root_closed is None:
        root_closed = unit
    field_model = unit and B0.cfg.factors == 1
    rep = SubringReport()

    def g(a):
        return gauge((a,), B0)

    def cmp(lhs, rhs):
        # values past the precision window cannot be ordered; such pairs are skipped
        try:
            return nv_compare(lhs, rhs)
        except IncomparableAtPrecision:
            return None

    for i, a in enumerate(samples):
        ga = g(a)
        if root_closed:
            for m in (2, 3):
                lhs, rhs = g(a ** m), nv_pow(ga, m)
                c = cmp(lhs, rhs)
                if c is None:
                    continue
                rep.checked += 1
                if c != 0:
                    rep.failures.append(("power-multiplicative", render_element(a), m, str(lhs), str(rhs)))
        for b in samples[i:]:
            gb = g(b)
            lhs, rhs = g(a * b), nv_mul(ga, gb)
            c = cmp(lhs, rhs)
            if c is None:
                continue
            rep.checked += 1
            if c > 0:
                rep.failures.append(("submultiplicative", render_element(a), render_element(b), str(lhs), str(rhs)))
            if field_model:
                rep.checked += 1
                if c != 0:
                    rep.failures.append(("multiplicative", render_element(a), render_element(b), str(lhs), str(rhs)))
    return rep
