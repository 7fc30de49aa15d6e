"""Exact values in the monoid ``2^{Z[1/p]} ∪ {0}``.

A :class:`NormValue` never stores a float.  ``Exact(e)`` is the number
``2^{-e}``; ``Zero`` is zero; ``BelowPrecision(n)`` is some unknown value
``<= 2^{-n}`` that truncation could not resolve.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import IncomparableAtPrecision, NotPPowerDenominator

EXACT = "exact"
ZERO = "zero"
BELOW = "below"


def is_p_power(d: int, p: int) -> bool:
    if d <= 0:
        return False
    while d % p == 0:
        d //= p
    return d == 1


def p_depth(q: Fraction, p: int) -> int:
    """Smallest j with ``q * p^j`` integral (raises if none exists)."""
    d = Fraction(q).denominator
    if not is_p_power(d, p):
        raise NotPPowerDenominator(f"denominator of {q} is not a power of {p}")
    j = 0
    while d > 1:
        d //= p
        j += 1
    return j


@dataclass(frozen=True, order=False)
class NormValue:
    kind: str
    exponent: Fraction | None = None
    bound: int | None = None
    lossy: bool = False

    # constructors -----------------------------------------------------
    @classmethod
    def exact(cls, e) -> "NormValue":
        return cls(EXACT, Fraction(e))

    @classmethod
    def zero(cls) -> "NormValue":
        return cls(ZERO)

    @classmethod
    def below(cls, n: int, lossy: bool = False) -> "NormValue":
        if n < 1:
            raise ValueError("BelowPrecision bound must be a positive integer")
        return cls(BELOW, bound=int(n), lossy=lossy)

    # predicates -------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    @property
    def is_zero(self) -> bool:
        return self.kind == ZERO

    @property
    def is_below(self) -> bool:
        return self.kind == BELOW

    def __mul__(self, other):
        return nv_mul(self, other)

    def __lt__(self, other):
        return nv_compare(self, other) < 0

    def __le__(self, other):
        return nv_compare(self, other) <= 0

    def __gt__(self, other):
        return nv_compare(self, other) > 0

    def __ge__(self, other):
        return nv_compare(self, other) >= 0

    def __str__(self):
        return render(self)

    def __repr__(self):
        if self.kind == EXACT:
            return f"Exact({self.exponent})"
        if self.kind == ZERO:
            return "Zero"
        return f"BelowPrecision({self.bound}{', lossy' if self.lossy else ''})"

    def to_float(self) -> float:
        """Magnitude as a float, for display only (upper bound for BelowPrecision)."""
        if self.kind == ZERO:
            return 0.0
        if self.kind == BELOW:
            return 2.0 ** (-self.bound)
        return 2.0 ** (-float(self.exponent))


Exact = NormValue.exact
Zero = NormValue.zero()
BelowPrecision = NormValue.below
ONE = NormValue.exact(0)


def nv_from_exponent(s, p: int) -> NormValue:
    s = Fraction(s)
    p_depth(s, p)
    return NormValue.exact(s)


def nv_mul(a: NormValue, b: NormValue) -> NormValue:
    if a.is_zero or b.is_zero:
        return Zero
    if a.is_exact and b.is_exact:
        return NormValue.exact(a.exponent + b.exponent)
    if a.is_below and b.is_below:
        return NormValue.below(a.bound + b.bound, a.lossy or b.lossy)
    low, ex = (a, b) if a.is_below else (b, a)
    n = low.bound + math.floor(ex.exponent)
    if n >= 1:
        return NormValue.below(n, low.lossy)
    return NormValue.below(low.bound, True)


def nv_compare(a: NormValue, b: NormValue) -> int:
    """Return -1, 0 or 1 as ``a`` is smaller than, equal to, or larger than ``b``."""
    if a.is_zero and b.is_zero:
        return 0
    if a.is_zero:
        return -1
    if b.is_zero:
        return 1
    if a.is_exact and b.is_exact:
        if a.exponent == b.exponent:
            return 0
        return -1 if a.exponent > b.exponent else 1
    if a.is_below and b.is_below:
        raise IncomparableAtPrecision(f"cannot order {a!r} and {b!r}")
    if a.is_below:
        if b.exponent <= a.bound:
            return -1
        raise IncomparableAtPrecision(f"cannot order {a!r} and {b!r}")
    return -nv_compare(b, a)


def nv_max(values: Iterable[NormValue]) -> NormValue:
    best = Zero
    for v in values:
        if best.is_zero:
            best = v
        elif v.is_zero:
            continue
        elif v.is_below and best.is_below:
            best = NormValue.below(min(v.bound, best.bound), v.lossy or best.lossy)
        elif nv_compare(v, best) > 0:
            best = v
    return best


def nv_min(values: Iterable[NormValue]) -> NormValue:
    values = list(values)
    if not values:
        raise ValueError("nv_min of an empty collection")
    best = values[0]
    for v in values[1:]:
        if nv_compare(v, best) < 0:
            best = v
    return best


def nv_root(a: NormValue, n: int, p: int) -> NormValue:
    """``a^{1/n}``; only defined when the exponent stays in ``Z[1/p]``."""
    if a.is_zero:
        return Zero
    if a.is_below:
        return NormValue.below(max(1, a.bound // n), a.lossy or a.bound % n != 0)
    return nv_from_exponent(a.exponent / n, p)


def nv_pow(a: NormValue, n: int) -> NormValue:
    if a.is_zero:
        return Zero if n > 0 else ONE
    if a.is_below:
        return NormValue.below(a.bound * n, a.lossy)
    return NormValue.exact(a.exponent * n)


_EXACT_RE = re.compile(r"^2\^-\((-?\d+)(?:/(\d+))?\)$")
_BELOW_RE = re.compile(r"^<=2\^-\((\d+)\)(\?)?$")


def render(v: NormValue) -> str:
    if v.is_zero:
        return "0"
    if v.is_below:
        return f"<=2^-({v.bound}){'?' if v.lossy else ''}"
    e = v.exponent
    if e.denominator == 1:
        return f"2^-({e.numerator})"
    return f"2^-({e.numerator}/{e.denominator})"


def parse(text: str) -> NormValue:
    t = text.strip().replace(" ", "")
    if t == "0":
        return Zero
    m = _EXACT_RE.match(t)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        return NormValue.exact(Fraction(num, den))
    m = _BELOW_RE.match(t)
    if m:
        return NormValue.below(int(m.group(1)), bool(m.group(2)))
    raise ValueError(f"not a norm value: {text!r}")
