"""Truncated perfectoid model rings.

An element of the level-``k`` ring is a finite sum ``Σ c_s T^s`` with
``s ∈ (1/p^k)Z``, ``floor <= s < N`` and ``c_s ∈ F_p``.  With ``factors > 1``
the ring is a finite product of copies, normed by the maximum over factors.

Exponents are stored internally as integers in units of ``T^{1/p^k}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._series import inv_unit, mul_trunc
from .errors import (ConfigMismatch, DepthExceeded, ElementSyntaxError, FloorExceeded,
                     NotInvertible, PrecisionExceeded)
from .valnorm import NormValue, Zero, nv_from_exponent, nv_max, nv_mul, is_p_power


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RingConfig:
    p: int
    k: int
    N: int
    factors: int = 1
    floor: int | None = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.k < 0 or self.N < 1 or self.factors < 1:
            raise ValueError("need k >= 0, N >= 1, factors >= 1")
        if self.floor is None:
            object.__setattr__(self, "floor", -self.N)
        if self.floor > 0:
            raise ValueError("floor must be <= 0")

    @property
    def scale(self) -> int:
        """Number of grid steps per unit exponent, ``p^k``."""
        return self.p ** self.k

    @property
    def hi(self) -> int:
        return self.N * self.scale

    @property
    def lo(self) -> int:
        return self.floor * self.scale

    def with_level(self, k: int) -> "RingConfig":
        return RingConfig(self.p, k, self.N, self.factors, self.floor)

    def with_precision(self, N: int) -> "RingConfig":
        floor = self.floor if self.floor != -self.N else -N
        return RingConfig(self.p, self.k, N, self.factors, floor)

    def to_json(self) -> dict:
        out = {"p": self.p, "k": self.k, "N": self.N, "factors": self.factors}
        if self.floor != -self.N:
            out["floor"] = self.floor
        return out

    @classmethod
    def from_json(cls, obj) -> "RingConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["p"]), int(obj.get("k", 0)), int(obj["N"]),
                   int(obj.get("factors", 1)), obj.get("floor"))

    def grid(self, s) -> int:
        """Integer grid index of exponent ``s``; raises if ``s`` is off the level-k grid."""
        s = Fraction(s)
        if not is_p_power(s.denominator, self.p):
            raise DepthExceeded(f"exponent {s} has a denominator that is not a power of {self.p}")
        g = s * self.scale
        if g.denominator != 1:
            raise DepthExceeded(f"exponent {s} needs root depth beyond p^{self.k}")
        return int(g)


def _check_same(a: "RingElement", b: "RingElement"):
    if a.cfg != b.cfg:
        raise ConfigMismatch(f"{a.cfg} vs {b.cfg}")


Part = tuple  # tuple of (grid exponent, coefficient) sorted by exponent


def _canon(terms: dict, p: int) -> Part:
    return tuple(sorted((e, c % p) for e, c in terms.items() if c % p))


@dataclass(frozen=True)
class RingElement:
    cfg: RingConfig
    parts: tuple
    truncated: bool = field(default=False, compare=False)

    # constructors -----------------------------------------------------
    @classmethod
    def from_parts(cls, cfg: RingConfig, parts: Sequence[dict], truncated=False):
        if len(parts) != cfg.factors:
            raise ConfigMismatch("wrong number of factors")
        canon = []
        for terms in parts:
            part = _canon(dict(terms), cfg.p)
            for e, _ in part:
                if e >= cfg.hi:
                    raise PrecisionExceeded(f"exponent {Fraction(e, cfg.scale)} >= N={cfg.N}")
                if e < cfg.lo:
                    raise FloorExceeded(f"exponent {Fraction(e, cfg.scale)} < floor={cfg.floor}")
            canon.append(part)
        return cls(cfg, tuple(canon), truncated)

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, tuple(() for _ in range(cfg.factors)))

    @classmethod
    def one(cls, cfg):
        return cls.monomial(cfg, 0)

    @classmethod
    def monomial(cls, cfg, s, c=1, factor=None):
        """``c·T^s`` in every factor (or only in ``factor``)."""
        g = cfg.grid(s)
        parts = []
        for f in range(cfg.factors):
            parts.append({g: c} if factor is None or factor == f else {})
        return cls.from_parts(cfg, parts)

    @classmethod
    def from_terms(cls, cfg, terms: Iterable, factor=None):
        """Single-factor convenience: ``terms`` are (exponent, coefficient) pairs."""
        d: dict = {}
        for s, c in terms:
            g = cfg.grid(s)
            d[g] = d.get(g, 0) + c
        parts = [d if factor is None or factor == f else {} for f in range(cfg.factors)]
        return cls.from_parts(cfg, parts)

    @classmethod
    def from_factors(cls, elements: Sequence["RingElement"], cfg: RingConfig):
        """Assemble a product element from single-factor elements."""
        parts = [dict(e.parts[0]) for e in elements]
        trunc = any(e.truncated for e in elements)
        return cls.from_parts(cfg, parts, trunc)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return all(len(part) == 0 for part in self.parts)

    def terms(self, factor=0):
        s = self.cfg.scale
        return [(Fraction(e, s), c) for e, c in self.parts[factor]]

    def factor(self, f: int) -> "RingElement":
        cfg1 = RingConfig(self.cfg.p, self.cfg.k, self.cfg.N, 1, self.cfg.floor)
        return RingElement(cfg1, (self.parts[f],), self.truncated)

    def support_size(self) -> int:
        return max((len(part) for part in self.parts), default=0)

    def __str__(self):
        return render_element(self)

    def __repr__(self):
        return f"RingElement({render_element(self)!r})"

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        _check_same(self, other)
        parts = []
        for a, b in zip(self.parts, other.parts):
            d = dict(a)
            for e, c in b:
                d[e] = d.get(e, 0) + c
            parts.append(_canon(d, self.cfg.p))
        return RingElement(self.cfg, tuple(parts), self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        p = self.cfg.p
        return RingElement(self.cfg, tuple(tuple((e, (-c) % p) for e, c in part)
                                           for part in self.parts), self.truncated)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        _check_same(self, other)
        cfg = self.cfg
        trunc = self.truncated or other.truncated
        parts = []
        for a, b in zip(self.parts, other.parts):
            d: dict = {}
            for e1, c1 in a:
                for e2, c2 in b:
                    e = e1 + e2
                    if e >= cfg.hi:
                        trunc = True
                        continue
                    if e < cfg.lo:
                        raise FloorExceeded(f"product exponent {Fraction(e, cfg.scale)} below floor")
                    d[e] = d.get(e, 0) + c1 * c2
            parts.append(_canon(d, cfg.p))
        return RingElement(cfg, tuple(parts), trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return inverse(self) ** (-n)
        out = RingElement.one(self.cfg)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shift(self, s) -> "RingElement":
        """Multiply by ``T^s``; exponents pushed to ``>= N`` are dropped (flagged)."""
        g = self.cfg.grid(s)
        trunc = self.truncated
        parts = []
        for part in self.parts:
            d = {}
            for e, c in part:
                if e + g >= self.cfg.hi:
                    trunc = True
                    continue
                if e + g < self.cfg.lo:
                    raise FloorExceeded("shift below floor")
                d[e + g] = c
            parts.append(_canon(d, self.cfg.p))
        return RingElement(self.cfg, tuple(parts), trunc)

    def _coerce(self, other):
        if isinstance(other, int):
            return RingElement.monomial(self.cfg, 0, other) if other % self.cfg.p else RingElement.zero(self.cfg)
        return other


# ---------------------------------------------------------------------------
# operations

def elt_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def elt_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def _factor_norm(part, cfg, truncated) -> NormValue:
    if part:
        return NormValue.exact(Fraction(part[0][0], cfg.scale))
    return NormValue.below(cfg.N) if truncated else Zero


def elt_norm(x: RingElement) -> NormValue:
    """Max over factors of ``2^{-(least exponent)}``."""
    cfg = x.cfg
    if x.is_zero():
        return NormValue.below(cfg.N) if x.truncated else Zero
    return nv_max(_factor_norm(part, cfg, x.truncated) for part in x.parts)


def factor_norms(x: RingElement) -> list:
    return [_factor_norm(part, x.cfg, x.truncated) for part in x.parts]


def spectral_seminorm(x: RingElement, n_max: int) -> NormValue:
    """``inf_{n <= n_max} ||x^n||^{1/n}``."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if x.is_zero():
        return elt_norm(x)
    best = None
    power = RingElement.one(x.cfg)
    for n in range(1, n_max + 1):
        power = power * x
        if power.is_zero():
            raise PrecisionExceeded(f"x^{n} truncates to zero at N={x.cfg.N}")
        nv = elt_norm(power)
        root = nv_from_exponent(nv.exponent / n, x.cfg.p)
        if best is None or root < best:
            best = root
    if x.cfg.factors == 1:
        assert best == elt_norm(x), "single-factor norm must be power-multiplicative"
    return best


def _invert_part(part, cfg, truncated):
    if not part:
        raise NotInvertible("a factor is zero")
    v, c0 = part[0]
    if -v < cfg.lo:
        raise FloorExceeded("inverse would have an exponent below the floor")
    length = cfg.hi + v
    if length <= 0:
        raise PrecisionExceeded("inverse has no terms below N")
    unit = np.zeros(length, dtype=np.int64)
    for e, c in part:
        if e - v < length:
            unit[e - v] = c
    inv = inv_unit(unit, length, cfg.p)
    keep = cfg.hi - 2 * v if truncated else cfg.hi
    d = {}
    for i in np.flatnonzero(inv):
        e = int(i) - v
        if e < keep:
            d[e] = int(inv[i])
    exact = len(part) == 1 and not truncated
    return d, not exact


def inverse(x: RingElement) -> RingElement:
    parts, trunc = [], False
    for part in x.parts:
        d, t = _invert_part(part, x.cfg, x.truncated)
        parts.append(d)
        trunc = trunc or t
    return RingElement.from_parts(x.cfg, parts, trunc)


def is_norm_multiplicative_unit(x: RingElement) -> bool:
    """True iff ``||x||·||x^{-1}|| = 1``."""
    y = inverse(x)
    out = nv_mul(elt_norm(x), elt_norm(y)) == NormValue.exact(0)
    if x.cfg.factors == 1:
        assert out, "every nonzero element of the field model is norm-multiplicative"
    return out


def base_change_level(x: RingElement, k2: int) -> RingElement:
    cfg = x.cfg
    if k2 < cfg.k:
        raise ValueError("base change only goes up the tower")
    f = cfg.p ** (k2 - cfg.k)
    cfg2 = cfg.with_level(k2)
    parts = tuple(tuple((e * f, c) for e, c in part) for part in x.parts)
    return RingElement(cfg2, parts, x.truncated)


def change_precision(x: RingElement, cfg2: RingConfig) -> RingElement:
    """Re-embed ``x`` in a ring with the same level but another ``N``/floor."""
    if (cfg2.p, cfg2.k, cfg2.factors) != (x.cfg.p, x.cfg.k, x.cfg.factors):
        raise ConfigMismatch("change_precision keeps p, k and factors")
    trunc = x.truncated
    parts = []
    for part in x.parts:
        keep = []
        for e, c in part:
            if e >= cfg2.hi:
                trunc = True
                continue
            if e < cfg2.lo:
                raise FloorExceeded("element below the new floor")
            keep.append((e, c))
        parts.append(tuple(keep))
    return RingElement(cfg2, tuple(parts), trunc)


# ---------------------------------------------------------------------------
# rendering and parsing

def _render_part(part, cfg) -> str:
    if not part:
        return "0"
    out = []
    for e, c in part:
        s = Fraction(e, cfg.scale)
        if s == 0:
            out.append(str(c))
            continue
        if s == 1:
            mono = "T"
        elif s.denominator == 1 and s > 0:
            mono = f"T^{s.numerator}"
        elif s.denominator == 1:
            mono = f"T^({s.numerator})"
        else:
            mono = f"T^({s.numerator}/{s.denominator})"
        out.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(out)


def render_element(x: RingElement) -> str:
    if x.cfg.factors == 1:
        return _render_part(x.parts[0], x.cfg)
    return "(" + " | ".join(_render_part(part, x.cfg) for part in x.parts) + ")"


class _Parser:
    """Recursive descent over the element grammar (single factor)."""

    def __init__(self, text: str, cfg: RingConfig, offset: int = 0):
        self.s = text
        self.i = 0
        self.cfg = cfg
        self.offset = offset

    def error(self, msg, expected=None):
        raise ElementSyntaxError(msg, self.offset + self.i, expected)

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch):
        if self.peek() != ch:
            self.error(f"unexpected {self.peek() or 'end of input'!r}", repr(ch))
        self.i += 1

    def integer(self, signed=False):
        self.skip()
        start = self.i
        if signed and self.i < len(self.s) and self.s[self.i] in "+-":
            self.i += 1
        while self.i < len(self.s) and self.s[self.i].isdigit():
            self.i += 1
        tok = self.s[start:self.i]
        if not tok or tok in "+-":
            self.i = start
            self.error("expected an integer", "integer")
        return int(tok)

    def rational(self):
        num = self.integer(signed=True)
        if self.peek() == "/":
            self.i += 1
            den = self.integer()
            if den == 0:
                self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def element(self):
        x = self.sum()
        if self.peek():
            self.error(f"trailing input {self.peek()!r}", "'+', '-', '*' or end of input")
        return x

    def sum(self):
        cfg = self.cfg
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.i += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.i += 1
            acc = acc * self.factor()
        return acc

    def factor(self):
        cfg = self.cfg
        ch = self.peek()
        if ch == "(":
            self.i += 1
            x = self.sum()
            self.eat(")")
            return x
        if ch == "T":
            start = self.i
            self.i += 1
            s = Fraction(1)
            if self.peek() == "^":
                self.i += 1
                if self.peek() == "(":
                    self.i += 1
                    s = self.rational()
                    self.eat(")")
                else:
                    s = Fraction(self.integer(signed=True))
            if not is_p_power(s.denominator, cfg.p) or (s * cfg.scale).denominator != 1:
                raise DepthExceeded(f"T^({s}) needs root depth beyond p^{cfg.k} (position {self.offset + start})")
            if s >= cfg.N:
                raise PrecisionExceeded(f"T^({s}) has exponent >= N={cfg.N}")
            if s < cfg.floor:
                raise FloorExceeded(f"T^({s}) is below the floor {cfg.floor}")
            return RingElement.monomial(cfg, s)
        if ch.isdigit():
            c = self.integer()
            return RingElement.monomial(cfg, 0, c) if c % cfg.p else RingElement.zero(cfg)
        self.error(f"unexpected {ch or 'end of input'!r}", "integer, 'T' or '('")


def _split_tuple(text: str):
    """If ``text`` is ``( a | b | ... )`` at top level return the components."""
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        return None
    depth = 0
    cuts = []
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and i != len(t) - 1:
                return None
        elif ch == "|" and depth == 1:
            cuts.append(i)
    if not cuts:
        return None
    lead = len(text) - len(text.lstrip())
    bounds = [0] + cuts + [len(t) - 1]
    return [(t[bounds[j] + 1:bounds[j + 1]], lead + bounds[j] + 1) for j in range(len(bounds) - 1)]


def parse_element(text: str, cfg: RingConfig) -> RingElement:
    if "|" in text:
        comps = _split_tuple(text)
        if comps is None:
            raise ElementSyntaxError("misplaced '|'", text.index("|"), "tuple '( e1 | e2 )'")
        if len(comps) != cfg.factors:
            raise ConfigMismatch(f"tuple has {len(comps)} components, ring has {cfg.factors} factors")
        cfg1 = RingConfig(cfg.p, cfg.k, cfg.N, 1, cfg.floor)
        elts = [_Parser(s, cfg1, off).element() for s, off in comps]
        return RingElement.from_factors(elts, cfg)
    cfg1 = RingConfig(cfg.p, cfg.k, cfg.N, 1, cfg.floor)
    x = _Parser(text, cfg1).element()
    if cfg.factors == 1:
        return x
    return RingElement.from_factors([x] * cfg.factors, cfg)


def render_vector(v) -> list:
    return [render_element(x) for x in v]


def parse_vector(items, cfg) -> tuple:
    return tuple(parse_element(s, cfg) for s in items)
