from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ultralattice.errors import (ConfigMismatch, DepthExceeded, ElementSyntaxError, NotInvertible,
                                 PrecisionExceeded)
from ultralattice.ring import (RingConfig, RingElement, base_change_level, elt_add, elt_mul, elt_norm,
                               inverse, is_norm_multiplicative_unit, parse_element, render_element,
                               spectral_seminorm)
from ultralattice.valnorm import BelowPrecision, Exact, Zero, nv_compare, nv_max, nv_mul

C21 = RingConfig(2, 1, 8)


def el(text, cfg=C21):
    return parse_element(text, cfg)


# -- parsing ----------------------------------------------------------------

def test_parse_examples():
    x = el("1 + T^(3/2)")
    assert x.terms() == [(0, 1), (Fraction(3, 2), 1)]
    with pytest.raises(DepthExceeded):
        el("T^(1/4)")
    y = parse_element("T^(1/3)*T^(2/3)", RingConfig(3, 1, 8))
    assert y.terms() == [(1, 1)]


def test_parse_errors_carry_position():
    with pytest.raises(ElementSyntaxError) as info:
        el("1 + * T")
    assert info.value.position == 4
    with pytest.raises(PrecisionExceeded):
        el("T^8")
    with pytest.raises(ElementSyntaxError):
        el("T^(1/2")


def test_coefficients_reduce_mod_p():
    assert render_element(parse_element("2*T - 3", RingConfig(3, 0, 4))) == "2*T"
    assert el("3*T").terms() == [(1, 1)]
    assert el("2 + 2*T").is_zero()


def test_tuple_syntax():
    cfg = RingConfig(2, 0, 8, factors=2)
    x = parse_element("(T | 1)", cfg)
    assert x.parts == (((1, 1),), ((0, 1),))
    assert render_element(x) == "(T | 1)"
    diag = parse_element("1 + T", cfg)
    assert diag.parts[0] == diag.parts[1]


# -- arithmetic ------------------------------------------------------------

def test_arithmetic_examples():
    assert elt_add(el("1 + T"), el("1 + T")).is_zero()
    assert elt_mul(el("T^(1/2)"), el("T^(1/2)")) == el("T")
    cfg = RingConfig(2, 0, 4)
    prod = elt_mul(el("1 + T^3", cfg), el("1 + T^2", cfg))
    assert prod == el("1 + T^2 + T^3", cfg)
    assert prod.truncated


def test_config_mismatch():
    with pytest.raises(ConfigMismatch):
        el("T") + el("T", RingConfig(3, 1, 8))


def test_inverse():
    x = el("1 + T")
    assert (x * inverse(x)).terms()[0] == (0, 1)
    assert inverse(el("T^(1/2)")) == el("T^(-1/2)")
    with pytest.raises(NotInvertible):
        inverse(RingElement.zero(C21))


# -- norms -----------------------------------------------------------------

def test_norm_examples():
    assert elt_norm(RingElement.zero(C21)) == Zero
    assert elt_norm(el("T^(3/2) + T^2")) == Exact(Fraction(3, 2))
    assert elt_norm(parse_element("(T | 1)", RingConfig(2, 0, 8, 2))) == Exact(0)


def test_truncated_zero_is_below_precision():
    cfg = RingConfig(2, 0, 4)
    z = el("T^2", cfg) * el("T^3", cfg)
    assert z.is_zero() and z.truncated
    assert elt_norm(z) == BelowPrecision(4)


def test_spectral_seminorm_examples():
    assert spectral_seminorm(el("1 + T"), 5) == Exact(0)
    assert spectral_seminorm(RingElement.zero(C21), 3) == Zero
    assert spectral_seminorm(parse_element("(T | 1)", RingConfig(2, 0, 8, 2)), 4) == Exact(0)


def test_norm_multiplicative_units():
    assert is_norm_multiplicative_unit(el("T^(1/2)"))
    assert is_norm_multiplicative_unit(el("1"))
    assert not is_norm_multiplicative_unit(parse_element("(T | 1)", RingConfig(2, 0, 8, 2)))


def test_base_change_examples():
    t = el("T", RingConfig(2, 0, 8))
    t2 = base_change_level(t, 2)
    assert t2.cfg.k == 2 and elt_norm(t2) == elt_norm(t)
    assert base_change_level(RingElement.zero(C21), 3).is_zero()
    x = base_change_level(el("1 + T^(1/2)"), 3)
    assert x.terms() == [(0, 1), (Fraction(1, 2), 1)]


# -- properties --------------------------------------------------------------

@st.composite
def elements(draw, cfg=C21, lo=-2, hi=3):
    n = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n):
        e = draw(st.integers(lo * cfg.scale, hi * cfg.scale - 1))
        terms[e] = draw(st.integers(1, cfg.p - 1))
    return RingElement.from_parts(cfg, [terms])


@given(elements(), elements())
def test_multiplicative_in_field_model(a, b):
    prod = a * b
    if not prod.truncated:
        assert elt_norm(prod) == nv_mul(elt_norm(a), elt_norm(b))


@given(elements(), elements())
def test_ultrametric(a, b):
    na, nb, ns = elt_norm(a), elt_norm(b), elt_norm(a + b)
    assert nv_compare(ns, nv_max([na, nb])) <= 0
    if nv_compare(na, nb) != 0:
        assert ns == nv_max([na, nb])


@given(elements(), st.integers(-2, 2))
def test_root_powers_are_multiplicative(x, g):
    s = Fraction(g, C21.scale)
    y = RingElement.monomial(C21, s) * x
    if not y.truncated:
        assert elt_norm(y) == nv_mul(Exact(s), elt_norm(x))


@given(elements())
def test_parse_render_round_trip(x):
    assert parse_element(render_element(x), C21) == x


P2 = RingConfig(3, 0, 6, factors=2)


@st.composite
def product_elements(draw):
    parts = []
    for _ in range(2):
        d = {}
        for _ in range(draw(st.integers(0, 3))):
            d[draw(st.integers(-2, 2))] = draw(st.integers(1, 2))
        parts.append(d)
    return RingElement.from_parts(P2, parts)


@given(product_elements(), product_elements())
def test_submultiplicative_in_products(a, b):
    prod = a * b
    if not prod.truncated:
        assert nv_compare(elt_norm(prod), nv_mul(elt_norm(a), elt_norm(b))) <= 0
