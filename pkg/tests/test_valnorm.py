from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ultralattice.errors import IncomparableAtPrecision, NotPPowerDenominator
from ultralattice.valnorm import (ONE, BelowPrecision, Exact, Zero, nv_compare, nv_from_exponent, nv_max,
                                  nv_min, nv_mul, nv_pow, nv_root, parse, render)


def dyadic():
    return st.builds(lambda a, j: Fraction(a, 2 ** j), st.integers(-40, 40), st.integers(0, 4))


def test_from_exponent_examples():
    assert nv_from_exponent(0, 2) == Exact(0)
    assert nv_from_exponent(1, 2) == Exact(1)
    assert nv_from_exponent(Fraction(3, 4), 2) == Exact(Fraction(3, 4))


def test_from_exponent_rejects_foreign_denominator():
    with pytest.raises(NotPPowerDenominator):
        nv_from_exponent(Fraction(1, 3), 2)
    with pytest.raises(NotPPowerDenominator):
        nv_from_exponent(Fraction(1, 6), 3)


def test_mul_examples():
    assert nv_mul(Exact(1), Exact(-1)) == Exact(0)
    assert nv_mul(Zero, Exact(5)) == Zero
    assert nv_mul(Exact(Fraction(1, 2)), Exact(Fraction(1, 2))) == Exact(1)


def test_below_precision_propagation():
    assert nv_mul(BelowPrecision(8), Exact(2)) == BelowPrecision(10)
    assert nv_mul(BelowPrecision(8), Exact(Fraction(1, 2))) == BelowPrecision(8)
    # a negative exponent weakens the bound honestly
    assert nv_mul(BelowPrecision(8), Exact(-1)) == BelowPrecision(7)
    lossy = nv_mul(BelowPrecision(2), Exact(-3))
    assert lossy.is_below and lossy.lossy and lossy.bound == 2
    assert nv_mul(BelowPrecision(8), Zero) == Zero


def test_compare_examples():
    assert nv_compare(Exact(1), Exact(2)) == 1
    assert nv_compare(Zero, Exact(100)) == -1
    with pytest.raises(IncomparableAtPrecision):
        nv_compare(BelowPrecision(8), Exact(10))
    assert nv_compare(BelowPrecision(8), Exact(8)) == -1
    assert nv_compare(Zero, BelowPrecision(3)) == -1


def test_min_max():
    assert nv_max([Exact(2), Zero, Exact(-1)]) == Exact(-1)
    assert nv_max([]) == Zero
    assert nv_min([Exact(2), Exact(-1)]) == Exact(2)
    assert nv_pow(Exact(Fraction(1, 2)), 3) == Exact(Fraction(3, 2))
    assert nv_root(Exact(1), 2, 2) == Exact(Fraction(1, 2))


@pytest.mark.parametrize("v", [Zero, Exact(0), Exact(Fraction(-3, 2)), Exact(7), BelowPrecision(16),
                               BelowPrecision(4, lossy=True)])
def test_render_parse_round_trip(v):
    assert parse(render(v)) == v


def test_render_format():
    assert render(Exact(Fraction(3, 2))) == "2^-(3/2)"
    assert render(Exact(-1)) == "2^-(-1)"
    assert render(Zero) == "0"


@given(dyadic(), dyadic(), dyadic())
def test_mul_commutative_associative(a, b, c):
    A, B, C = Exact(a), Exact(b), Exact(c)
    assert nv_mul(A, B) == nv_mul(B, A)
    assert nv_mul(nv_mul(A, B), C) == nv_mul(A, nv_mul(B, C))
    assert nv_mul(A, ONE) == A


@given(dyadic(), dyadic())
def test_exponents_add(s, t):
    assert nv_mul(nv_from_exponent(s, 2), nv_from_exponent(t, 2)) == nv_from_exponent(s + t, 2)


@given(dyadic(), dyadic(), dyadic())
def test_order_compatible_with_multiplication(a, b, c):
    A, B, C = Exact(a), Exact(b), Exact(c)
    assert (nv_compare(A, B) <= 0) == (nv_compare(nv_mul(A, C), nv_mul(B, C)) <= 0)
