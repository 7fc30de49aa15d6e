import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from ultralattice.errors import NoStabilization, NotOpen, PrecisionLoss
from ultralattice.harness import random_open_lattice, span_samples
from ultralattice.lattice import (UNIT_BALL, Lattice, MonomialSubring, almost_elements,
                                  almost_elements_certified, base_change_vector, canonical_pi_adic_norm,
                                  contains_lattice, discrete_norm_infimum, gauge, lattice_equal,
                                  lattice_intersection, lattice_reduce, membership, subring_gauge_checks,
                                  unitball_span)
from ultralattice.ring import RingConfig, RingElement, elt_norm, parse_element
from ultralattice.valnorm import ONE, Exact, Zero, nv_compare, nv_max, nv_mul

C21 = RingConfig(2, 1, 8)


def L_(gens, cfg=C21, ring=UNIT_BALL):
    return Lattice.from_strings(cfg, gens, ring)


def v(*items, cfg=C21):
    return tuple(parse_element(s, cfg) for s in items)


def gens_str(L):
    return [[str(x) for x in g] for g in L.generators]


# -- reduce ------------------------------------------------------------------

def test_reduce_examples():
    assert gens_str(lattice_reduce(L_([["T"], ["T^(1/2)"]]))) == [["T^(1/2)"]]
    assert gens_str(lattice_reduce(L_([["1", "0"], ["0", "1"]]))) == [["1", "0"], ["0", "1"]]
    assert lattice_reduce(Lattice.zero(C21, 2)).generators == ()


def test_reduce_is_idempotent_and_span_preserving():
    rng = random.Random(7)
    for _ in range(20):
        cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 2), 8)
        L = random_open_lattice(rng, cfg, rng.randint(1, 3))
        R = lattice_reduce(L)
        assert gens_str(lattice_reduce(R)) == gens_str(R)
        assert lattice_equal(L, R)


def test_reduce_needs_unit_ball():
    R = MonomialSubring((2, 3))
    with pytest.raises(ValueError):
        lattice_reduce(L_([["1"]], RingConfig(2, 0, 8), R))


def test_guard_band(monkeypatch):
    monkeypatch.setenv("ULTRALATTICE_PRECISION_GUARD", "2")
    with pytest.raises(PrecisionLoss):
        lattice_reduce(L_([["T^7"]]))
    monkeypatch.setenv("ULTRALATTICE_PRECISION_GUARD", "0")
    assert gens_str(lattice_reduce(L_([["T^7"]]))) == [["T^7"]]


# -- membership and gauge ------------------------------------------------------

def test_membership_examples():
    A = L_([["1"]])
    assert membership(v("0"), A, 5)
    assert membership(v("T^(3/2)"), A, 1)
    assert not membership(v("T^(3/2)"), A, 2)
    assert membership(v("1"), L_([["T^(1/2)"], ["T"]]), Fraction(-1, 2))


def test_membership_base_changes_for_finer_s():
    A = L_([["1"]], RingConfig(2, 0, 8))
    assert membership(v("T", cfg=RingConfig(2, 0, 8)), A, Fraction(3, 4))
    assert not membership(v("1", cfg=RingConfig(2, 0, 8)), A, Fraction(1, 4))


def test_gauge_examples():
    A = L_([["1"]])
    assert gauge(v("0"), A) == Zero
    assert gauge(v("T^(3/2)"), A) == Exact(Fraction(3, 2))
    # frozen from oracles.gauge_scan (grid scan with plain F_p elimination)
    assert gauge(v("1"), L_([["T^(1/2)"], ["T"]])) == Exact(Fraction(-1, 2))


def test_gauge_matches_oracle_on_random_lattices():
    rng = random.Random(11)
    count = 0
    for _ in range(40):
        cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 2), 8)
        L = random_open_lattice(rng, cfg, rng.randint(1, 3))
        H = oracles.diagonal_bound(L.generators, L.ambient_rank)
        for x in span_samples(rng, L, 3):
            if all(xi.is_zero() for xi in x):
                continue
            assert gauge(x, L).exponent == oracles.gauge_scan(x, L.generators, cfg, H)
            s = Fraction(rng.randrange(-cfg.scale, 2 * cfg.scale), cfg.scale)
            assert membership(x, L, s) == oracles.member(x, L.generators, s, cfg, H)
            count += 1
    assert count > 80


def test_norm_recovery_on_free_modules():
    rng = random.Random(3)
    for _ in range(30):
        cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 2), 8, rng.choice((1, 2)))
        n = rng.randint(1, 3)
        x = tuple(RingElement.from_parts(cfg, [{rng.randrange(-cfg.scale, 3 * cfg.scale): 1}
                                               for _ in range(cfg.factors)]) for _ in range(n))
        assert gauge(x, Lattice.unit_ball(cfg, n)) == nv_max(elt_norm(e) for e in x)


def test_gauge_is_a_seminorm():
    rng = random.Random(5)
    for _ in range(20):
        cfg = RingConfig(2, rng.randint(0, 2), 8)
        L = random_open_lattice(rng, cfg, 2)
        xs = span_samples(rng, L, 4, 0, 1)
        for x in xs:
            for y in xs:
                s = tuple(a + b for a, b in zip(x, y))
                assert nv_compare(gauge(s, L), nv_max([gauge(x, L), gauge(y, L)])) <= 0
            f = RingElement.from_parts(cfg, [{rng.randrange(0, cfg.scale): 1, cfg.scale: 1}])
            fx = tuple(f * a for a in x)
            assert nv_compare(gauge(fx, L), nv_mul(elt_norm(f), gauge(x, L))) <= 0


def test_dominance():
    small = L_([["T", "0"], ["0", "T^(1/2)"]])
    big = L_([["1", "0"], ["0", "1"], ["T^(-1/2)", "T"]])
    assert contains_lattice(big, small)
    rng = random.Random(2)
    for x in span_samples(rng, big, 10):
        assert nv_compare(gauge(x, big), gauge(x, small)) <= 0


# -- saturation and almost elements -------------------------------------------

def test_unitball_span_examples():
    cfg = RingConfig(2, 1, 8)
    R = MonomialSubring.conductor_ring(cfg, 1)
    L = L_([["1"]], cfg, R)
    assert lattice_equal(unitball_span(L), Lattice.unit_ball(cfg, 1))
    A = L_([["1"]])
    assert unitball_span(A) is A
    assert unitball_span(Lattice.zero(cfg, 1)).generators == ()


def test_monomial_ring_must_be_open():
    with pytest.raises(NotOpen):
        MonomialSubring((2, 4)).conductor(RingConfig(2, 0, 8))
    assert MonomialSubring((2, 3)).conductor(RingConfig(2, 0, 8)) == 2


def test_almost_elements_examples():
    A = L_([["1"]])
    P, cert = almost_elements_certified(A, 4)
    assert gens_str(P) == [["1"]] and P.depth == 4 and cert.stable
    cfg = RingConfig(2, 1, 8)
    R = MonomialSubring.conductor_ring(cfg, 1)
    P = almost_elements(L_([["1"]], cfg, R), 3)
    assert lattice_equal(P, Lattice.unit_ball(cfg.with_level(3), 1))
    c0 = RingConfig(2, 0, 8)
    P = almost_elements(Lattice.unit_ball(c0, 1), 3)
    assert P.cfg.k == 3 and lattice_equal(P, Lattice.unit_ball(c0.with_level(3), 1))


def test_almost_elements_laws_random():
    rng = random.Random(13)
    for _ in range(15):
        cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 2), 8)
        L = random_open_lattice(rng, cfg, rng.randint(1, 3))
        K = cfg.k + 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NoStabilization)
            P = almost_elements(L, K)
            assert lattice_equal(almost_elements(P, K), P)
        for g in P.generators:
            assert nv_compare(gauge(g, P), ONE) <= 0
        for x in span_samples(rng, L, 4):
            assert gauge(x, L) == gauge(base_change_vector(x, K), P)
            assert (nv_compare(gauge(x, L), ONE) <= 0) == membership(base_change_vector(x, K), P, 0)


def test_intersection():
    L1 = L_([["1", "0"], ["0", "T"]])
    L2 = L_([["T^(1/2)", "0"], ["0", "1"]])
    I = lattice_intersection(L1, L2)
    assert lattice_equal(I, L_([["T^(1/2)", "0"], ["0", "T"]]))


# -- discrete norms --------------------------------------------------------------

def test_canonical_norm_examples():
    A = L_([["1"]])
    x = v("T^(3/2)")
    assert canonical_pi_adic_norm(x, A, 0) == Exact(1)
    assert canonical_pi_adic_norm(x, A, 1) == Exact(Fraction(3, 2))
    assert canonical_pi_adic_norm(v("0"), A, 1) == Zero
    assert discrete_norm_infimum(x, A) == Exact(Fraction(3, 2)) == gauge(x, A)
    assert discrete_norm_infimum(v("1"), A) == Exact(0)
    assert discrete_norm_infimum(v("0"), A) == Zero


# -- subring gauges ------------------------------------------------------------------

def test_subring_examples():
    A = Lattice.unit_ball(C21, 1)
    rep = subring_gauge_checks(A, [parse_element("T^(1/2)", C21), parse_element("1 + T", C21)])
    assert rep.passed and rep.checked > 0
    c0 = RingConfig(2, 0, 8)
    B0 = L_([["1"]], c0, MonomialSubring((2, 3)))
    rep = subring_gauge_checks(B0, [parse_element("T^2", c0), parse_element("T^3", c0)], root_closed=True)
    assert rep.passed
    assert subring_gauge_checks(A, [RingElement.zero(C21)]).passed


def test_product_model_is_power_multiplicative_not_multiplicative():
    cfg = RingConfig(2, 0, 8, factors=2)
    A = Lattice.unit_ball(cfg, 1)
    x, y = parse_element("(T | 1)", cfg), parse_element("(1 | T)", cfg)
    rep = subring_gauge_checks(A, [x, y])
    assert rep.passed
    assert gauge((x * y,), A) == Exact(1) and gauge((x,), A) == Exact(0)


def test_json_round_trip():
    L = L_([["T^(1/2)", "0"], ["1", "T"]])
    L2 = Lattice.from_json(L.to_json())
    assert gens_str(L2) == gens_str(L) and L2.cfg == L.cfg
    R = Lattice.from_json({"cfg": {"p": 2, "k": 0, "N": 8}, "rank": 1, "coeff_ring": {"monomial": [2, 3]},
                           "generators": [["T^2"]]})
    assert isinstance(R.coeff_ring, MonomialSubring) and R.coeff_ring.generators == (2, 3)


@given(st.integers(0, 2 ** 32))
def test_gauge_homogeneous(seed):
    rng = random.Random(seed)
    cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 1), 8)
    L = random_open_lattice(rng, cfg, rng.randint(1, 2))
    x = span_samples(rng, L, 1, 0, 1)[0]
    if all(e.is_zero() for e in x):
        return
    s = Fraction(rng.randrange(0, cfg.scale + 1), cfg.scale)
    y = tuple(RingElement.monomial(cfg, s) * e for e in x)
    assert gauge(y, L) == nv_mul(Exact(s), gauge(x, L))
