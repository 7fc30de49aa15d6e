import random
from fractions import Fraction

import pytest

from ultralattice.almostmod import NO, YES
from ultralattice.errors import BudgetExceeded, ConfigMismatch
from ultralattice.harness import random_monomial_lattice
from ultralattice.lattice import Lattice, MonomialSubring, gauge, lattice_equal
from ultralattice.ring import RingConfig, RingElement, parse_element
from ultralattice.tensor import (flatness_torsion_check, kron, tensor_gauge, tensor_lattices,
                                 tensor_norm_oracle, tensor_unit_ball, torsion_free_lemma)
from ultralattice.valnorm import Exact, Zero

C1 = RingConfig(2, 1, 8)
C0 = RingConfig(2, 0, 8)


def L_(gens, cfg=C1, ring=None):
    return Lattice.from_strings(cfg, gens) if ring is None else Lattice.from_strings(cfg, gens, ring)


def vec(*items, cfg=C1):
    return tuple(parse_element(s, cfg) for s in items)


def test_principal_tensor():
    H = L_([["T^(1/2)"]])
    res = tensor_lattices(H, H)
    assert lattice_equal(res.torsion_free_part, L_([["T"]]))
    assert res.torsion.gens == 0
    A = Lattice.unit_ball(C1, 1)
    assert lattice_equal(tensor_lattices(A, A).torsion_free_part, A)


def test_tensor_gauge_examples():
    H = L_([["T^(1/2)"]])
    # 1⊗1 against T·A: value 2, i.e. Exact(-1); the generator T^(1/2)⊗T^(1/2) has gauge Exact(0)
    assert tensor_gauge(vec("1"), H, H) == Exact(-1)
    assert tensor_gauge(vec("T"), H, H) == Exact(0)
    assert tensor_gauge(vec("0"), H, H) == Zero
    A = Lattice.unit_ball(C1, 1)
    assert tensor_gauge(vec("1"), A, A) == Exact(0)


def test_oracle_examples():
    H = L_([["T^(1/2)"]])
    assert tensor_norm_oracle(vec("T"), H, H, budget=2) == Exact(0)
    assert tensor_norm_oracle(vec("0"), H, H) == Zero
    A = Lattice.unit_ball(C1, 1)
    assert tensor_norm_oracle(vec("1"), A, A) == Exact(0)
    with pytest.raises(BudgetExceeded):
        tensor_norm_oracle(vec("1 + T + T^2 + T^3"), A, A, budget=3)


def test_gauge_matches_oracle_on_monomial_lattices():
    rng = random.Random(17)
    n = 0
    for _ in range(12):
        cfg = RingConfig(rng.choice((2, 3)), rng.randint(0, 1), 8)
        L1 = random_monomial_lattice(rng, cfg, rng.randint(1, 2))
        L2 = random_monomial_lattice(rng, cfg, rng.randint(1, 2))
        dim = L1.ambient_rank * L2.ambient_rank
        for _ in range(4):
            x = [RingElement.zero(cfg)] * dim
            for _ in range(rng.randint(1, 3)):
                i = rng.randrange(dim)
                x[i] = x[i] + RingElement.monomial(cfg, Fraction(rng.randrange(0, 2 * cfg.scale), cfg.scale))
            assert tensor_gauge(x, L1, L2) == tensor_norm_oracle(x, L1, L2)
            n += 1
    assert n == 48


def test_tensor_symmetry():
    L1 = L_([["1", "0"], ["0", "T^(1/2)"]])
    L2 = L_([["T"]])
    a = tensor_lattices(L1, L2).torsion_free_part
    b = tensor_lattices(L2, L1).torsion_free_part
    assert lattice_equal(a, b)  # both embed in A^2 with the same index order


def test_kron_gauge_is_submultiplicative():
    L1 = L_([["1", "T"], ["0", "T^(1/2)"]])
    L2 = L_([["T^(1/2)", "0"], ["1", "1"]])
    rng = random.Random(4)
    for _ in range(10):
        x = tuple(RingElement.monomial(C1, Fraction(rng.randrange(0, 4), 2)) for _ in range(2))
        y = tuple(RingElement.monomial(C1, Fraction(rng.randrange(0, 4), 2)) for _ in range(2))
        g = tensor_gauge(kron(x, y), L1, L2)
        bound = gauge(x, L1) * gauge(y, L2)
        assert g.exponent >= bound.exponent


def test_unit_ball_examples():
    A = Lattice.unit_ball(C1, 2)
    B = tensor_unit_ball(A, A, 2)
    assert lattice_equal(B, Lattice.unit_ball(C1.with_level(2), 4))
    H = L_([["T^(1/2)"]])
    assert lattice_equal(tensor_unit_ball(H, H, 1), L_([["T"]]))
    cfg = RingConfig(2, 1, 8)
    R = MonomialSubring.conductor_ring(cfg, 1)
    S = L_([["1"]], cfg, R)
    assert lattice_equal(tensor_unit_ball(S, S, 1), Lattice.unit_ball(cfg, 1))


def test_monomial_ring_tensor_has_torsion():
    R = MonomialSubring((2, 3))
    L = L_([["T^2"], ["T^3"]], C0, R)
    res = tensor_lattices(L, L)
    tf = [[str(x) for x in g] for g in res.torsion_free_part.generators]
    assert sorted(tf) == [["T^4"], ["T^5"]]
    assert res.torsion.gens == 2
    assert flatness_torsion_check(L, L).outcome == NO
    out = res.to_json()
    assert out["torsion_free_generators"] and len(out["torsion_generators"]) == 2


def test_flatness_examples():
    A = Lattice.unit_ball(C1, 1)
    L = L_([["1", "T"], ["0", "T^(1/2)"]])
    assert flatness_torsion_check(A, L).outcome == YES
    assert flatness_torsion_check(Lattice.zero(C1, 1), A).outcome == YES
    chk = torsion_free_lemma(A, 1, 1)
    assert chk.equal and chk.kernel_dim == chk.expected_dim == C1.scale
    assert torsion_free_lemma(L_([["1", "T"], ["T", "1"], ["0", "T^(1/2)"]]), Fraction(1, 2), 1).equal


def test_config_mismatch():
    with pytest.raises(ConfigMismatch):
        tensor_lattices(Lattice.unit_ball(C1, 1), Lattice.unit_ball(C0, 1))
