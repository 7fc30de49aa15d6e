"""
A short tour of ultralattice
============================

Run with ``python3 notebooks/tour.py``.  Every printed value is computed
exactly; nothing is approximated in floating point.
"""
import warnings
from fractions import Fraction

from ultralattice.almostmod import (LatticeMap, ModulePresentation, is_almost_iso, is_almost_zero,
                                    isometry_check, strictness_bounds, torsion_exponent)
from ultralattice.errors import NoStabilization
from ultralattice.lattice import (UNIT_BALL, Lattice, MonomialSubring, almost_elements, gauge,
                                  membership)
from ultralattice.ring import RingConfig, elt_norm, parse_element
from ultralattice.tensor import tensor_gauge, tensor_lattices
from ultralattice.valnorm import render

warnings.simplefilter("ignore", NoStabilization)

# Exponents live in (1/2)Z and stay below 8.
cfg = RingConfig(p=2, k=1, N=8)
x = parse_element("T^(3/2) + T^2", cfg)
print("norm of", x, "=", render(elt_norm(x)))

# A lattice in A^1 and the gauge it induces.
L = Lattice.from_strings(cfg, [["T^(1/2)"], ["T"]])
one = (parse_element("1", cfg),)
print("gauge of 1 against span{T^(1/2), T}:", render(gauge(one, L)))
print("1 in T^(-1/2) L?", membership(one, L, Fraction(-1, 2)))
print("1 in L?", membership(one, L, 0))

# Almost elements of the open subring F_p + T·A give back the whole unit ball.
ring = MonomialSubring.conductor_ring(cfg, 1)
B = Lattice.from_strings(cfg, [["1"]], ring)
P = almost_elements(B, 3)
print("(F_p + T A)_+ at depth 3:", [[str(e) for e in g] for g in P.generators])

# Torsion and almost-zero modules.
c2 = RingConfig(2, 2, 8)
Q = ModulePresentation(c2, UNIT_BALL, 1, ((parse_element("T^(1/4)", c2),),))
print("A/T^(1/4): torsion exponent", torsion_exponent(Q))
for K in (2, 3):
    v = is_almost_zero(Q, K)
    print(f"  killed by T^(1/2^{K})?", v.outcome)

# Maps: an isometry test and an almost isomorphism.
A = Lattice.unit_ball(c2, 1)
times_t = LatticeMap(A, A, ((parse_element("T", c2),),))
print("1 -> T isometric?", isometry_check(times_t).outcome)
rep = strictness_bounds(times_t)
print("  cokernel torsion exponent", rep.m_tor, "norm estimate exponent", rep.m_est)
incl = LatticeMap(Lattice.from_strings(c2, [["T^(1/4)"]]), A, ((parse_element("1", c2),),))
print("T^(1/4) A -> A almost iso at depth 2?", is_almost_iso(incl, 2).outcome)

# Tensor products: principal lattices multiply, and the numerical-semigroup
# ring F_p[T^2, T^3] produces torsion.
H = Lattice.from_strings(cfg, [["T^(1/2)"]])
print("gauge of 1 (x) 1 in H (x) H:", render(tensor_gauge(one, H, H)))
c0 = RingConfig(2, 0, 8)
S = Lattice.from_strings(c0, [["T^2"], ["T^3"]], MonomialSubring((2, 3)))
res = tensor_lattices(S, S)
print("(T^2,T^3) (x) (T^2,T^3): torsion generators",
      [[str(e) for e in v] for v in res.torsion.lifts],
      "exponent", torsion_exponent(res.torsion))
print("  torsion-free part", [[str(e) for e in g] for g in res.torsion_free_part.generators])
