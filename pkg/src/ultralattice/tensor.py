"""Tensor products of lattices, their torsion, gauges and unit balls.

Generators of ``L1 ⊗ L2`` are the pairs ``g_i ⊗ h_j`` (index ``i * b + j``)
and vectors of ``A^{n1} ⊗ A^{n2}`` are flattened the same way.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _fp, _r0
from .almostmod import (ModulePresentation, Verdict, YES, NO, _dense_to_vector, _render_vec,
                        _structure, torsion_submodule)
from .errors import BudgetExceeded, ConfigMismatch
from .lattice import (UNIT_BALL, Lattice, MonomialSubring, almost_elements, assemble_vectors,
                      from_series, gauge, lattice_reduce, to_series, unitball_span, vector_offset,
                      work_cap)
from .ring import RingConfig, RingElement
from .valnorm import NormValue, Zero, nv_max, nv_min, nv_mul


def kron(x, y) -> tuple:
    return tuple(a * b for a in x for b in y)


@dataclass(frozen=True, eq=False)
class TensorResult:
    presentation: ModulePresentation
    torsion: ModulePresentation
    torsion_free_part: Lattice
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"presentation": self.presentation.to_json(),
                "torsion_free_generators": [list(_render_vec(v)) for v in self.torsion_free_part.generators],
                "torsion_generators": [list(v) for v in map(_render_vec, self.torsion.lifts or ())],
                "flags": dict(self.flags)}


def _check_pair(L1: Lattice, L2: Lattice):
    if L1.cfg != L2.cfg:
        raise ConfigMismatch("lattices use different rings")
    if L1.coeff_ring != L2.coeff_ring:
        raise ConfigMismatch(f"coefficient rings differ: {L1.coeff_ring} vs {L2.coeff_ring}")


def unitball_syzygies(L: Lattice) -> tuple:
    """Generators of the ``A_{<=1}``-relations among the generators of ``L``."""
    cfg = L.cfg
    m = len(L.generators)
    per_factor = []
    for f in range(cfg.factors):
        sf = L._frames[f].smith
        cols = [[from_series(sf.v[i][j], 0, cfg, strict=False) for i in range(m)] for j in range(sf.rank, m)]
        per_factor.append(cols)
    return assemble_vectors(cfg, per_factor, m)


def _images_series(gens, cap):
    off = vector_offset(gens, 0)
    off = 0 if off is None else off
    return [[to_series(x, 0, off, cap) for x in g] for g in gens]


def monomial_syzygies(L: Lattice, B: int) -> np.ndarray:
    """Minimal ``R0``-relations among the generators of ``L`` (dense rows, layout ``m × B``)."""
    cfg, ring = L.cfg, L.coeff_ring
    m = len(L.generators)
    S = ring.semigroup(cfg, B)
    cap = work_cap(cfg, vector_offset(L.generators, 0) or 0, 2) + B
    K = _r0.kernel_of_images(_images_series(L.generators, cap), m, B, S, cfg.p)
    if not K.size:
        return np.zeros((0, m * B), dtype=np.int64)
    return K[_r0.minimal_subset(K, m, B, S, B, cfg.p)]


def _kron_relations(s1, s2, a: int, b: int, cfg: RingConfig) -> list:
    zero, one = RingElement.zero(cfg), RingElement.one(cfg)
    cols = []
    for sig in s1:
        for j in range(b):
            cols.append(tuple(sig[i] if jj == j else zero for i in range(a) for jj in range(b)))
    for tau in s2:
        for i in range(a):
            cols.append(tuple(tau[jj] if ii == i else zero for ii in range(a) for jj in range(b)))
    return cols


def _monomial_reduce(cfg, ring, n: int, vectors) -> tuple:
    """A minimal ``R0``-generating subset of ``vectors`` (exact monomial data, single factor)."""
    if not vectors:
        return ()
    off = vector_offset(vectors, 0) or 0
    width = max([e - off + 1 for v in vectors for x in v for e, _ in x.parts[0]] + [1])
    B = max(width, cfg.hi - off)
    dense = np.zeros((len(vectors), n * width), dtype=np.int64)
    for r, v in enumerate(vectors):
        for i, x in enumerate(v):
            for e, c in x.parts[0]:
                dense[r, i * width + e - off] = c
    keep = _r0.minimal_subset(dense, n, width, ring.semigroup(cfg, B), B, cfg.p)
    return tuple(vectors[i] for i in keep)


def tensor_lattices(L1: Lattice, L2: Lattice) -> TensorResult:
    _check_pair(L1, L2)
    cfg = L1.cfg
    a, b = len(L1.generators), len(L2.generators)
    n = L1.ambient_rank * L2.ambient_rank
    images = tuple(kron(g, h) for g in L1.generators for h in L2.generators)
    flags = {"precision": cfg.N, "truncated": any(x.truncated for v in images for x in v),
             "completed_equals_plain": True}
    if isinstance(L1.coeff_ring, MonomialSubring):
        ring = L1.coeff_ring
        B = cfg.hi
        s1 = [_dense_to_vector(r, a, B, cfg) for r in monomial_syzygies(L1, B)]
        s2 = [_dense_to_vector(r, b, B, cfg) for r in monomial_syzygies(L2, B)]
        cols = _kron_relations(s1, s2, a, b, cfg)
        P = ModulePresentation.from_columns(cfg, ring, a * b, cols, embedding=images) if a * b \
            else ModulePresentation(cfg, ring, 0, ())
        tor = torsion_submodule(P) if a * b else P
        tf = Lattice(cfg, n, _monomial_reduce(cfg, ring, n, images), ring)
    else:
        cols = _kron_relations(unitball_syzygies(L1), unitball_syzygies(L2), a, b, cfg)
        P = ModulePresentation.from_columns(cfg, UNIT_BALL, a * b, cols) if a * b \
            else ModulePresentation(cfg, UNIT_BALL, 0, ())
        # finitely generated torsion-free modules over a valuation ring are free
        tor = ModulePresentation(cfg, UNIT_BALL, 0, ())
        tf = lattice_reduce(Lattice(cfg, n, images)) if images else Lattice.zero(cfg, n)
    flags["torsion_generators"] = tor.gens
    return TensorResult(P, tor, tf, flags)


def tensor_gauge(x, L1: Lattice, L2: Lattice) -> NormValue:
    """Gauge of ``x ∈ A^{n1} ⊗ A^{n2}`` against the torsion-free part of ``L1 ⊗ L2``."""
    return gauge(tuple(x), tensor_lattices(L1, L2).torsion_free_part)


def tensor_unit_ball(L1: Lattice, L2: Lattice, depth: int | None = None) -> Lattice:
    """Almost elements of the torsion-free part; completion changes nothing at finite precision."""
    return almost_elements(tensor_lattices(L1, L2).torsion_free_part, depth)


# ---------------------------------------------------------------------------
# brute-force oracle

def _basis_vector(cfg, n, i, s, c=1) -> tuple:
    zero = RingElement.zero(cfg)
    return tuple(RingElement.monomial(cfg, s, c) if t == i else zero for t in range(n))


def tensor_norm_oracle(x, L1: Lattice, L2: Lattice, budget: int = 3) -> NormValue:
    """Least ``max_i |x_i|_{L1}·|y_i|_{L2}`` over monomial decompositions ``x = Σ x_i ⊗ y_i``.

    Each monomial term ``c·T^e·(e_i ⊗ e_j)`` of ``x`` becomes one summand
    ``T^a e_i ⊗ c·T^(e-a) e_j``, with ``a`` ranging over the grid between 0
    and ``e``.  Exact for lattices spanned by monomial vectors.
    """
    _check_pair(L1, L2)
    cfg = L1.cfg
    if cfg.factors != 1:
        raise ConfigMismatch("the tensor oracle handles single-factor models only")
    n1, n2 = L1.ambient_rank, L2.ambient_rank
    terms = [(idx, e, c) for idx, xi in enumerate(x) for e, c in xi.parts[0]]
    if not terms:
        return Zero
    if len(terms) > budget:
        raise BudgetExceeded(f"{len(terms)} monomial summands exceed the budget of {budget}")
    cache = {}

    def g(L, n, i, s, c=1):
        key = (id(L), i, s, c)
        if key not in cache:
            cache[key] = gauge(_basis_vector(cfg, n, i, Fraction(s, cfg.scale), c), L)
        return cache[key]

    worst = []
    for idx, e, c in terms:
        i, j = divmod(idx, n2)
        lo, hi = min(0, e), max(0, e)
        best = []
        for a in range(lo, hi + 1):
            if not (cfg.lo <= a < cfg.hi and cfg.lo <= e - a < cfg.hi):
                continue
            best.append(nv_mul(g(L1, n1, i, a), g(L2, n2, j, e - a, c)))
        worst.append(nv_min(best))
    return nv_max(worst)


def is_monomial_lattice(L: Lattice) -> bool:
    """Every generator is a single monomial times a basis vector."""
    return all(sum(len(x.parts[0]) for x in v) <= 1 for v in L.generators)


# ---------------------------------------------------------------------------
# flatness and the torsion-free lemma

@dataclass
class LemmaCheck:
    s: Fraction
    t: Fraction
    kernel_dim: int
    expected_dim: int
    equal: bool


def torsion_free_lemma(L: Lattice, s, t) -> LemmaCheck:
    """Compare ``ker(T^t)`` on ``L/T^{s+t}L`` with ``T^s·(L/T^{s+t}L)`` over F_p.

    ``L/T^h L`` is modeled as ``(A_{<=1}/T^h)^m`` modulo the syzygies of the
    generators, so redundant generating sets are exercised too.
    """
    L = unitball_span(L)
    cfg = L.cfg
    p = cfg.p
    sg, tg = cfg.grid(s), cfg.grid(t)
    h = sg + tg
    m = len(L.generators)
    dim = m * h

    def embed(vec_parts, shift):
        row = np.zeros(dim, dtype=np.int64)
        for i, part in enumerate(vec_parts):
            for e, c in part:
                if 0 <= e + shift < h:
                    row[i * h + e + shift] = c
        return row

    rel = []
    for syz in unitball_syzygies(L):
        for a in range(h):
            rel.append(embed([x.parts[0] for x in syz], a))
    S = _fp.row_basis(np.array(rel, dtype=np.int64).reshape(-1, dim), p, dim)
    # x ↦ T^t x on coordinates, then test membership in S
    mult = np.zeros((dim, dim), dtype=np.int64)
    for i in range(m):
        for e in range(h - tg):
            mult[i * h + e + tg, i * h + e] = 1
    # kernel of V → V/S after multiplication: {x : mult x ∈ S}
    if S.shape[0]:
        comp = _fp.nullspace(S, p, dim)             # rows annihilating S
        K = _fp.nullspace((comp @ mult) % p, p, dim)
    else:
        K = _fp.nullspace(mult, p, dim)
    img = [embed([[(e, 1)] if ii == i else [] for ii in range(m)], sg) for i in range(m) for e in range(h)]
    target = np.vstack([np.array(img, dtype=np.int64).reshape(-1, dim), S]) if S.shape[0] else \
        np.array(img, dtype=np.int64).reshape(-1, dim)
    ker_dim = _fp.rank(np.vstack([K, S]) if S.shape[0] else K, p) - S.shape[0]
    exp_dim = _fp.rank(target, p) - S.shape[0]
    both = _fp.rank(np.vstack([K, target]), p) - S.shape[0]
    return LemmaCheck(Fraction(s), Fraction(t), ker_dim, exp_dim, ker_dim == exp_dim == both)


def flatness_torsion_check(L1: Lattice, L2: Lattice, pairs=None) -> Verdict:
    """Torsion of ``L1 ⊗ L2`` must vanish; the torsion-free lemma is checked on ``L1``."""
    _check_pair(L1, L2)
    cfg = L1.cfg
    if not L1.generators or not L2.generators:
        return Verdict(YES, cfg.k, cfg.N)
    res = tensor_lattices(L1, L2)
    if isinstance(L1.coeff_ring, MonomialSubring):
        if res.torsion.gens:
            return Verdict(NO, cfg.k, cfg.N, ("torsion",) + _render_vec(res.torsion.lifts[0]))
    else:
        for f in range(cfg.factors):
            st = _structure(res.presentation, f)
            bad = [i for i in range(st.rank) if st.d[i] > 0]
            if bad:
                col = [from_series(st.frame.u[r][bad[0]], 0, cfg, strict=False)
                       for r in range(res.presentation.gens)]
                per = [[] for _ in range(cfg.factors)]
                per[f] = [col]
                return Verdict(NO, cfg.k, cfg.N, ("torsion",) + _render_vec(assemble_vectors(cfg, per, len(col))[0]))
    if cfg.factors == 1:
        if pairs is None:
            step = Fraction(1, cfg.scale)
            pairs = [(step, step), (Fraction(1), Fraction(1)), (step, Fraction(1))]
        for s, t in pairs:
            chk = torsion_free_lemma(L1, s, t)
            if not chk.equal:
                return Verdict(NO, cfg.k, cfg.N, ("lemma", str(s), str(t)))
    return Verdict(YES, cfg.k, cfg.N)
