"""Finitely presented modules, torsion, almost-zero verdicts and lattice maps.

Unit-ball presentations are decided through Smith invariants.  Presentations
over a monomial subring go through the windowed F_p engine in ``_r0`` and are
cross-checked against a doubled window.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _fp, _r0
from ._series import Series, matmul, matvec, smith
from .errors import (ConfigMismatch, NotCommensurable, NotInjective, NotInSpan, NotWellDefined,
                     PrecisionError, PrecisionLoss, PrecisionUndecidable)
from .lattice import (UNIT_BALL, Lattice, MonomialSubring, UnitBall, assemble_vectors,
                      base_change_lattice, coeff_ring_from_json, column_to_parts, from_series,
                      gauge, gauge_exponent, lattice_intersection, membership, to_series,
                      unitball_span, vector_offset, work_cap)
from .ring import RingConfig, RingElement, base_change_level, parse_element, render_element
from .valnorm import NormValue

YES, NO, UNDECIDED = "yes", "no", "undecided-at-precision"


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True, eq=False)
class ModulePresentation:
    """``R0^gens / (column span of relations)``; ``relations`` has ``gens`` rows.

    ``embedding`` optionally gives, for each generator, its image in some
    ``A^M`` such that the kernel after inverting ``T`` is exactly the span of
    the relations.  ``lifts`` records generators in the coordinates of a
    parent presentation (torsion submodules carry it).
    """

    cfg: RingConfig
    coeff_ring: object
    gens: int
    relations: tuple
    embedding: tuple | None = None
    lifts: tuple | None = None

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.relations)
        if len(rows) != self.gens:
            if self.gens == 0 or (rows and len(rows) != self.gens):
                if rows:
                    raise ConfigMismatch(f"{len(rows)} relation rows for {self.gens} generators")
            rows = tuple(() for _ in range(self.gens))
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ConfigMismatch("ragged relation matrix")
        for r in rows:
            for x in r:
                if x.cfg != self.cfg:
                    raise ConfigMismatch(f"{x.cfg} vs {self.cfg}")
                _check_coefficient(x, self.coeff_ring)
        if isinstance(self.coeff_ring, MonomialSubring) and self.cfg.factors != 1:
            raise ConfigMismatch("monomial coefficient rings are supported for single-factor models only")
        object.__setattr__(self, "relations", rows)

    @classmethod
    def from_columns(cls, cfg, coeff_ring, gens, columns, embedding=None, lifts=None):
        rows = tuple(tuple(col[i] for col in columns) for i in range(gens))
        return cls(cfg, coeff_ring, gens, rows, embedding, lifts)

    @property
    def columns(self) -> list:
        if not self.gens:
            return []
        return [tuple(row[j] for row in self.relations) for j in range(len(self.relations[0]))]

    def to_json(self) -> dict:
        out = {"cfg": self.cfg.to_json(), "coeff_ring": self.coeff_ring.to_json(), "gens": self.gens,
               "relations": [[render_element(x) for x in row] for row in self.relations]}
        if self.embedding is not None:
            out["embedding"] = [[render_element(x) for x in v] for v in self.embedding]
        if self.lifts is not None:
            out["lifts"] = [[render_element(x) for x in v] for v in self.lifts]
        return out

    @classmethod
    def from_json(cls, obj) -> "ModulePresentation":
        if isinstance(obj, str):
            obj = json.loads(obj)
        cfg = RingConfig.from_json(obj["cfg"])
        coeff = coeff_ring_from_json(obj.get("coeff_ring", "unit_ball"))

        def mat(key):
            if key not in obj:
                return None
            return tuple(tuple(parse_element(s, cfg) for s in row) for row in obj[key])

        return cls(cfg, coeff, int(obj["gens"]), mat("relations") or (), mat("embedding"), mat("lifts"))

    def __repr__(self):
        return f"ModulePresentation(gens={self.gens}, coeff={self.coeff_ring}, relations={len(self.columns)})"


def _check_coefficient(x: RingElement, ring):
    if isinstance(ring, MonomialSubring):
        if not ring.contains(x):
            raise ValueError(f"relation entry {render_element(x)} is not in {ring}")
    elif any(e < 0 for part in x.parts for e, _ in part):
        raise ValueError(f"relation entry {render_element(x)} is not in the unit ball")


def saturate_presentation(P: ModulePresentation) -> ModulePresentation:
    """Base change ``P ⊗_{R0} A_{<=1}``."""
    if isinstance(P.coeff_ring, UnitBall):
        return P
    return ModulePresentation(P.cfg, UNIT_BALL, P.gens, P.relations)


def base_change_presentation(P: ModulePresentation, k2: int) -> ModulePresentation:
    P = saturate_presentation(P)
    if k2 == P.cfg.k:
        return P
    rows = tuple(tuple(base_change_level(x, k2) for x in r) for r in P.relations)
    return ModulePresentation(P.cfg.with_level(k2), UNIT_BALL, P.gens, rows)


@dataclass
class _Structure:
    d: list            # Smith invariants (grid units), length = rank
    rank: int
    free_rank: int
    frame: object


def _structure(P: ModulePresentation, f: int) -> _Structure:
    cfg = P.cfg
    cap = work_cap(cfg, 0, max(P.gens, 1))
    cols = P.columns
    rows = [[to_series(col[i], f, 0, cap) for col in cols] for i in range(P.gens)]
    sf = smith(rows, cfg.p, cap)
    return _Structure(sf.d, sf.rank, P.gens - sf.rank, sf)


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Verdict:
    outcome: str
    depth: int
    precision: int
    witness: object = None
    stable: bool | None = None
    note: str | None = None

    def __bool__(self):
        return self.outcome == YES

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "depth": self.depth, "precision": self.precision}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.stable is not None:
            out["stable"] = self.stable
        return out

    @classmethod
    def from_json(cls, obj) -> "Verdict":
        if isinstance(obj, str):
            obj = json.loads(obj)
        w = obj.get("witness")
        if isinstance(w, list):
            w = tuple(w)
        return cls(obj["outcome"], int(obj["depth"]), int(obj["precision"]), w, obj.get("stable"))


def _render_vec(v) -> tuple:
    return tuple(render_element(x) for x in v)


# ---------------------------------------------------------------------------
# torsion

def _monomial_setup(P: ModulePresentation, B: int):
    cfg, ring = P.cfg, P.coeff_ring
    S = ring.semigroup(cfg, B)
    m = P.gens
    cols = P.columns
    width = B
    for col in cols:
        for x in col:
            for e, _ in x.parts[0]:
                width = max(width, e + 1)
    rel = np.zeros((len(cols), m * width), dtype=np.int64)
    for r, col in enumerate(cols):
        for i, x in enumerate(col):
            for e, c in x.parts[0]:
                rel[r, i * width + e] = c
    if P.embedding is not None:
        off = vector_offset(P.embedding, 0)
        off = 0 if off is None else off
        cap = work_cap(cfg, off, 2) + B
        images = [[to_series(x, 0, off, cap) for x in v] for v in P.embedding]
    else:
        # R0^m -> A^{m - r}: the rows of uinv beyond the rank of the relation matrix
        cap = work_cap(cfg, 0, max(m, 1)) + B
        rows = [[to_series(col[i], 0, 0, cap) for col in cols] for i in range(m)]
        sf = smith(rows, cfg.p, cap, want_u=False, want_v=False)
        images = [[sf.uinv[i][j] for i in range(sf.rank, m)] for j in range(m)]
    return S, rel, width, images


def _monomial_torsion(P: ModulePresentation, B: int) -> _r0.KernelData:
    S, rel, width, images = _monomial_setup(P, B)
    return _r0.torsion_data(images, rel, P.gens, B, S, P.cfg.p)


def _dense_to_vector(row, m, B, cfg) -> tuple:
    row = np.asarray(row).reshape(m, B)
    return tuple(RingElement.from_parts(cfg, [{int(e): int(row[j, e]) for e in np.flatnonzero(row[j])}])
                 for j in range(m))


def _checked_monomial_torsion(P: ModulePresentation) -> _r0.KernelData:
    B = P.cfg.hi
    a = _monomial_torsion(P, B)
    b = _monomial_torsion(P, 2 * B)
    if a.generators.shape[0] != b.generators.shape[0] or a.exponent != b.exponent:
        raise PrecisionUndecidable(
            f"torsion differs between precision N={P.cfg.N} and 2N "
            f"({a.generators.shape[0]} vs {b.generators.shape[0]} generators)")
    return a


def _monomial_relations_of(gens: np.ndarray, rel: np.ndarray, m: int, B: int, S: list, p: int) -> np.ndarray:
    """Minimal generators of ``{c ∈ R0^g : Σ c_i z_i ∈ Rel}`` in layout ``g × B``."""
    g = gens.shape[0]
    shifts = [(i, t) for i in range(g) for t in S]
    if not shifts:
        return np.zeros((0, 0), dtype=np.int64)
    X = np.vstack([_r0.shift_rows(gens[i], m, B, t, B) for i, t in shifts])
    stack = np.vstack([X, rel]) if rel.size else X
    ker = _r0.left_kernel(stack % p, p)
    cx = ker[:, :len(shifts)] if ker.size else np.zeros((0, len(shifts)), dtype=np.int64)
    dense = np.zeros((cx.shape[0], g * B), dtype=np.int64)
    for r, (i, t) in enumerate(shifts):
        dense[:, i * B + t] = cx[:, r]
    dense %= p
    if not dense.any():
        return np.zeros((0, g * B), dtype=np.int64)
    keep = _r0.minimal_subset(dense, g, B, S, B, p)
    return dense[keep]


def torsion_submodule(P: ModulePresentation) -> ModulePresentation:
    """Presentation of the ``T^∞``-torsion submodule, with generator lifts into ``P``."""
    cfg = P.cfg
    if isinstance(P.coeff_ring, MonomialSubring):
        data = _checked_monomial_torsion(P)
        m, B = P.gens, data.B
        S = P.coeff_ring.semigroup(cfg, B)
        lifts = tuple(_dense_to_vector(g, m, B, cfg) for g in data.generators)
        g = len(lifts)
        relrows = _monomial_relations_of(data.generators, data.relations, m, B, S, cfg.p)
        cols = [_dense_to_vector(r, g, B, cfg) for r in relrows]
        if g == 0:
            return ModulePresentation(cfg, P.coeff_ring, 0, ())
        return ModulePresentation.from_columns(cfg, P.coeff_ring, g, cols, lifts=lifts)
    per_lifts, per_rel = [], []
    for f in range(cfg.factors):
        st = _structure(P, f)
        idx = [i for i in range(st.rank) if st.d[i] > 0]
        per_lifts.append([[from_series(st.frame.u[r][i], 0, cfg) for r in range(P.gens)] for i in idx])
        per_rel.append([st.d[i] for i in idx])
    count = max((len(x) for x in per_rel), default=0)
    lifts = assemble_vectors(cfg, per_lifts, P.gens) if count else ()
    cols = []
    for t in range(count):
        col = []
        for s in range(count):
            parts = []
            for f in range(cfg.factors):
                if s != t:
                    parts.append({})
                elif t < len(per_rel[f]):
                    parts.append({per_rel[f][t]: 1})
                else:
                    parts.append({0: 1})
            col.append(RingElement.from_parts(cfg, parts))
        cols.append(tuple(col))
    if count == 0:
        return ModulePresentation(cfg, UNIT_BALL, 0, ())
    return ModulePresentation.from_columns(cfg, UNIT_BALL, count, cols, lifts=lifts)


def torsion_exponent(P: ModulePresentation):
    """Least grid ``s`` with ``T^s`` killing the torsion (``math.inf`` if none up to ``N``).

    Over a monomial subring only monoid elements act; the result is the least
    monoid element ``t0`` such that every monoid ``t >= t0`` kills the torsion.
    """
    cfg = P.cfg
    if isinstance(P.coeff_ring, MonomialSubring):
        e = _checked_monomial_torsion(P).exponent
        return math.inf if e == float("inf") else Fraction(e, cfg.scale)
    best = Fraction(0)
    for f in range(cfg.factors):
        st = _structure(P, f)
        for d in st.d:
            best = max(best, Fraction(d, cfg.scale))
    return best if best <= cfg.N else math.inf


def quotient_by_torsion(P: ModulePresentation) -> ModulePresentation:
    tor = torsion_submodule(P)
    extra = list(tor.lifts or ())
    cols = list(P.columns) + extra
    return ModulePresentation.from_columns(P.cfg, P.coeff_ring, P.gens, cols, P.embedding)


def is_zero_module(P: ModulePresentation) -> bool:
    P = saturate_presentation(P)
    for f in range(P.cfg.factors):
        st = _structure(P, f)
        if st.free_rank or any(st.d):
            return False
    return True


# ---------------------------------------------------------------------------
# almost zero

def _annihilation(P: ModulePresentation, K: int):
    """Is ``P`` killed by ``T^{1/p^K}``?  Returns (answer, witness vector or None, working presentation)."""
    Q = base_change_presentation(P, max(K, P.cfg.k))
    step = Q.cfg.scale // Q.cfg.p ** K
    for f in range(Q.cfg.factors):
        st = _structure(Q, f)
        bad = None
        if st.free_rank:
            bad = st.rank
        elif st.d and max(st.d) > step:
            bad = max(range(st.rank), key=lambda i: st.d[i])
        if bad is not None:
            col = [[from_series(st.frame.u[r][bad], 0, Q.cfg)] for r in range(Q.gens)]
            per = [[] for _ in range(Q.cfg.factors)]
            per[f] = [[c[0] for c in col]]
            return False, assemble_vectors(Q.cfg, per, Q.gens)[0], Q
    return True, None, Q


def _verify_witness(Q: ModulePresentation, w, K: int) -> bool:
    """``T^{1/p^K}·w`` must stay outside the relation span."""
    rel = Lattice(Q.cfg, Q.gens, tuple(Q.columns)) if Q.columns else Lattice.zero(Q.cfg, Q.gens)
    try:
        return not membership(w, rel, Fraction(1, Q.cfg.p ** K))
    except NotInSpan:
        return True


def is_almost_zero(P: ModulePresentation, depth: int | None = None) -> Verdict:
    """Whether ``T^{1/p^K}`` kills ``P`` (``stable`` records the same test at ``K + 1``)."""
    K = P.cfg.k + 2 if depth is None else depth
    if K < 0:
        raise ValueError("depth must be nonnegative")
    if P.gens == 0:
        return Verdict(YES, K, P.cfg.N, stable=True)
    try:
        ok, w, Q = _annihilation(P, K)
        if not ok:
            if not _verify_witness(Q, w, K):
                raise AssertionError("almost-zero witness failed its membership re-check")
            return Verdict(NO, K, P.cfg.N, _render_vec(w), stable=True)
        ok2, _, _ = _annihilation(P, K + 1)
    except PrecisionLoss as exc:
        return Verdict(UNDECIDED, K, P.cfg.N, note=str(exc))
    return Verdict(YES, K, P.cfg.N, stable=ok2)


# ---------------------------------------------------------------------------
# lattice maps

@dataclass(frozen=True, eq=False)
class LatticeMap:
    """``x ↦ matrix · x`` from the span of ``source`` into the ambient module of ``target``."""

    source: Lattice
    target: Lattice
    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.matrix)
        if self.source.cfg != self.target.cfg:
            raise ConfigMismatch("source and target use different rings")
        if len(rows) != self.target.ambient_rank or any(len(r) != self.source.ambient_rank for r in rows):
            raise ConfigMismatch(f"matrix must be {self.target.ambient_rank} x {self.source.ambient_rank}")
        object.__setattr__(self, "matrix", rows)

    @property
    def cfg(self) -> RingConfig:
        return self.source.cfg

    def apply(self, x) -> tuple:
        out = []
        for row in self.matrix:
            acc = RingElement.zero(self.cfg)
            for a, b in zip(row, x):
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def images(self) -> tuple:
        return tuple(self.apply(g) for g in self.source.generators)

    def image_lattice(self) -> Lattice:
        return Lattice(self.cfg, self.target.ambient_rank, self.images())

    def check_well_defined(self):
        for g, img in zip(self.source.generators, self.images()):
            try:
                ok = membership(img, self.target, 0)
            except NotInSpan:
                ok = False
            if not ok:
                raise NotWellDefined(f"image of {_render_vec(g)} is not in the target lattice")

    def to_json(self) -> dict:
        src, tgt = self.source.to_json(), self.target.to_json()
        src.pop("cfg")
        tgt.pop("cfg")
        return {"cfg": self.cfg.to_json(), "source": src, "target": tgt,
                "matrix": [[render_element(x) for x in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, obj) -> "LatticeMap":
        if isinstance(obj, str):
            obj = json.loads(obj)
        cfg = obj["cfg"]
        src = Lattice.from_json({"cfg": cfg, **obj["source"]})
        tgt = Lattice.from_json({"cfg": cfg, **obj["target"]})
        mat = tuple(tuple(parse_element(s, src.cfg) for s in row) for row in obj["matrix"])
        return cls(src, tgt, mat)


def _saturated_map(f: LatticeMap) -> LatticeMap:
    if f.source.is_unit_ball_span and f.target.is_unit_ball_span:
        return f
    return LatticeMap(unitball_span(f.source), unitball_span(f.target), f.matrix)


def _matrix_series(M, f, cap):
    off = vector_offset(M, f)
    off = 0 if off is None else off
    return off, [[to_series(x, f, off, cap) for x in row] for row in M]


def map_kernel(f: LatticeMap) -> tuple:
    """Generators of ``ker(f) ⊆ A_{<=1}·source`` (empty tuple when injective)."""
    f = _saturated_map(f)
    cfg, S = f.cfg, f.source
    per_factor = []
    for fac in range(cfg.factors):
        frS = S._frames[fac]
        if not S.generators:
            per_factor.append([])
            continue
        cap = frS.cap
        offP, Phi = _matrix_series(f.matrix, fac, cap)
        PG = matmul(Phi, frS.matrix)
        sf = smith(PG, cfg.p, cap, want_u=False)
        cols = []
        for j in range(sf.rank, len(S.generators)):
            c = [sf.v[t][j] for t in range(len(S.generators))]
            vec = matvec(frS.matrix, c)
            if any(not e.is_zero() for e in vec):
                cols.append(column_to_parts(vec, frS.offset, cfg))
        per_factor.append(cols)
    return assemble_vectors(cfg, per_factor, S.ambient_rank)


def present_cokernel(f: LatticeMap) -> ModulePresentation:
    """Presentation of ``target / f(source)`` on the target's generators."""
    f.check_well_defined()
    f = _saturated_map(f)
    cfg, T = f.cfg, f.target
    m = len(T.generators)
    images = f.images()
    per_factor = []
    for fac in range(cfg.factors):
        fr = T._frames[fac]
        sf = fr.smith
        cols = []
        for j in range(sf.rank, m):
            cols.append([from_series(sf.v[i][j], 0, cfg) for i in range(m)])
        for x in images:
            xs = [to_series(xi, fac, fr.offset, fr.cap) for xi in x]
            y = matvec(sf.uinv, xs)
            z = [y[i].divide(sf.pivots[i]) for i in range(sf.rank)]
            z += [Series.zero(cfg.p, fr.cap) for _ in range(sf.rank, m)]
            c = matvec(sf.v, z) if m else []
            cols.append([from_series(e, 0, cfg) for e in c])
        per_factor.append(cols)
    columns = assemble_vectors(cfg, per_factor, m)
    if m == 0:
        return ModulePresentation(cfg, UNIT_BALL, 0, ())
    return ModulePresentation.from_columns(cfg, UNIT_BALL, m, columns)


def is_almost_iso(f: LatticeMap, depth: int | None = None) -> Verdict:
    K = f.cfg.k + 2 if depth is None else depth
    ker = map_kernel(f)
    if ker:
        return Verdict(NO, K, f.cfg.N, ("kernel",) + _render_vec(ker[0]), stable=True)
    v = is_almost_zero(present_cokernel(f), K)
    if v.outcome == NO:
        return Verdict(NO, K, f.cfg.N, ("cokernel",) + tuple(v.witness), stable=v.stable)
    return Verdict(v.outcome, K, f.cfg.N, None, v.stable, v.note)


def _fp_reduction_matrix(C, rs: int, rt: int, scale: int, p: int) -> np.ndarray:
    """F_p matrix of ``(A_{<=1}/T)^{rs} → (A_{<=1}/T)^{rt}`` for coefficient series ``C``."""
    M = np.zeros((rt * scale, rs * scale), dtype=np.int64)
    for i in range(rt):
        for j in range(rs):
            c = C[i][j]
            for a in range(scale):
                for a2 in range(a, scale):
                    M[i * scale + a2, j * scale + a] = c.coeff(a2 - a)
    return M % p


def isometry_check(f: LatticeMap) -> Verdict:
    """Isometry iff the reduction mod ``T`` of the map is injective."""
    f.check_well_defined()
    if map_kernel(f):
        raise NotInjective("the map has a nonzero kernel on the source lattice")
    f = _saturated_map(f)
    cfg, S, T = f.cfg, f.source, f.target
    for fac in range(cfg.factors):
        frS, frT = S._frames[fac], T._frames[fac]
        if frS.smith.rank == 0:
            continue
        cap = max(frS.cap, frT.cap)
        offP, Phi = _matrix_series(f.matrix, fac, cap)
        sS, sT = frS.smith, frT.smith
        basis = [[sS.u[i][j].shift(sS.d[j]) for i in range(S.ambient_rank)] for j in range(sS.rank)]
        C = [[None] * sS.rank for _ in range(sT.rank)]
        for j, b in enumerate(basis):
            img = [e.shift(offP + frS.offset - frT.offset) for e in matvec(Phi, b)]
            y = matvec(sT.uinv, img)
            for i in range(sT.rank):
                C[i][j] = y[i].divide(sT.pivots[i])
        M = _fp_reduction_matrix(C, sS.rank, sT.rank, cfg.scale, cfg.p)
        if _fp.rank(M, cfg.p) == sS.rank * cfg.scale:
            continue
        w = _fp.nullspace(M, cfg.p)[0]
        vec = [Series.zero(cfg.p, frS.cap) for _ in range(S.ambient_rank)]
        for j in range(sS.rank):
            for a in range(cfg.scale):
                if w[j * cfg.scale + a]:
                    vec = [v + e.shift(a) * int(w[j * cfg.scale + a]) for v, e in zip(vec, basis[j])]
        per = [[] for _ in range(cfg.factors)]
        per[fac] = [column_to_parts(vec, frS.offset, cfg)]
        x = assemble_vectors(cfg, per, S.ambient_rank)[0]
        gs, gt = gauge_exponent(x, S), gauge_exponent(f.apply(x), T)
        if not (gs < 1 <= gt):
            raise AssertionError(f"isometry witness does not drop the gauge ({gs} -> {gt})")
        return Verdict(NO, cfg.k, cfg.N, _render_vec(x))
    return Verdict(YES, cfg.k, cfg.N)


def gauge_preservation_failures(f: LatticeMap, samples) -> list:
    """Samples ``x`` whose source gauge differs from the target gauge of ``f(x)``."""
    out = []
    for x in samples:
        a, b = gauge(x, f.source), gauge(f.apply(x), f.target)
        if a != b:
            out.append((_render_vec(x), str(a), str(b)))
    return out


# ---------------------------------------------------------------------------
# strictness and comparison constants

@dataclass
class StrictnessReport:
    m_tor: object
    m_est: Fraction
    estimate_holds: bool
    slack: dict
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.estimate_holds and all(self.slack.values())


def _saturation_depth(target: Lattice, img: Lattice) -> Fraction:
    """``h`` with ``T^h (target ∩ img[1/T]) ⊆ img``.

    ``target ⊆ T^o A^n`` and the Smith frame of ``img`` is unimodular, so
    frame coordinates of such an element have valuation ``>= o`` and
    ``h = max d_i - o`` suffices.
    """
    cfg = target.cfg
    h = Fraction(0)
    for f in range(cfg.factors):
        o = vector_offset(target.generators, f)
        d = img.smith_invariants(f)
        if o is None or not d:
            continue
        h = max(h, max(d) - Fraction(o, cfg.scale))
    return h + Fraction(1, cfg.scale)


def strictness_bounds(f: LatticeMap, samples: Sequence = ()) -> StrictnessReport:
    """Cokernel torsion exponent versus the quotient-norm estimate exponent."""
    f = _saturated_map(f)
    cfg = f.cfg
    m_tor = torsion_exponent(present_cokernel(f))
    img = f.image_lattice()
    sat = lattice_intersection(f.target, img, -_saturation_depth(f.target, img)) if img.generators \
        else Lattice.zero(cfg, f.target.ambient_rank)
    m_est = Fraction(0)
    for g in sat.generators:
        s = gauge_exponent(g, img)
        if s is not None:
            m_est = max(m_est, -s)
    violations = []
    for y in samples:
        fy = f.apply(y)
        if all(x.is_zero() for x in fy):
            continue
        s_t, s_i = gauge_exponent(fy, f.target), gauge_exponent(fy, img)
        if s_t - s_i > m_tor:
            violations.append((_render_vec(y), str(s_t), str(s_i)))
    slack = {n: m_tor <= m_est + Fraction(2, cfg.p ** n) for n in range(cfg.k + 1)}
    return StrictnessReport(m_tor, m_est, not violations, slack, violations)


@dataclass
class ComparisonBound:
    C: NormValue
    m: Fraction
    checked: int = 0
    violations: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.C, self.m))


def seminorm_comparison_bound(L1: Lattice, L2: Lattice, samples: Sequence = ()) -> ComparisonBound:
    """Least ``m >= 0`` with ``T^m L1 ⊆ L2``; checks ``gauge_2 <= 2^{2m} gauge_1`` on samples."""
    if L1.cfg != L2.cfg or L1.ambient_rank != L2.ambient_rank:
        raise NotCommensurable("lattices live in different ambient modules")
    m = Fraction(0)
    for g in L1.generators:
        try:
            s = gauge_exponent(g, L2)
        except NotInSpan:
            raise NotCommensurable(f"generator {_render_vec(g)} is not in L2[1/T]") from None
        if s is not None:
            m = max(m, -s)
    for g in L2.generators:
        try:
            gauge(g, L1)
        except NotInSpan:
            raise NotCommensurable(f"generator {_render_vec(g)} is not in L1[1/T]") from None
    if m > L1.cfg.N:
        raise NotCommensurable(f"no m <= N={L1.cfg.N} works (need {m})")
    out = ComparisonBound(NormValue.exact(-2 * m), m)
    for x in samples:
        out.checked += 1
        a, b = gauge(x, L1), gauge(x, L2)
        if a.is_zero:
            if not b.is_zero:
                out.violations.append((_render_vec(x), str(a), str(b)))
            continue
        if b.is_exact and b.exponent < a.exponent - 2 * m:
            out.violations.append((_render_vec(x), str(a), str(b)))
    return out
