"""Seeded random instances and the verification suite.

Every check draws its instances from its own ``random.Random`` stream,
seeded by ``(seed, check name)``, so a report is reproducible check by
check.  A failing instance is recorded with a bundle that carries the ring
configuration and the serialized inputs.
"""
from __future__ import annotations

import json
import random
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .almostmod import (NO, YES, LatticeMap, gauge_preservation_failures, isometry_check,
                        seminorm_comparison_bound, strictness_bounds)
from .errors import NoStabilization, NotInjective, NotInSpan, NotWellDefined, PrecisionError
from .lattice import (UNIT_BALL, Lattice, MonomialSubring, almost_elements, base_change_lattice,
                      base_change_vector, contains_lattice, discrete_norm_infimum, gauge,
                      lattice_equal, membership, subring_gauge_checks)
from .ring import RingConfig, RingElement, elt_norm, parse_vector, render_element
from .tensor import tensor_gauge, tensor_lattices, tensor_norm_oracle, tensor_unit_ball
from .valnorm import ONE, nv_compare, nv_max, nv_mul

CHECK_NAMES = tuple("abcdefghijk")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 1
    p_values: tuple = (2, 3)
    k_max: int = 2
    N: int = 8
    rank_max: int = 3
    counts: dict = field(default_factory=dict)
    default_count: int = 20
    samples: int = 6
    depth: int | None = None
    undecided_threshold: int = 0
    corrupt: str | None = None
    checks: tuple = CHECK_NAMES

    def count(self, name: str) -> int:
        return int(self.counts.get(name, self.default_count))

    def to_json(self) -> dict:
        return {"seed": self.seed, "p_values": list(self.p_values), "k_max": self.k_max, "N": self.N,
                "rank_max": self.rank_max, "counts": dict(self.counts), "default_count": self.default_count,
                "samples": self.samples, "depth": self.depth,
                "undecided_threshold": self.undecided_threshold, "corrupt": self.corrupt,
                "checks": list(self.checks)}

    @classmethod
    def from_json(cls, obj) -> "SuiteConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        kw = dict(obj)
        for key in ("p_values", "checks"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return cls(**kw)


@dataclass
class CheckResult:
    name: str
    anchor: str
    passed: int = 0
    failed: int = 0
    undecided: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "passed": self.passed, "failed": self.failed,
                "undecided": self.undecided, "skipped": self.skipped, "failures": self.failures,
                "seconds": round(self.seconds, 3)}


@dataclass
class SuiteReport:
    config: SuiteConfig
    checks: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def undecided(self) -> int:
        return sum(c.undecided for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.undecided <= self.config.undecided_threshold

    def to_json(self, timings: bool = True) -> dict:
        rows = []
        for c in self.checks:
            row = c.to_json()
            if not timings:
                row.pop("seconds")
            rows.append(row)
        return {"config": self.config.to_json(), "ok": self.ok, "failed": self.failed,
                "undecided": self.undecided, "checks": rows}

    def table(self, timings: bool = True) -> str:
        head = f"{'check':<6}{'pass':>6}{'fail':>6}{'undec':>7}{'skip':>6}" + (f"{'secs':>8}" if timings else "")
        head += "  anchor"
        lines = [head, "-" * len(head)]
        for c in self.checks:
            secs = f"{c.seconds:>8.2f}" if timings else ""
            lines.append(f"{c.name:<6}{c.passed:>6}{c.failed:>6}{c.undecided:>7}{c.skipped:>6}{secs}  {c.anchor}")
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'} (failed={self.failed}, undecided={self.undecided})")
        return "\n".join(lines)

    @property
    def seconds(self) -> float:
        return sum(c.seconds for c in self.checks)


# ---------------------------------------------------------------------------
# random instances

def random_config(rng: random.Random, sc: SuiteConfig, factors: int = 1) -> RingConfig:
    return RingConfig(rng.choice(sc.p_values), rng.randint(0, sc.k_max), sc.N, factors)


def random_element(rng: random.Random, cfg: RingConfig, support: int = 3, lo=-1, hi=2) -> RingElement:
    """Up to ``support`` grid monomials with exponents in ``[lo, hi)`` in each factor."""
    parts = []
    a, b = cfg.grid(lo), cfg.grid(hi)
    for _ in range(cfg.factors):
        d = {}
        for _ in range(rng.randint(1, support)):
            d[rng.randrange(a, b)] = rng.randrange(1, cfg.p)
        parts.append(d)
    return RingElement.from_parts(cfg, parts)


def random_vector(rng, cfg, n, support=3, lo=-1, hi=2, density=0.7) -> tuple:
    vec = [random_element(rng, cfg, support, lo, hi) if rng.random() < density else RingElement.zero(cfg)
           for _ in range(n)]
    if all(x.is_zero() for x in vec):
        vec[rng.randrange(n)] = random_element(rng, cfg, support, lo, hi)
    return tuple(vec)


def gen_random_lattice(rng: random.Random, cfg: RingConfig, rank: int, gen_count: int, support: int = 3,
                       lo=-1, hi=2) -> Lattice:
    """``gen_count`` random generators in ``A^rank`` with entries of at most ``support`` monomials."""
    if not (1 <= rank <= 4 and 0 <= gen_count <= 4 and 1 <= support <= 6):
        raise ValueError("need rank in [1, 4], gen_count in [0, 4], support in [1, 6]")
    gens = tuple(random_vector(rng, cfg, rank, support, lo, hi) for _ in range(gen_count))
    return Lattice(cfg, rank, gens)


def random_open_lattice(rng, cfg, rank, extra=None, support=2) -> Lattice:
    """Random generators plus ``T^{c_i} e_i`` for every coordinate, so the span is open."""
    extra = rng.randint(0, 2) if extra is None else extra
    base = gen_random_lattice(rng, cfg, rank, extra, support)
    diag = []
    for i in range(rank):
        c = Fraction(rng.randrange(cfg.grid(-1), cfg.grid(2)), cfg.scale)
        diag.append(tuple(RingElement.monomial(cfg, c) if j == i else RingElement.zero(cfg) for j in range(rank)))
    return Lattice(cfg, rank, base.generators + tuple(diag))


def random_monomial_lattice(rng, cfg, rank, lo=0, hi=2) -> Lattice:
    gens = []
    for i in range(rank):
        for _ in range(rng.randint(1, 2)):
            c = Fraction(rng.randrange(cfg.grid(lo), cfg.grid(hi)), cfg.scale)
            gens.append(tuple(RingElement.monomial(cfg, c) if j == i else RingElement.zero(cfg) for j in range(rank)))
    return Lattice(cfg, rank, tuple(gens))


def span_samples(rng, L: Lattice, count: int, lo=-1, hi=2) -> list:
    """Random ``A``-combinations of the generators of ``L``."""
    cfg = L.cfg
    out = []
    for _ in range(count):
        acc = [RingElement.zero(cfg) for _ in range(L.ambient_rank)]
        for g in L.generators:
            if rng.random() < 0.6:
                c = random_element(rng, cfg, 2, lo, hi)
                acc = [a + c * x for a, x in zip(acc, g)]
        out.append(tuple(acc))
    return out


def _vec_json(v) -> list:
    return [render_element(x) for x in v]


# ---------------------------------------------------------------------------
# checks; each returns True (pass), False (fail) or None (skip) and a payload

def _check_a(rng, sc):
    cfg = random_config(rng, sc, rng.choice((1, 1, 2)))
    n = rng.randint(1, sc.rank_max)
    x = random_vector(rng, cfg, n)
    g = gauge(x, Lattice.unit_ball(cfg, n))
    want = nv_max(elt_norm(xi) for xi in x)
    return g == want, {"cfg": cfg.to_json(), "x": _vec_json(x), "gauge": str(g), "norm": str(want)}


def _check_b(rng, sc):
    cfg = random_config(rng, sc)
    L = random_open_lattice(rng, cfg, rng.randint(1, sc.rank_max))
    K = sc.depth if sc.depth is not None else cfg.k + 1
    P = almost_elements(L, K)
    PP = almost_elements(P, K)
    bad = []
    if not lattice_equal(P, PP):
        bad.append("not idempotent")
    for x in span_samples(rng, L, sc.samples):
        xK = base_change_vector(x, K)
        if gauge(x, L) != gauge(xK, P):
            bad.append(f"gauge changed at {_vec_json(x)}")
    for g in P.generators:
        if nv_compare(gauge(g, P), ONE) > 0:
            bad.append(f"generator {_vec_json(g)} has gauge above 1")
    return not bad, {"lattice": L.to_json(), "depth": K, "problems": bad}


def _check_c(rng, sc):
    K = 3
    p = rng.choice(sc.p_values)
    if rng.random() < 0.5:
        cfg = RingConfig(p, 0, sc.N)
        L = Lattice.unit_ball(cfg, 1)
        label = "level-0 polynomials"
    else:
        cfg = RingConfig(p, rng.randint(0, sc.k_max), sc.N)
        L = Lattice(cfg, 1, ((RingElement.one(cfg),),), MonomialSubring.conductor_ring(cfg, 1))
        label = "F_p + T A"
    P = almost_elements(L, K)
    target = Lattice.unit_ball(cfg.with_level(K), 1)
    return lattice_equal(P, target), {"ring": label, "cfg": cfg.to_json(), "result": P.to_json()}


def _check_d(rng, sc):
    cfg = random_config(rng, sc)
    L = random_open_lattice(rng, cfg, rng.randint(1, sc.rank_max))
    K = sc.depth if sc.depth is not None else cfg.k + 1
    P = almost_elements(L, K)
    bad = []
    if not contains_lattice(P, base_change_lattice(L, K)):
        bad.append("L is not inside its almost elements")
    samples = span_samples(rng, L, sc.samples) + [tuple(x * RingElement.monomial(cfg, Fraction(-1, cfg.scale))
                                                       for x in g) for g in L.generators]
    for x in samples:
        in_ball = nv_compare(gauge(x, L), ONE) <= 0
        if in_ball != membership(base_change_vector(x, K), P, 0):
            bad.append(f"ball/almost mismatch at {_vec_json(x)}")
    return not bad, {"lattice": L.to_json(), "depth": K, "problems": bad}


def _random_map(rng, sc, cfg, into_target=True):
    ns = rng.randint(1, sc.rank_max)
    nt = rng.randint(ns, sc.rank_max)
    S = random_open_lattice(rng, cfg, ns, extra=rng.randint(0, 1))
    mat = tuple(random_vector(rng, cfg, ns, 2, 0, 2, density=0.6) for _ in range(nt))
    f0 = LatticeMap(S, Lattice.unit_ball(cfg, nt), mat)
    imgs = f0.images()
    if into_target:
        extra = gen_random_lattice(rng, cfg, nt, rng.randint(0, 2), 2, 0, 2).generators
        diag = tuple(tuple(RingElement.monomial(cfg, Fraction(rng.randrange(0, cfg.grid(2)), cfg.scale))
                           if j == i else RingElement.zero(cfg) for j in range(nt)) for i in range(nt))
        T = Lattice(cfg, nt, imgs + extra + diag)
    else:
        T = random_open_lattice(rng, cfg, nt)
    return LatticeMap(S, T, mat)


def _check_e(rng, sc):
    cfg = random_config(rng, sc)
    f = _random_map(rng, sc, cfg)
    try:
        v = isometry_check(f)
    except NotInjective:
        return None, {}
    samples = span_samples(rng, f.source, sc.samples) + list(f.source.generators)
    fails = gauge_preservation_failures(f, samples)
    payload = {"map": f.to_json(), "verdict": v.to_json(), "sample_failures": fails}
    if v.outcome == YES:
        return not fails, payload
    # a "no" carries a witness whose gauge must visibly drop under f
    w = parse_vector(list(v.witness), cfg)
    return bool(gauge_preservation_failures(f, [w])), payload


def _check_f(rng, sc):
    cfg = random_config(rng, sc)
    f = _random_map(rng, sc, cfg)
    rep = strictness_bounds(f, span_samples(rng, f.source, sc.samples))
    slack_ok = rep.m_tor <= rep.m_est + Fraction(2, cfg.scale)
    return rep.passed and slack_ok, {"map": f.to_json(), "m_tor": str(rep.m_tor), "m_est": str(rep.m_est),
                                     "violations": rep.violations}


def _check_g(rng, sc):
    p = rng.choice(sc.p_values)
    cfg = RingConfig(p, rng.randint(0, min(sc.k_max, 1)), sc.N)
    L1 = random_monomial_lattice(rng, cfg, rng.randint(1, 2))
    L2 = random_monomial_lattice(rng, cfg, rng.randint(1, 2))
    n = L1.ambient_rank * L2.ambient_rank
    res = tensor_lattices(L1, L2)
    ball = tensor_unit_ball(L1, L2, cfg.k + 1)
    bad = []
    if not lattice_equal(ball, almost_elements(res.torsion_free_part, cfg.k + 1)):
        bad.append("unit ball differs from almost elements of the torsion-free part")
    for _ in range(sc.samples):
        x = random_vector(rng, cfg, n, 1, -1, 3, density=0.5)
        while sum(len(xi.parts[0]) for xi in x) > 3:
            x = random_vector(rng, cfg, n, 1, -1, 3, density=0.5)
        tg, og = tensor_gauge(x, L1, L2), tensor_norm_oracle(x, L1, L2, 3)
        if tg != og:
            bad.append(f"tensor gauge {tg} vs oracle {og} at {_vec_json(x)}")
        if (nv_compare(og, ONE) <= 0) != membership(base_change_vector(x, cfg.k + 1), ball, 0):
            bad.append(f"unit-ball formula fails at {_vec_json(x)}")
    return not bad, {"L1": L1.to_json(), "L2": L2.to_json(), "problems": bad}


def _check_h(rng, sc):
    cfg = random_config(rng, sc)
    L = random_open_lattice(rng, cfg, rng.randint(1, sc.rank_max))
    bad = []
    for x in span_samples(rng, L, sc.samples):
        a, b = gauge(x, L), discrete_norm_infimum(x, L)
        if a != b:
            bad.append((_vec_json(x), str(a), str(b)))
    return not bad, {"lattice": L.to_json(), "mismatches": bad}


def _check_i(rng, sc):
    cfg = random_config(rng, sc)
    f = _random_map(rng, sc, cfg, into_target=rng.random() < 0.5)
    contained = contains_lattice(f.target, f.image_lattice())
    samples = list(f.source.generators) + span_samples(rng, f.source, sc.samples)
    nonincreasing = all(nv_compare(gauge(f.apply(x), f.target), gauge(x, f.source)) <= 0 for x in samples)
    return contained == nonincreasing, {"map": f.to_json(), "contained": contained,
                                        "nonincreasing": nonincreasing}


def _check_j(rng, sc):
    cfg = random_config(rng, sc, rng.choice((1, 2)))
    kind = rng.choice(("unit", "shifted"))
    if kind == "unit":
        B0 = Lattice.unit_ball(cfg, 1)
    else:
        s = Fraction(rng.randrange(0, cfg.grid(1) + 1), cfg.scale)
        B0 = Lattice(cfg, 1, ((RingElement.monomial(cfg, s),),))
    samples = [random_element(rng, cfg, 3, 0, 2) for _ in range(sc.samples)]
    rep = subring_gauge_checks(B0, samples)
    return rep.passed, {"subring": B0.to_json(), "failures": rep.failures}


def _check_k(rng, sc):
    cfg = random_config(rng, sc)
    n = rng.randint(1, sc.rank_max)
    L1, L2 = random_open_lattice(rng, cfg, n), random_open_lattice(rng, cfg, n)
    samples = span_samples(rng, L1, sc.samples) + span_samples(rng, L2, sc.samples)
    b = seminorm_comparison_bound(L1, L2, samples)
    bad = list(b.violations)
    # the constant is the least one: T^m L1 ⊆ L2 but not T^{m - step} L1
    if not all(membership(g, L2, -b.m) for g in L1.generators):
        bad.append("T^m L1 is not inside L2")
    step = Fraction(1, cfg.scale)
    if b.m > 0 and all(membership(g, L2, step - b.m) for g in L1.generators):
        bad.append("m is not minimal")
    return not bad, {"L1": L1.to_json(), "L2": L2.to_json(), "m": str(b.m), "problems": bad}


REGISTRY: dict = {
    "a": ("norm of a free module equals the gauge of its unit ball", _check_a),
    "b": ("almost elements are idempotent and keep the gauge", _check_b),
    "c": ("almost elements of an open subring give the unit ball", _check_c),
    "d": ("closed unit ball of the gauge equals the almost elements", _check_d),
    "e": ("isometry iff injective reduction mod T", _check_e),
    "f": ("bounded cokernel torsion iff norm estimate, with 2/p^n slack", _check_f),
    "g": ("tensor gauge equals the tensor seminorm; unit ball of the tensor product", _check_g),
    "h": ("gauge equals the infimum of the discrete T^(1/p^n)-adic norms", _check_h),
    "i": ("submetric iff the unit ball maps into the unit ball", _check_i),
    "j": ("gauges of subrings are ring seminorms, power-multiplicative on the unit ball", _check_j),
    "k": ("comparison constant between commensurable lattices", _check_k),
}


def _run_check(name: str, sc: SuiteConfig) -> CheckResult:
    anchor, fn = REGISTRY[name]
    res = CheckResult(name, anchor)
    rng = random.Random(f"{sc.seed}:{name}")
    t0 = time.perf_counter()
    for i in range(sc.count(name)):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NoStabilization)
                ok, payload = fn(rng, sc)
        except PrecisionError as exc:
            res.undecided += 1
            res.failures.append({"check": name, "seed": sc.seed, "instance": i, "undecided": str(exc)})
            continue
        except (NotInSpan, NotWellDefined) as exc:
            res.skipped += 1
            continue
        if ok is None:
            res.skipped += 1
            continue
        if sc.corrupt == name:
            ok = not ok
        if ok:
            res.passed += 1
        else:
            res.failed += 1
            res.failures.append({"check": name, "seed": sc.seed, "instance": i, "inputs": payload})
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(sc: SuiteConfig) -> SuiteReport:
    report = SuiteReport(sc)
    for name in sc.checks:
        if name not in REGISTRY:
            raise ValueError(f"unknown check {name!r}")
        report.checks.append(_run_check(name, sc))
    return report
