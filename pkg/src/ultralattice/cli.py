"""Command-line entry point ``ultralattice``.

Exit status: 0 success, 1 a verification check failed, 2 usage or input
error, 3 the answer is undecidable at the working precision.
"""
from __future__ import annotations

import json
import sys
import warnings
from pathlib import Path

import click

from . import __version__
from .almostmod import UNDECIDED, LatticeMap, is_almost_iso, isometry_check
from .errors import NoStabilization, PrecisionError, UltraLatticeError
from .harness import SuiteConfig, run_suite
from .lattice import Lattice, almost_elements_certified, gauge
from .ring import RingConfig, elt_norm, parse_element, render_element
from .tensor import tensor_lattices, tensor_unit_ball
from .valnorm import render

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3

DEFAULT_CFG = {"p": 2, "k": 0, "N": 16, "factors": 1}


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _cfg_options(f):
    f = click.option("--factors", type=int, default=None, help="Number of product factors.")(f)
    f = click.option("--N", "N", type=int, default=None, help="Precision: exponents stay below N.")(f)
    f = click.option("--k", type=int, default=None, help="Root depth: exponents in (1/p^k)Z.")(f)
    f = click.option("--p", type=int, default=None, help="Characteristic.")(f)
    return f


def _format_option(f):
    return click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table",
                        show_default=True)(f)


def _resolve_cfg(file_cfg: dict | None, p, k, N, factors) -> RingConfig:
    """Flags override file values, which override the defaults."""
    merged = dict(DEFAULT_CFG)
    if file_cfg:
        merged.update(file_cfg)
    for key, val in (("p", p), ("k", k), ("N", N), ("factors", factors)):
        if val is not None:
            merged[key] = val
    if file_cfg and N is not None and "floor" in merged and merged["floor"] == -int(file_cfg.get("N", N)):
        merged.pop("floor")
    return RingConfig.from_json(merged)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise _Fail(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_USAGE, f"{path} is not valid JSON: {exc}") from None


def _load_lattice(path, p, k, N, factors) -> Lattice:
    obj = _load_json(path)
    cfg = _resolve_cfg(obj.get("cfg"), p, k, N, factors)
    return Lattice.from_json({**obj, "cfg": cfg.to_json()})


def _load_map(path, p, k, N, factors) -> LatticeMap:
    obj = _load_json(path)
    cfg = _resolve_cfg(obj.get("cfg"), p, k, N, factors)
    return LatticeMap.from_json({**obj, "cfg": cfg.to_json()})


def _header(cfg: RingConfig) -> str:
    return "# " + " ".join(f"{k}={v}" for k, v in cfg.to_json().items())


def _emit(fmt: str, cfg: RingConfig | None, payload: dict, lines: list):
    if fmt == "json":
        out = dict(payload)
        if cfg is not None:
            out = {"cfg": cfg.to_json(), **out}
        click.echo(json.dumps(out, sort_keys=True))
        return
    if cfg is not None:
        click.echo(_header(cfg), err=True)
    for line in lines:
        click.echo(line)


def _run(fn):
    """Map library errors onto the exit-status contract."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NoStabilization)
            code = fn()
    except _Fail as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except PrecisionError as exc:
        click.echo(f"undecidable at this precision: {exc}", err=True)
        sys.exit(EXIT_UNDECIDED)
    except (UltraLatticeError, ValueError, KeyError, TypeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    sys.exit(code or EXIT_OK)


def _split_vector(text: str) -> list:
    text = text.strip()
    if text.startswith("["):
        return [str(x) for x in json.loads(text)]
    return [s.strip() for s in text.split(",")]


@click.group()
@click.version_option(__version__, prog_name="ultralattice")
def main():
    """Exact norms, gauges and almost-mathematics computations in a truncated perfectoid model."""


@main.command()
@click.argument("element")
@_cfg_options
@_format_option
def norm(element, p, k, N, factors, fmt):
    """Norm of ELEMENT, e.g. "T^(3/2)+T^2"."""
    def go():
        cfg = _resolve_cfg(None, p, k, N, factors)
        x = parse_element(element, cfg)
        v = elt_norm(x)
        _emit(fmt, cfg, {"element": render_element(x), "norm": render(v)}, [render(v)])
    _run(go)


@main.command(name="gauge")
@click.argument("lattice_file", metavar="LATTICE.json")
@click.argument("vector")
@_cfg_options
@_format_option
def gauge_cmd(lattice_file, vector, p, k, N, factors, fmt):
    """Gauge of VECTOR (comma separated entries or a JSON list) against a lattice."""
    def go():
        L = _load_lattice(lattice_file, p, k, N, factors)
        items = _split_vector(vector)
        if len(items) == 1 and L.ambient_rank > 1 and items[0] == "0":
            items = ["0"] * L.ambient_rank
        x = tuple(parse_element(s, L.cfg) for s in items)
        v = gauge(x, L)
        _emit(fmt, L.cfg, {"vector": [render_element(e) for e in x], "gauge": render(v)}, [render(v)])
    _run(go)


@main.command(name="almost-elements")
@click.argument("lattice_file", metavar="LATTICE.json")
@click.option("--depth", type=int, default=None, help="Depth K (default k + 2).")
@_cfg_options
@_format_option
def almost_elements_cmd(lattice_file, depth, p, k, N, factors, fmt):
    """Module of almost elements of a lattice, with a stabilization certificate."""
    def go():
        L = _load_lattice(lattice_file, p, k, N, factors)
        res, cert = almost_elements_certified(L, depth)
        obj = res.to_json()
        obj["stable"] = cert.stable
        lines = [f"depth {cert.depth} (stable against {cert.compared_depth}: {'yes' if cert.stable else 'no'})"]
        lines += ["  " + ", ".join(render_element(x) for x in g) for g in res.generators]
        _emit(fmt, None, obj, lines)
    _run(go)


def _verdict_out(v, fmt, cfg):
    lines = [v.outcome]
    if v.witness is not None:
        lines.append("witness: " + ", ".join(v.witness))
    if v.stable is not None:
        lines.append(f"stable: {'yes' if v.stable else 'no'}")
    _emit(fmt, cfg, v.to_json(), lines)
    return EXIT_UNDECIDED if v.outcome == UNDECIDED else EXIT_OK


@main.command(name="almost-iso")
@click.argument("map_file", metavar="MAP.json")
@click.option("--depth", type=int, default=None, help="Depth K (default k + 2).")
@_cfg_options
@_format_option
def almost_iso_cmd(map_file, depth, p, k, N, factors, fmt):
    """Decide whether a lattice map is an almost isomorphism."""
    def go():
        f = _load_map(map_file, p, k, N, factors)
        f.check_well_defined()
        return _verdict_out(is_almost_iso(f, depth), fmt, f.cfg)
    _run(go)


@main.command()
@click.argument("map_file", metavar="MAP.json")
@_cfg_options
@_format_option
def isometry(map_file, p, k, N, factors, fmt):
    """Decide whether an injective lattice map preserves gauges."""
    def go():
        f = _load_map(map_file, p, k, N, factors)
        return _verdict_out(isometry_check(f), fmt, f.cfg)
    _run(go)


@main.command()
@click.argument("first", metavar="L1.json")
@click.argument("second", metavar="L2.json")
@click.option("--unit-ball", is_flag=True, help="Print the almost elements of the torsion-free part.")
@click.option("--depth", type=int, default=None)
@_cfg_options
@_format_option
def tensor(first, second, unit_ball, depth, p, k, N, factors, fmt):
    """Tensor product of two lattices: torsion and torsion-free part."""
    def go():
        L1 = _load_lattice(first, p, k, N, factors)
        L2 = _load_lattice(second, p, k, N, factors)
        if unit_ball:
            B = tensor_unit_ball(L1, L2, depth)
            obj = B.to_json()
            lines = ["  " + ", ".join(render_element(x) for x in g) for g in B.generators]
            _emit(fmt, None, obj, [f"unit ball at depth {B.depth}"] + lines)
            return
        res = tensor_lattices(L1, L2)
        obj = res.to_json()
        lines = [f"torsion generators: {res.torsion.gens}"]
        lines += ["  " + ", ".join(render_element(x) for x in v) for v in (res.torsion.lifts or ())]
        lines.append("torsion-free part:")
        lines += ["  " + ", ".join(render_element(x) for x in g) for g in res.torsion_free_part.generators]
        _emit(fmt, L1.cfg, obj, lines)
    _run(go)


@main.command()
@click.option("--seed", type=int, default=None, help="Suite seed (default 1).")
@click.option("--suite", "suite_file", type=str, default=None, help="SuiteConfig JSON file.")
@click.option("--depth", type=int, default=None)
@_cfg_options
@_format_option
def verify(seed, suite_file, depth, p, k, N, factors, fmt):
    """Run the randomized verification suite."""
    def go():
        obj = _load_json(suite_file) if suite_file else {}
        if seed is not None:
            obj["seed"] = seed
        if depth is not None:
            obj["depth"] = depth
        if N is not None:
            obj["N"] = N
        if k is not None:
            obj["k_max"] = k
        if p is not None:
            obj["p_values"] = [p]
        report = run_suite(SuiteConfig.from_json(obj))
        if fmt == "json":
            click.echo(json.dumps(report.to_json(timings=False), sort_keys=True))
        else:
            click.echo(f"# seed={report.config.seed} N={report.config.N} k_max={report.config.k_max}")
            click.echo(report.table(timings=False))
        click.echo(f"# {report.seconds:.2f}s", err=True)
        return EXIT_OK if report.ok else EXIT_CHECK
    _run(go)


if __name__ == "__main__":
    main()
