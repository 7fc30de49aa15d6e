"""CLI behaviour and golden outputs.

Golden files live in tests/golden/<case>.out; regenerate them with
ULTRALATTICE_UPDATE_GOLDEN=1 after checking the new output by hand.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import pytest
from click.testing import CliRunner

from ultralattice.almostmod import Verdict
from ultralattice.cli import main
from ultralattice.lattice import Lattice

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("ULTRALATTICE_UPDATE_GOLDEN") == "1"

CASES = {
    "norm_example": (["norm", "T^(3/2)+T^2", "--p", "2", "--k", "1", "--N", "16"], 0),
    "norm_json": (["norm", "1 + T^(1/3)", "--p", "3", "--k", "1", "--format", "json"], 0),
    "gauge_half": (["gauge", "half.json", "1"], 0),
    "gauge_zero": (["gauge", "half.json", "0"], 0),
    "gauge_plane_json": (["gauge", "plane.json", "1,1", "--format", "json"], 0),
    "almost_elements": (["almost-elements", "half.json", "--depth", "2"], 0),
    "almost_iso_k2": (["almost-iso", "incl_quarter.json", "--depth", "2"], 0),
    "almost_iso_k3_json": (["almost-iso", "incl_quarter.json", "--depth", "3", "--format", "json"], 0),
    "isometry_times_t": (["isometry", "times_t.json"], 0),
    "tensor_semigroup": (["tensor", "semigroup.json", "semigroup.json"], 0),
    "tensor_unit_ball_json": (["tensor", "half.json", "half.json", "--unit-ball", "--depth", "1",
                               "--format", "json"], 0),
}


def invoke(args):
    runner = CliRunner()
    old = os.getcwd()
    os.chdir(GOLDEN)
    try:
        return runner.invoke(main, args)
    finally:
        os.chdir(old)


@pytest.mark.parametrize("case", sorted(CASES))
def test_golden(case):
    args, code = CASES[case]
    res = invoke(args)
    assert res.exit_code == code, res.output
    path = GOLDEN / f"{case}.out"
    if UPDATE:
        path.write_text(res.stdout)
    assert res.stdout == path.read_text()


def test_norm_prints_bare_value():
    res = invoke(["norm", "T^(3/2)+T^2", "--p", "2", "--k", "1", "--N", "16"])
    assert res.stdout == "2^-(3/2)\n"
    assert "p=2 k=1 N=16" in res.stderr


def test_gauge_zero_vector():
    assert invoke(["gauge", "plane.json", "0"]).stdout == "0\n"


@pytest.mark.parametrize("args", [
    ["norm", "1+"],
    ["norm", "T^(1/3)", "--p", "2", "--k", "2"],
    ["frobnicate"],
    ["gauge", "missing.json", "1"],
    ["almost-iso", "bad_map.json"],
    ["norm", "T", "--format", "xml"],
])
def test_usage_errors_exit_2(args):
    res = invoke(args)
    assert res.exit_code == 2


@pytest.mark.parametrize("args", [
    ["norm", "T^9", "--N", "8"],
    ["gauge", "plane.json", "T^20,0"],
])
def test_precision_exit_3(args):
    res = invoke(args)
    assert res.exit_code == 3
    assert "undecidable" in res.stderr


def test_flags_override_file_config():
    res = invoke(["gauge", "half.json", "1", "--N", "12", "--format", "json"])
    assert json.loads(res.stdout)["cfg"]["N"] == 12


def test_verify_failure_exits_1(tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"default_count": 2, "checks": ["a"], "corrupt": "a"}))
    res = CliRunner().invoke(main, ["verify", "--suite", str(suite)])
    assert res.exit_code == 1
    assert "FAIL" in res.stdout


def test_verify_json_round_trips(tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"default_count": 1, "checks": ["a", "c"]}))
    res = CliRunner().invoke(main, ["verify", "--suite", str(suite), "--seed", "4", "--format", "json"])
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["ok"] and out["config"]["seed"] == 4
    again = CliRunner().invoke(main, ["verify", "--suite", str(suite), "--seed", "4", "--format", "json"])
    assert again.stdout == res.stdout


def test_json_outputs_parse_back():
    res = invoke(["almost-iso", "incl_quarter.json", "--depth", "3", "--format", "json"])
    obj = json.loads(res.stdout)
    obj.pop("cfg")
    assert Verdict.from_json(obj).outcome == "no"
    res = invoke(["tensor", "half.json", "half.json", "--unit-ball", "--depth", "1", "--format", "json"])
    L = Lattice.from_json(res.stdout)
    assert L.depth == 1 and [[str(x) for x in g] for g in L.generators] == [["T"]]
