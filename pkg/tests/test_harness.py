import random

import pytest

from ultralattice.harness import REGISTRY, SuiteConfig, gen_random_lattice, run_suite
from ultralattice.ring import RingConfig

CFG = RingConfig(3, 1, 8)


def small(**kw):
    return SuiteConfig(default_count=3, samples=3, **kw)


def test_counts_zero_is_vacuous_pass():
    rep = run_suite(SuiteConfig(default_count=0))
    assert rep.ok and rep.failed == 0 and rep.undecided == 0
    assert all(c.passed == 0 for c in rep.checks)
    assert len(rep.checks) == len(REGISTRY)


def test_report_is_deterministic():
    a = run_suite(small(seed=5)).to_json(timings=False)
    b = run_suite(small(seed=5)).to_json(timings=False)
    assert a == b
    c = run_suite(small(seed=6)).to_json(timings=False)
    assert c["config"]["seed"] == 6


def test_corrupted_check_fails_with_bundle():
    rep = run_suite(small(corrupt="a", checks=("a", "f")))
    assert not rep.ok
    a, f = rep.checks
    assert a.failed == 3 and f.failed == 0
    bundle = a.failures[0]
    assert bundle["check"] == "a" and bundle["seed"] == 1 and "inputs" in bundle
    assert "FAIL" in rep.table()


def test_single_check_selection_and_unknown():
    rep = run_suite(small(checks=("c",)))
    assert [c.name for c in rep.checks] == ["c"]
    with pytest.raises(ValueError):
        run_suite(small(checks=("z",)))


def test_config_json_round_trip():
    sc = SuiteConfig(seed=9, counts={"a": 2}, p_values=(3,), corrupt="b")
    assert SuiteConfig.from_json(sc.to_json()) == sc


def test_gen_random_lattice_contract():
    assert gen_random_lattice(random.Random(0), CFG, 2, 0).generators == ()
    a = gen_random_lattice(random.Random(42), CFG, 2, 3)
    b = gen_random_lattice(random.Random(42), CFG, 2, 3)
    assert a.to_json() == b.to_json()
    for g in a.generators:
        assert len(g) == 2
        for x in g:
            assert len(x.parts[0]) <= 3
    with pytest.raises(ValueError):
        gen_random_lattice(random.Random(0), CFG, 0, 1)
    with pytest.raises(ValueError):
        gen_random_lattice(random.Random(0), CFG, 2, 1, support=0)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_each_check_passes_on_a_few_instances(name):
    rep = run_suite(small(seed=3, checks=(name,)))
    assert rep.ok, rep.checks[0].failures
