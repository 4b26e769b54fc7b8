import random

import pytest

from kimlab.report import bundle, dumps
from kimlab.scenarios import (EVAL_FIXES_OR_SAME_CLASS, SCENARIOS, PreconditionError, _sequence_ambient,
                              check_independence_amalgam, default_base, independence_amalgam,
                              local_character_chain, random_independence_instance, run_all, run_scenario,
                              verify_not_cosimple, verify_transitivity_failure)
from kimlab.oracle import consistent_set
from kimlab.structure import O, Builder, random_extension, random_structure, closure


@pytest.mark.parametrize("name", SCENARIOS)
def test_each_scenario_passes(name):
    for r in run_scenario(name, seed=1):
        assert r.passed, r.render(verbose=True)


def test_unknown_scenario():
    with pytest.raises(KeyError):
        run_scenario("nope")


def test_not_cosimple_sizes_and_fault():
    for m in (2, 3, 4):
        assert verify_not_cosimple(m)
    broken = verify_not_cosimple(3, break_entry=True)
    assert not broken
    assert [c.name for c in broken.failed_checks()][0].startswith("rows are E-classes")
    with pytest.raises(ValueError):
        verify_not_cosimple(6)


def test_transitivity_fault():
    r = verify_transitivity_failure(drop_clause1=True)
    assert not r
    failed = {c.name for c in r.failed_checks()}
    assert "fg ⫝̸*_M c with witness c" in failed


def test_quasi_dividing_patterns():
    base = default_base()
    for pattern, sat in (([0, 0, 1, 1], False), ([0, 0, 1], True), ([0, 0, 0, 0], True),
                         ([0, 1, 2, 3], True)):
        S, pts = _sequence_ambient(base, pattern)
        assert consistent_set(S, EVAL_FIXES_OR_SAME_CLASS, [(p,) for p in pts]) == sat, pattern


def test_independence_amalgam_instances():
    rng = random.Random(4)
    done = 0
    while done < 40:
        inst = random_independence_instance(rng, 1 + done % 2)
        try:
            r = check_independence_amalgam(*inst)
        except PreconditionError:
            continue
        assert r.passed, r.render(verbose=True)
        done += 1


def test_independence_amalgam_trivial_and_errors():
    M0 = default_base()
    D, a3 = independence_amalgam(M0, M0.elems, ["m0"], ["m0"], M0.elems, M0.elems)
    assert D == M0 and a3 == ("m0",)
    b = Builder(1)
    for x in ("p", "q"):
        b.add(x, O)
    b.join("p", "q")
    with pytest.raises(PreconditionError):
        independence_amalgam(b.build(), [], [], [], ["p"], ["q"])
    b = Builder(1)
    b.add("p", O)
    b.add("k", "F")
    with pytest.raises(PreconditionError):
        independence_amalgam(b.build(), [], ["p"], ["k"], [], [])


def test_local_character_examples():
    N = default_base()
    chain, r = local_character_chain(N, N.elems, ["m0"], ["m0"])
    assert len(chain) == 1 and r.passed
    rng = random.Random(2)
    for seed in range(20):
        Nn = random_structure(1, (rng.randint(3, 10), rng.randint(1, 5)), 2, seed)
        S = random_extension(Nn, 2, 2, rng, prefix="x")
        a = [rng.choice([x for x in S.elems if x not in Nn])]
        chain, r = local_character_chain(S, Nn.elems, a, closure(S, [Nn.elems[0]]))
        assert r.passed and len(chain) - 1 <= len(Nn)
        assert all(x < y for x, y in zip(chain, chain[1:]))
    with pytest.raises(ValueError):
        local_character_chain(N, ["m0"], ["m1"], ["m1"])


def test_run_all_is_deterministic():
    a = dumps(bundle(run_all(seed=3)))
    b = dumps(bundle(run_all(seed=3)))
    assert a == b
