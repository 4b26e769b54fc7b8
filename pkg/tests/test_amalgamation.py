import random

import pytest

from kimlab.amalgamation import (AmalgamError, amalgam_problems, check_fraisse, enumerate_structures,
                                 fresh_relabelling, joint_embed, strong_amalgam)
from kimlab.structure import (O, Builder, FinStructure, empty, iso_over, random_closed_subset,
                              random_extension, random_structure, validate)


def random_problem(seed):
    rng = random.Random(seed)
    n = 1 + seed % 2
    n_o = rng.randint(1, 4)
    B = random_structure(n, (n_o, rng.randint(0, 2)), rng.randint(1, n_o), rng.randrange(2 ** 32))
    A = B.restrict(random_closed_subset(B, rng))
    C = random_extension(A, rng.randint(0, 3), rng.randint(0, 2), rng, prefix="c")
    C = C.relabel(fresh_relabelling(C, B.elems, keep=A.elems))
    return A, B, C


def test_trivial_amalgam():
    A = random_structure(1, (3, 2), 2, 0)
    assert strong_amalgam(A, A, A) == A


def test_random_amalgams_are_strong():
    for seed in range(500):
        A, B, C = random_problem(seed)
        D = strong_amalgam(A, B, C)
        assert validate(D)
        assert D.restrict(B.elems) == B and D.restrict(C.elems) == C
        assert amalgam_problems(A, B, C, D) == []
        # a class meeting both sides outside A is linked through A
        for b in B.objects:
            for c in C.objects:
                if b not in A and c not in A and D.E(b, c):
                    assert any(D.E(b, a) for a in A.objects)


def test_swapping_sides_gives_isomorphic_amalgam():
    for seed in range(100):
        A, B, C = random_problem(seed)
        D1, D2 = strong_amalgam(A, B, C), strong_amalgam(A, C, B)
        ids = list(D1.elems)
        assert iso_over(D1, ids, D2, ids, A.elems) is not None


def test_joint_embedding():
    B = random_structure(1, (2, 1), 1, 1)
    C = random_structure(1, (3, 1), 2, 2)
    D = joint_embed(B, C)
    assert validate(D)
    assert len(D) == len(B) + len(C)
    assert D.restrict(B.elems) == B
    assert len(D.classes) == len(B.classes) + len(C.classes)
    with pytest.raises(AmalgamError):
        joint_embed(B, random_structure(2, (1, 1), 1, 0))


def test_precondition_errors():
    A = random_structure(1, (1, 0), 1, 0)
    B = random_structure(1, (2, 1), 1, 3)
    with pytest.raises(AmalgamError) as exc:
        strong_amalgam(A, B, B)
    assert "intersect" in str(exc.value)
    broken = FinStructure(1, ["o0", "p"], ["f"], [["o0", "p"]],
                          {(("f",), "o0"): "o0", (("f",), "p"): "p"})
    with pytest.raises(AmalgamError) as exc:
        strong_amalgam(A, broken, A)
    assert "not a model" in str(exc.value)
    # A not closed in B: the function of B moves a point of A out of A
    b = Builder(1)
    b.add("o0", O)
    b.add("q", O)
    b.add("f", "F")
    b.join("o0", "q")
    b.set_eval(["f"], "o0", "q")
    Af = FinStructure(1, ["o0"], ["f"], None, {(("f",), "o0"): "o0"})
    with pytest.raises(AmalgamError) as exc:
        strong_amalgam(Af, b.build(), Af)
    assert "eval-closed" in str(exc.value)


def test_enumeration_counts():
    counts = [sum(1 for _ in enumerate_structures(1, c)) for c in range(4)]
    assert counts == [1, 3, 7, 17]
    assert all(validate(S) for S in enumerate_structures(2, 3))


def test_fraisse_exhaustive():
    r = check_fraisse(1, 3, "exhaustive")
    assert r.passed, r.render(True)
    assert len(r.checks) == 5


def test_fraisse_random_small():
    r = check_fraisse(2, 5, "random", samples=300, seed=1)
    assert r.passed, r.render(True)


def test_fraisse_detects_broken_structure():
    broken = FinStructure(1, ["a", "b"], ["f"], [["a", "b"]], {(("f",), "a"): "a", (("f",), "b"): "b"})
    for mode in ("exhaustive", "random"):
        r = check_fraisse(1, 2, mode, samples=50, extra=[broken])
        assert not r.passed
        assert r.checks[0].witness["structure"] == broken.to_text()


def test_fraisse_mode_errors():
    with pytest.raises(ValueError):
        check_fraisse(1, 3, "sometimes")
    with pytest.raises(ValueError):
        check_fraisse(1, 5, "exhaustive")
