import random

import pytest

from indep_axioms import axiom_violations
from kimlab.independence import (GenericSpec, UnsupportedError, dcl, generic_extend, indep_star,
                                 indiscernibility_violation, kim_divides, morley_sequence, parse_spec,
                                 scheme_violations)
from kimlab.scenarios import default_base, transitivity_structure
from kimlab.structure import (O, Builder, FormatError, StructureError, iso_over, random_closed_subset,
                              random_extension, random_structure, validate)
from kimlab.terms import parse_diagram

M = ["m", "m0", "m1", "h"]


def test_dcl_examples():
    S = transitivity_structure()
    assert dcl(S, M) == set(M)
    assert dcl(S, ["f", "g"] + M) == set(M) | {"f", "g", "c"}
    assert dcl(S, []) == set()


def test_indep_examples():
    S = transitivity_structure()
    assert indep_star(S, ["f"], ["g", "c"], M)
    r = indep_star(S, ["f", "g"], ["c"], M)
    assert not r
    assert r.witness == {"element": "c"}
    assert indep_star(S, ["f"], M, M)


def test_indep_class_clause():
    # two new points in one class: no shared element, but a shared class outside C
    b = Builder(1)
    b.add("p", O)
    b.add("q", O)
    b.join("p", "q")
    S = b.build()
    r = indep_star(S, ["p"], ["q"], [])
    assert not r
    assert r.witness == {"class": "p", "members": ["p", "q"]}
    assert not r.checks[0].passed and r.checks[1].passed


def test_axioms_on_random_instances():
    bad = axiom_violations(300, seed=3)
    assert bad == {"invariance": [], "monotonicity": [], "symmetry": [], "existence": []}


def test_generic_extend_basic():
    S = default_base()
    b = Builder(1)
    b.add_structure(S)
    b.add("b", O)
    amb = b.build()
    ext, (y,) = generic_extend(amb, GenericSpec.make(S.elems, ["b"]))
    assert validate(ext)
    assert y not in amb and ext.restrict(amb.elems) == amb
    assert not any(ext.E(y, o) for o in amb.objects)
    assert scheme_violations(ext, amb, S.elems, [], [y]) == []


def test_generic_extend_random_ambients():
    rng = random.Random(8)
    for seed in range(150):
        N = random_structure(1, (rng.randint(1, 4), rng.randint(0, 2)), 1, seed)
        C = sorted(random_closed_subset(N, rng, 0.3))
        amb = random_extension(N, rng.randint(0, 2), rng.randint(0, 2), rng, prefix="x")
        seed_ids = rng.sample([x for x in amb.elems if x not in C] or amb.elems, 1)
        spec = GenericSpec.make(C, seed_ids)
        ext, t = generic_extend(amb, spec)
        assert validate(ext)
        assert ext.restrict(amb.elems) == amb
        assert iso_over(amb, seed_ids, ext, t, C) is not None
        xs = [x for x in t if ext.sort_of(x) == "F"]
        ys = [y for y in t if ext.sort_of(y) == O and ext.rep[y] not in {ext.rep[c] for c in C if c in ext.rep}]
        assert scheme_violations(ext, amb, C, xs, ys) == []


def test_generic_extend_deterministic_and_invariant():
    # n = 2 is out of reach for the scheme
    with pytest.raises(UnsupportedError):
        generic_extend(transitivity_structure(), GenericSpec.make(M, ["f"]))
    base = default_base()
    b = Builder(1)
    b.add_structure(base)
    b.add("b", O)
    b.add("k", "F")
    amb = b.build()
    spec = GenericSpec.make(base.elems, ["b", "k"])
    e1, t1 = generic_extend(amb, spec)
    e2, t2 = generic_extend(amb, spec)
    assert (e1, t1) == (e2, t2)
    seq, grown = morley_sequence(amb, spec, 3)
    for t in seq:
        assert iso_over(grown, seq[0], grown, t, base.elems) is not None


def test_generic_extend_errors():
    S = default_base()
    with pytest.raises(StructureError):
        generic_extend(S, GenericSpec.make(["zz"], ["m0"]))
    b = Builder(1)
    b.add("o", O)
    b.add("p", O)
    b.add("f", "F")
    b.join("o", "p")
    b.set_eval(["f"], "o", "p")
    with pytest.raises(StructureError):
        generic_extend(b.build(), GenericSpec.make(["f", "o"], ["p"]))


def test_morley_sequence_indiscernible():
    base = default_base()
    b = Builder(1)
    b.add_structure(base)
    b.add("b", O)
    amb = b.build()
    seq, grown = morley_sequence(amb, GenericSpec.make(base.elems, ["b"]), 4)
    assert len(seq) == 4
    pts = [t[0] for t in seq]
    assert all(not grown.E(p, q) for i, p in enumerate(pts) for q in pts[i + 1:])
    assert indiscernibility_violation(grown, base.elems, seq) is None
    assert validate(grown)
    with pytest.raises(ValueError):
        morley_sequence(amb, GenericSpec.make(base.elems, ["b"]), 0)


def _with_point(join=None):
    base = default_base()
    b = Builder(1)
    b.add_structure(base)
    b.add("b", O)
    if join:
        b.join(join, "b")
    return base, b.build()


def test_kim_divides_examples():
    base, amb = _with_point()
    same = parse_diagram("vars: x:O\nparams: z\nE(x,z)")
    r = kim_divides(amb, same, ["b"], base.elems)
    assert r.passed and r.witness["least_k"] == 2
    r = kim_divides(amb, parse_diagram("vars: x:O\nparams: z\nx = z"), ["b"], base.elems)
    assert r.passed and r.witness["least_k"] == 2
    base, amb = _with_point(join="m0")
    r = kim_divides(amb, same, ["b"], base.elems)
    assert not r.passed and r.witness["least_k"] is None
    with pytest.raises(ValueError):
        kim_divides(amb, same, ["b"], base.elems, L=1)


def test_kim_divides_eval_fixes():
    base, amb = _with_point()
    fixes = parse_diagram("vars: x:F\nparams: z\neval(x;z) = z")
    # fresh classes along the sequence: the template stays consistent
    assert not kim_divides(amb, fixes, ["b"], base.elems).passed


def test_parse_spec():
    spec, amb = parse_spec("# spec\nambient: s.tn\nbase: m0 h\nseed: b\n")
    assert spec == GenericSpec(("h", "m0"), ("b",)) and amb == "s.tn"
    spec, amb = parse_spec("seed: b k\n")
    assert spec.base == () and amb is None
    with pytest.raises(FormatError) as exc:
        parse_spec("base: m0\nsed: b\n")
    assert exc.value.line == 2
    with pytest.raises(FormatError):
        parse_spec("base: m0\n")
