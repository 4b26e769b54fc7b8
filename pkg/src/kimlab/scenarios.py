"""Executable checks of the explicit T_n configurations and counterexamples.

Every scenario returns a :class:`Report` whose checks are recomputed from
the primitive layer (validator, closure, oracle), never read back from the
construction that produced the structures.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Optional, Sequence

from .amalgamation import strong_amalgam
from .independence import dcl, indep_star
from .oracle import Templates, consistent_set, k_inconsistent
from .report import Report
from .structure import (F, O, Builder, FinStructure, StructureError, UnionFind, class_reps,
                        closure, elem_key, equal_type_over, iso_over, random_extension,
                        random_structure, sort_ids, validate)
from .terms import parse_diagram

SCENARIOS = ("sop1-config", "not-cosimple", "forking-not-dividing", "no-universal-morley",
             "transitivity-failure", "independence-amalgam", "local-character")

EVAL_FIXES = parse_diagram("vars: x:F\nparams: z\neval(x;z) = z")
SAME_CLASS = parse_diagram("vars: y:O\nparams: z\nE(y,z)")
SAME_CLASS_X = parse_diagram("vars: x:O\nparams: z\nE(x,z)")
EVAL_FIXES_OR_SAME_CLASS = [parse_diagram("vars: x:F y:O\nparams: z\neval(x;z) = z"),
                            parse_diagram("vars: x:F y:O\nparams: z\nE(y,z)")]


def _p(ids: Iterable[str]) -> list[tuple[str]]:
    return [(x,) for x in ids]


# ---------------------------------------------------------------- SOP1 arrays

def sop1_config_check(base: FinStructure, template: Templates,
                      array: Sequence[tuple[Sequence[str], Sequence[str]]], k: int = 2) -> Report:
    """Check a finite array (c_i0, c_i1) against the three SOP1 clauses.

    (a) c_i0 and c_i1 have the same type over all earlier rows;
    (b) the template is consistent along column 0;
    (c) the template is k-inconsistent along column 1.
    """
    rep = Report("sop1-config", detail=f"{len(array)} rows, k={k}")
    v = validate(base)
    if not rep.add("base is a model of T_n", bool(v), "eval(f,b) E b and E(b,b') -> eval(f,b) = eval(f,b')",
                   v.witness):
        return rep
    for row in array:
        if len(row[0]) != len(row[1]):
            raise ValueError("array columns have different arity")
    bad_row = None
    for i, (c0, c1) in enumerate(array):
        earlier = [x for r in array[:i] for col in r for x in col]
        if not equal_type_over(earlier, c0, c1, base):
            bad_row = i
            break
    rep.add("(a) c_i0 ≡ c_i1 over c_<i", bad_row is None, "c_{i,0} ≡_{c_{<i}} c_{i,1}",
            {"row": bad_row} if bad_row is not None else None)
    col0 = [tuple(r[0]) for r in array]
    col1 = [tuple(r[1]) for r in array]
    rep.add("(b) column 0 consistent", consistent_set(base, template, col0),
            "{φ(x; c_{i,0})} is consistent", {"column": 0})
    kinc = len(col1) >= k and k_inconsistent(base, template, col1, k)
    rep.add(f"(c) column 1 {k}-inconsistent", kinc, "{φ(x; c_{i,1})} is k-inconsistent", {"column": 1})
    return rep


def _array_base(rows: int) -> FinStructure:
    """Two-column array of O-points: c_i1 all in one class, c_i0 pairwise inequivalent."""
    b = Builder(1)
    for i in range(rows):
        b.add(f"c{i}_0", O)
        b.add(f"c{i}_1", O)
    for i in range(1, rows):
        b.join("c0_1", f"c{i}_1")
        b.join("c0_1", f"c{i}_0")
    return b.build()


def verify_sop1_config(seed: int = 0) -> Report:
    rep = Report("sop1-config", detail="finite SOP1 array checks for eval(x;z) = z and E(x;z)")
    base = _array_base(2)
    arr = [(("c0_0",), ("c0_1",)), (("c1_0",), ("c1_1",))]
    r = sop1_config_check(base, EVAL_FIXES, arr, 2)
    rep.add("2-row array for eval(x;z) = z satisfies (a), (b), (c)", r.passed,
            "c_{i,0} ≡_{c_{<i}} c_{i,1}; column 0 consistent; column 1 2-inconsistent",
            None if r.passed else r.to_json())
    base3 = _array_base(3)
    arr3 = arr + [(("c2_0",), ("c2_1",))]
    r3 = sop1_config_check(base3, EVAL_FIXES, arr3, 2)
    fails = [c.name[:3] for c in r3.failed_checks()]
    rep.add("3-row extension of that array fails (b): row 2 is forced into the class of column 1",
            fails == ["(b)"], "(a) forces E(c_{1,0}, c_{2,0}), so column 0 is inconsistent",
            {"failed": fails})
    same = sop1_config_check(base, EVAL_FIXES, [(("c0_0",), ("c0_0",)), (("c1_0",), ("c1_0",))], 2)
    rep.add("identical columns: (c) fails for a consistent template",
            [c.name[:3] for c in same.failed_checks()] == ["(c)"], "c_{i,0} = c_{i,1}", None)
    # c_i0 in fresh classes, c_i1 in one shared class: the rows differ in type over earlier rows
    b = Builder(1)
    for x in ("b0_0", "b0_1", "b1_0", "b1_1"):
        b.add(x, O)
    b.join("b0_1", "b1_1")
    mixed = b.build()
    rm = sop1_config_check(mixed, SAME_CLASS_X, [(("b0_0",), ("b0_1",)), (("b1_0",), ("b1_1",))], 2)
    rep.add("fresh-class vs shared-class rows with E(x;z): (a) fails",
            any(c.name.startswith("(a)") for c in rm.failed_checks()), "c_{i,0} ≢_{c_{<i}} c_{i,1}", None)
    bb = Builder(1)
    bb.add_structure(_array_base(2))
    bb.add("h", F)
    bad = bb.build()
    bad = bad.with_eval({(("h",), "c1_0"): "c0_0"})
    rb = sop1_config_check(bad, EVAL_FIXES, arr, 2)
    rep.add("array over a non-model is rejected at validation", not rb.passed and not rb.checks[0].passed,
            "eval(h, c1_0) must be E-equivalent to c1_0", None)
    return rep


# ---------------------------------------------------------------- non-co-simple array

def not_cosimple_array(m: int, break_entry: bool = False) -> FinStructure:
    """m x m array a_{r}_{c} of distinct O-points; each row is one E-class, rows inequivalent."""
    b = Builder(1)
    for r in range(m):
        for c in range(m):
            b.add(f"a{r}_{c}", O)
            if c and not (break_entry and (r, c) == (0, 1)):
                b.join(f"a{r}_0", f"a{r}_{c}")
    return b.build()


def verify_not_cosimple(m: int = 3, break_entry: bool = False) -> Report:
    if not 2 <= m <= 5:
        raise ValueError("m must lie in [2, 5]")
    S = not_cosimple_array(m, break_entry)
    rep = Report("not-cosimple", detail=f"m={m}, template eval(x;y) = y")
    rep.add("array structure is a model of T_1", bool(validate(S)), "T_1 axioms")
    rows = [[f"a{r}_{c}" for c in range(m)] for r in range(m)]
    ok_shape = (all(S.E(x, y) for row in rows for x in row for y in row)
                and all(not S.E(x, y) for r1, r2 in itertools.combinations(rows, 2) for x in r1 for y in r2))
    rep.add("rows are E-classes and distinct rows are inequivalent", ok_shape,
            "E(a_{α,β}, a_{α,β'}) and ¬E(a_{α,β}, a_{α',β'}) for α < α'")
    rep.add(f"one class representative per row ({m})", len(class_reps(S, S.objects)) == m,
            "X/E has one class per row")
    bad_path = None
    paths = 0
    for path in itertools.product(range(m), repeat=m):
        paths += 1
        if not consistent_set(S, EVAL_FIXES, _p(rows[r][path[r]] for r in range(m))):
            bad_path = list(path)
            break
    rep.add(f"every path is consistent ({paths} paths)", bad_path is None,
            "for all f: ω → ω, {φ(x; a_{α,f(α)}) : α < ω} is consistent",
            {"path": bad_path} if bad_path else None)
    bad_row = next((r for r in range(m) if not k_inconsistent(S, EVAL_FIXES, _p(rows[r]), 2)), None)
    rep.add(f"every row is 2-inconsistent ({m} rows)", bad_row is None,
            "for all α, {φ(x; a_{α,β}) : β < ω} is 2-inconsistent",
            {"row": bad_row} if bad_row is not None else None)
    return rep


# ---------------------------------------------------------------- forking vs dividing

def default_base() -> FinStructure:
    """Two E-classes and one function: O = {m0, m1}, F = {h}, eval(h, -) = id."""
    b = Builder(1)
    b.add("m0", O)
    b.add("m1", O)
    b.add("h", F)
    return b.build()


def _sequence_ambient(base: FinStructure, pattern: Sequence[int], prefix: str = "b") -> tuple[FinStructure, list[str]]:
    """Add points b_i realizing tp(b/base) for a b in a new class, grouped by ``pattern``.

    Points with equal pattern labels share a class.  The type of b over the
    base says: b lies in a class disjoint from the base, and every base
    function sends b to one further point e of that class.
    """
    if base.n != 1:
        raise ValueError("these scenarios live in T_1")
    if not base.objects:
        raise ValueError("the base needs at least one E-class")
    taken = set(base.elems)
    b = Builder(1)
    b.add_structure(base)
    names = []
    partner: dict[int, str] = {}
    for i, lab in enumerate(pattern):
        x = f"{prefix}{i}"
        while x in taken:
            x = "_" + x
        taken.add(x)
        names.append(x)
        b.add(x, O)
        if lab not in partner:
            e = f"e{prefix}{lab}"
            while e in taken:
                e = "_" + e
            taken.add(e)
            b.add(e, O)
            partner[lab] = e
        b.join(partner[lab], x)
    for lab, e in partner.items():
        for f in base.functions:
            b.set_eval((f,), e, e)
    return b.build(), names


def _same_type_over(S: FinStructure, base: Iterable[str], pts: Sequence[str]) -> bool:
    base = list(base)
    return all(equal_type_over(base, [pts[0]], [p], S) for p in pts[1:])


def verify_forking_not_dividing(base: Optional[FinStructure] = None, L: int = 4) -> Report:
    base = base or default_base()
    if not base.is_closed(base.elems) or not validate(base):
        raise ValueError("unsuitable base")
    M = list(base.elems)
    rep = Report("forking-not-dividing", detail="φ(x,y;z) = eval(x,z) = z ∨ E(y,z)")
    ineq, bi = _sequence_ambient(base, list(range(L)))
    eq, be = _sequence_ambient(base, [0] * L)
    rep.add("sequence points realize tp(b/M) (both patterns)",
            _same_type_over(ineq, M, bi) and _same_type_over(eq, M, be), "b_i ≡_M b")
    rep.add("(i) {E(y,b_i)} is 2-inconsistent along an inequivalent sequence",
            k_inconsistent(ineq, SAME_CLASS, _p(bi), 2), "E(y;b) divides over M")
    rep.add("(ii) {eval(x,b_i) = b_i} is 2-inconsistent along an equivalent sequence",
            k_inconsistent(eq, EVAL_FIXES, _p(be), 2), "eval(x,b) = b divides over M")
    rep.add("(iii) {φ(x,y;b_i)} consistent along the equivalent sequence",
            consistent_set(eq, EVAL_FIXES_OR_SAME_CLASS, _p(be)),
            "all b_i in one class: {E(y,b_i)} is consistent")
    rep.add("(iv) {φ(x,y;b_i)} consistent along the inequivalent sequence",
            consistent_set(ineq, EVAL_FIXES_OR_SAME_CLASS, _p(bi)),
            "b_i in distinct classes: {eval(x,b_i) = b_i} is consistent")
    quasi, bq = _sequence_ambient(base, [0, 0, 1, 1])
    shape = quasi.E(bq[0], bq[1]) and quasi.E(bq[2], bq[3]) and not quasi.E(bq[1], bq[2])
    rep.add("(v) quasi-dividing: {φ(x,y;b_i) : i < 4} is UNSAT",
            shape and _same_type_over(quasi, M, bq)
            and not consistent_set(quasi, EVAL_FIXES_OR_SAME_CLASS, _p(bq)),
            "E(b_0,b_1), E(b_2,b_3), ¬E(b_1,b_2) make {φ(x,y;b_i) : i < 4} inconsistent")
    three, b3 = _sequence_ambient(base, [0, 0, 1])
    rep.add("3-parameter weakening E(b_0,b_1), ¬E(b_1,b_2) is SAT",
            consistent_set(three, EVAL_FIXES_OR_SAME_CLASS, _p(b3)),
            "4 parameters are needed in this pattern")
    four, b4 = _sequence_ambient(base, [0, 0, 0, 0])
    rep.add("all four parameters equivalent: SAT",
            consistent_set(four, EVAL_FIXES_OR_SAME_CLASS, _p(b4)), "E(y, b_i) for all i")
    return rep


def verify_no_universal_morley(base: Optional[FinStructure] = None, L: int = 3) -> Report:
    if L < 2:
        raise ValueError("L must be at least 2")
    base = base or default_base()
    M = list(base.elems)
    rep = Report("no-universal-morley", detail=f"L={L}")
    ineq, bi = _sequence_ambient(base, list(range(L)))
    eq, be = _sequence_ambient(base, [0] * L)
    rep.add("sequence points realize tp(b/M)", _same_type_over(ineq, M, bi) and _same_type_over(eq, M, be),
            "b_i ≡_M b")
    rep.add("case 1: {E(x,b_i)} is consistent along the equivalent sequence",
            consistent_set(eq, SAME_CLASS_X, _p(be)), "E(b_i, b_j) for all i, j")
    rep.add("case 1: E(x;b) divides (2-inconsistent along the inequivalent sequence)",
            k_inconsistent(ineq, SAME_CLASS_X, _p(bi), 2), "¬E(c_i, c_{i+1}) makes {E(x;c_i)} inconsistent")
    rep.add("case 2: {eval(x,b_i) = b_i} is consistent along the inequivalent sequence",
            consistent_set(ineq, EVAL_FIXES, _p(bi)), "¬E(b_i, b_j) for i ≠ j")
    rep.add("case 2: eval(x,b) = b divides (2-inconsistent along the equivalent sequence)",
            k_inconsistent(eq, EVAL_FIXES, _p(be), 2),
            "eval(a,-) takes only one value on an equivalence class")
    return rep


# ---------------------------------------------------------------- transitivity in T*_2

def transitivity_structure(drop_clause1: bool = False) -> FinStructure:
    """M = {m, m0, m1, h} plus c ~ m and new functions f, g.

    eval(f,g,m) = eval(g,f,m) = c; every other entry is the class
    representative m, m0 or m1.  ``drop_clause1`` sets both clause-1 entries to m.
    """
    b = Builder(2)
    for o in ("m", "m0", "m1", "c"):
        b.add(o, O)
    for f in ("h", "f", "g"):
        b.add(f, F)
    b.join("m", "c")
    reps = ("m", "m0", "m1")
    for t in itertools.product(("h", "f", "g"), repeat=2):
        for r in reps:
            v = r
            if r == "m" and set(t) == {"f", "g"} and not drop_clause1:
                v = "c"
            b.set_eval(t, r, v)
            if r == "m":
                b.set_eval(t, "c", v)
    return b.build()


def verify_transitivity_failure(drop_clause1: bool = False) -> Report:
    S = transitivity_structure(drop_clause1)
    M = ["m", "m0", "m1", "h"]
    rep = Report("transitivity-failure", detail="T*_2: f ⫝ gc, g ⫝ c, fg ⫝̸ c over M"
                 + (" (clause 1 removed)" if drop_clause1 else ""))
    rep.add("structure is a model of T_2", bool(validate(S)), "eval(f̄,-) is a selector for E")
    rep.add("M is eval-closed and c ∉ M", S.is_closed(M) and "c" not in M, "c ∈ M_2 ∖ M, E(c, m)")
    expected = [("dcl(fM) = M ∪ {f}", ["f"], {"f"}), ("dcl(gM) = M ∪ {g}", ["g"], {"g"}),
                ("dcl(cM) = M ∪ {c}", ["c"], {"c"}), ("dcl(fgM) = M ∪ {f,g,c}", ["f", "g"], {"f", "g", "c"}),
                ("dcl(gcM) = M ∪ {g,c}", ["g", "c"], {"g", "c"})]
    for name, gens, extra in expected:
        got = dcl(S, gens + M)
        want = set(M) | extra
        rep.add(name, set(got) == want, name, {"got": sort_ids(got)} if set(got) != want else None)
    r1 = indep_star(S, ["f"], ["g", "c"], M)
    rep.add("f ⫝*_M gc", r1.passed, "dcl(fM) ∩ dcl(gcM) ⊆ M", r1.witness)
    r2 = indep_star(S, ["g"], ["c"], M)
    rep.add("g ⫝*_M c", r2.passed, "dcl(gM) ∩ dcl(cM) ⊆ M", r2.witness)
    r3 = indep_star(S, ["f", "g"], ["c"], M)
    wit = r3.witness or {}
    rep.add("fg ⫝̸*_M c with witness c", not r3.passed and wit.get("element") == "c",
            "c ∈ (dcl(fgM) ∩ dcl(cM)) ∖ M", {"indep": r3.passed, "witness": r3.witness})
    rep.add("f ≢ g over M ∪ {g, c}", not equal_type_over(M + ["g", "c"], ["f"], ["g"], S),
            "eval(f,g,m) = c but eval(g,g,m) = m")
    return rep


# ---------------------------------------------------------------- independence amalgam

class PreconditionError(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


def _namer(taken: set[str]) -> Callable[[str], str]:
    def name(hint: str) -> str:
        x, i = hint, 0
        while x in taken:
            i += 1
            x = f"{hint}_{i}"
        taken.add(x)
        return x
    return name


def independence_amalgam(S: FinStructure, M: Iterable[str], a: Sequence[str], a2: Sequence[str],
                         B: Iterable[str], C: Iterable[str],
                         sigma: Optional[dict[str, str]] = None) -> tuple[FinStructure, tuple[str, ...]]:
    """Build D ⊇ <BC> and a'' with a'' ≡_B a, a'' ≡_C a2 and a'' ⫝*_M BC.

    D lives on U ∪ V ∪ <BC>: U copies dcl(aB) ∖ B, V copies dcl(a2 C) ∖ C,
    and u_h = v_σ(h) on <aM> ∖ B.  E^D is generated by the three pieces,
    eval^D is their union spread over classes, and every remaining entry
    goes to the class representative (inside M when the class meets M).
    """
    M = sort_ids(set(M))
    a, a2 = list(a), list(a2)
    if not S.is_closed(M):
        raise PreconditionError("M is not eval-closed")
    Bc = closure(S, set(B) | set(M))
    Cc = closure(S, set(C) | set(M))
    iso = iso_over(S, a, S, a2, M)
    if iso is None:
        raise PreconditionError("a and a' differ in type over M", {"a": a, "a2": a2})
    if sigma is not None and any(iso.get(k) != v for k, v in sigma.items()):
        raise PreconditionError("sigma is not the isomorphism <aM> -> <a'M> over M")
    sigma = iso
    for name, (x, y) in (("a ⫝*_M B", (a, sort_ids(Bc))), ("a' ⫝*_M C", (a2, sort_ids(Cc))),
                         ("B ⫝*_M C", (sort_ids(Bc), sort_ids(Cc)))):
        r = indep_star(S, x, y, M)
        if not r:
            raise PreconditionError(f"precondition {name} fails", r.witness)
    daB = closure(S, set(a) | Bc)
    da2C = closure(S, set(a2) | Cc)
    BC = closure(S, Bc | Cc)
    aM = closure(S, set(a) | set(M))
    name = _namer(set(S.elems))
    iota0: dict[str, str] = {}
    for x in sort_ids(daB):
        iota0[x] = x if x in Bc else name(f"u_{x}")
    inv_sigma = {v: k for k, v in sigma.items()}
    iota1: dict[str, str] = {}
    for y in sort_ids(da2C):
        if y in Cc:
            iota1[y] = y
        elif y in inv_sigma and inv_sigma[y] in aM and inv_sigma[y] not in Bc:
            iota1[y] = iota0[inv_sigma[y]]
        else:
            iota1[y] = name(f"v_{y}")
    pieces = [(iota0, daB), (iota1, da2C), ({x: x for x in BC}, BC)]
    sort: dict[str, str] = {}
    for mp, dom in pieces:
        for x in dom:
            s = S.sort_of(x)
            if sort.setdefault(mp[x], s) != s:
                raise AssertionError(f"{mp[x]} gets two sorts")
    objs = sort_ids(x for x, s in sort.items() if s == O)
    funs = sort_ids(x for x, s in sort.items() if s == F)
    uf = UnionFind(objs)
    for mp, dom in pieces:
        dom_o = [x for x in dom if S.sort_of(x) == O]
        for x in dom_o:
            for y in dom_o:
                if x < y and S.E(x, y):
                    uf.union(mp[x], mp[y])
    known: dict[tuple, str] = {}
    for mp, dom in pieces:
        dom_f = [f for f in S.functions if f in dom]
        dom_o = [o for o in S.objects if o in dom]
        for t in itertools.product(dom_f, repeat=S.n):
            for o in dom_o:
                key = (tuple(mp[f] for f in t), mp[o])
                v = mp[S.table[(t, o)]]
                if known.setdefault(key, v) != v:
                    raise AssertionError(f"the pieces disagree at eval{key}")
    groups = uf.groups()
    m_set = set(M)
    table = {}
    for g in groups:
        in_m = [x for x in g if x in m_set]
        r = min(in_m or g, key=elem_key)
        for t in itertools.product(funs, repeat=S.n):
            vals = {known[(t, x)] for x in g if (t, x) in known}
            if len(vals) > 1:
                raise AssertionError(f"eval({t}, -) takes two values on the class of {r}")
            v = vals.pop() if vals else r
            for x in g:
                table[(t, x)] = v
    D = FinStructure(S.n, objs, funs, groups, table)
    return D, tuple(iota0[x] for x in a)


def check_independence_amalgam(S: FinStructure, M: Sequence[str], a: Sequence[str], a2: Sequence[str],
                               B: Iterable[str], C: Iterable[str]) -> Report:
    rep = Report("independence-amalgam-instance")
    D, a3 = independence_amalgam(S, M, a, a2, B, C)
    Bc = sort_ids(closure(S, set(B) | set(M)))
    Cc = sort_ids(closure(S, set(C) | set(M)))
    BC = sort_ids(closure(S, set(Bc) | set(Cc)))
    rep.add("D is a model of T_n", bool(validate(D)), "D ⊨ T_n")
    rep.add("D extends <BC>", D.is_closed(BC) and D.restrict(BC) == S.restrict(BC), "<BC> ⊆ D")
    rep.add("a'' ≡_MB a", iso_over(S, a, D, a3, Bc) is not None, "a'' ≡_{MB} a")
    rep.add("a'' ≡_MC a'", iso_over(S, a2, D, a3, Cc) is not None, "a'' ≡_{MC} a'")
    r = indep_star(D, a3, BC, M)
    rep.add("a'' ⫝*_M BC", r.passed, "a'' ⫝*_M BC", r.witness)
    rep.witness = {"D": D.to_text(), "a''": list(a3)} if not rep.passed else None
    return rep


def _perturb(S: FinStructure, movers: set[str], targets: set[str], rng: random.Random) -> FinStructure:
    """Re-point eval of tuples meeting ``movers`` on classes inside ``targets`` to random class members."""
    updates = {}
    target_classes = {S.rep[o] for o in targets if S.sort_of(o) == O}
    for t in S.f_tuples():
        if not set(t) & movers:
            continue
        for r in sort_ids(target_classes):
            members = S.classes[r]
            if not all(x in targets for x in members) or rng.random() < 0.5:
                continue
            v = rng.choice(members)
            for o in members:
                updates[(t, o)] = v
    return S.with_eval(updates)


def random_independence_instance(rng: random.Random, n: int):
    """An instance satisfying the preconditions: (S, M, a, a', B, C).

    Built from strong amalgams over M, then a's functions are re-pointed
    on C-only classes (and a′'s on B-only classes) so that a need not be
    independent from C.
    """
    def ext(A: FinStructure, prefix: str) -> FinStructure:
        return random_extension(A, rng.randint(0, 2), rng.randint(0, 2), rng, prefix=prefix)

    n_o = rng.randint(0, 2)
    M = random_structure(n, (n_o, rng.randint(0, 1)), rng.randint(1, n_o) if n_o else 0,
                         rng.randrange(2 ** 32), prefix=("m", "k"))
    A = random_extension(M, rng.randint(0, 2), rng.randint(1, 2), rng, prefix="a")
    A2 = A.relabel({x: "d" + x[1:] for x in A.elems if x not in M})
    B0, C0 = ext(M, "b"), ext(M, "c")
    S = strong_amalgam(M, B0, C0)
    S = strong_amalgam(M, A, S)
    S = strong_amalgam(M, A2, S)
    a = [x for x in A.elems if x not in M]
    a2 = ["d" + x[1:] for x in a]
    S = _perturb(S, set(a), set(C0.elems) - set(M.elems), rng)
    S = _perturb(S, set(a2), set(B0.elems) - set(M.elems), rng)
    return S, list(M.elems), a, a2, list(B0.elems), list(C0.elems)


def verify_independence_amalgam(seed: int = 0, count: int = 200) -> Report:
    rng = random.Random(seed)
    rep = Report("independence-amalgam", detail=f"{count} random instances, n ∈ {{1,2}}")
    failures, skipped, done = None, 0, 0
    while done < count:
        n = 1 + done % 2
        S, M, a, a2, B, C = random_independence_instance(rng, n)
        try:
            r = check_independence_amalgam(S, M, a, a2, B, C)
        except PreconditionError:
            skipped += 1
            if skipped > 10 * count:
                break
            continue
        done += 1
        if not r.passed and failures is None:
            failures = {"instance": {"S": S.to_text(), "M": M, "a": a, "a2": a2, "B": B, "C": C},
                        "failed": [c.name for c in r.failed_checks()]}
    rep.detail += f"; {done} checked, {skipped} resampled"
    rep.add(f"all three conclusions hold on {done} instances", failures is None and done == count,
            "a'' ≡_{MB} a, a'' ≡_{MC} a', a'' ⫝*_M BC", failures)
    # a = a' inside M: a'' = a
    M0 = default_base()
    D, a3 = independence_amalgam(M0, M0.elems, ["m0"], ["m0"], M0.elems, M0.elems)
    rep.add("a = a' ∈ M gives a'' = a", a3 == ("m0",) and D == M0, "trivial instance")
    # B not independent from C: precondition error
    b = Builder(1)
    for x in ("p", "q"):
        b.add(x, O)
    b.join("p", "q")
    S = b.build()
    try:
        independence_amalgam(S, [], [], [], ["p"], ["q"])
        raised = False
    except PreconditionError:
        raised = True
    rep.add("B ⫝̸*_M C is rejected", raised, "B ⫝*_M C is required")
    return rep


# ---------------------------------------------------------------- local character

def local_character_chain(S: FinStructure, N: Iterable[str], a: Sequence[str],
                          M0: Iterable[str]) -> tuple[list[frozenset[str]], Report]:
    """Grow M_0 ⊆ N until dcl(aM) ∩ N ⊆ M and dcl(aM)/E ∩ N/E ⊆ M/E."""
    N = closure(S, N)
    chain = [closure(S, M0)]
    if not chain[0] <= N:
        raise ValueError("M_0 must lie inside N")
    while True:
        Mi = chain[-1]
        d = closure(S, set(a) | Mi)
        grow = set(Mi) | (d & N)
        n_cls = {}
        for x in sort_ids(N):
            if S.sort_of(x) == O:
                n_cls.setdefault(S.rep[x], x)
        for x in d:
            if S.sort_of(x) == O and S.rep[x] in n_cls:
                grow.add(n_cls[S.rep[x]])
        nxt = closure(S, grow)
        if nxt == Mi:
            break
        chain.append(nxt)
    M = chain[-1]
    d = closure(S, set(a) | M)
    rep = Report("local-character", detail=f"chain length {len(chain) - 1}")
    rep.add("chain is increasing and stays in N",
            all(x < y for x, y in zip(chain, chain[1:])) and M <= N, "M_i ⊆ M_{i+1} ⊆ N")
    bad = sort_ids((d & N) - M)
    rep.add("dcl(aM) ∩ N ⊆ M", not bad, "dcl(aM) ∩ N ⊆ M", {"element": bad[0]} if bad else None)
    n_classes = {S.rep[x] for x in N if S.sort_of(x) == O}
    m_classes = {S.rep[x] for x in M if S.sort_of(x) == O}
    bad_cls = sort_ids({S.rep[x] for x in d if S.sort_of(x) == O} & n_classes - m_classes)
    rep.add("dcl(aM)/E ∩ N/E ⊆ M/E", not bad_cls, "dcl(aM)/E ∩ N/E ⊆ M/E",
            {"class": bad_cls[0]} if bad_cls else None)
    rep.add("a ⫝*_M N", indep_star(S, a, sort_ids(N), M).passed, "a ⫝*_M N")
    return chain, rep


def verify_local_character(seed: int = 0, count: int = 50) -> Report:
    rng = random.Random(seed)
    rep = Report("local-character", detail=f"{count} random N with |N| <= 30, singleton a")
    bad = None
    longest = 0
    for i in range(count):
        n_o = rng.randint(8, 22)
        n_f = rng.randint(1, 30 - n_o)
        N = random_structure(1, (n_o, n_f), rng.randint(1, n_o), rng.randrange(2 ** 32))
        S = random_extension(N, rng.randint(1, 3), rng.randint(1, 3), rng, prefix="x")
        a = [rng.choice([x for x in S.elems if x not in N])]
        M0 = closure(S, rng.sample(list(N.elems), 1))
        chain, r = local_character_chain(S, N.elems, a, M0)
        longest = max(longest, len(chain) - 1)
        if not (r.passed and len(chain) - 1 <= len(N)) and bad is None:
            bad = {"N": N.to_text(), "S": S.to_text(), "a": a, "report": r.to_json()}
    rep.detail += f"; longest chain {longest}"
    rep.add("fixpoint certificate holds on every instance", bad is None,
            "dcl(aM) ∩ N ⊆ M and dcl(aM)/E ∩ N/E ⊆ M/E", bad)
    N = default_base()
    chain, r = local_character_chain(N, N.elems, ["m0"], ["m0"])
    rep.add("a ⊆ M_0: fixpoint at step 0", len(chain) == 1 and r.passed, "a ⊆ M_0")
    return rep


# ---------------------------------------------------------------- suite

def run_scenario(name: str, seed: int = 0, L: int = 4, m: Optional[int] = None) -> list[Report]:
    if name == "sop1-config":
        return [verify_sop1_config(seed)]
    if name == "not-cosimple":
        return [verify_not_cosimple(k) for k in ([m] if m else [2, 3])]
    if name == "forking-not-dividing":
        return [verify_forking_not_dividing(L=L)]
    if name == "no-universal-morley":
        return [verify_no_universal_morley(L=L)]
    if name == "transitivity-failure":
        return [verify_transitivity_failure()]
    if name == "independence-amalgam":
        return [verify_independence_amalgam(seed)]
    if name == "local-character":
        return [verify_local_character(seed)]
    raise KeyError(name)


def run_all(seed: int = 0, L: int = 4, m: Optional[int] = None) -> list[Report]:
    out = []
    for name in SCENARIOS:
        out.extend(run_scenario(name, seed, L, m))
    return out
