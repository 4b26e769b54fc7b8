"""Brute-force reference for diagram satisfiability over n = 1 bases.

Deliberately shares nothing with the production search beyond the data
types: no normalization, no slot compilation, no canonical fresh naming.

Why a bounded universe suffices: if a model M extending the base realizes
the diagram, keep the base, the values of the variables and the values of
every eval-subterm.  Restricting E to that set and sending every other
eval entry to some member of its class in the set gives a finite model
that still realizes the diagram.  So at most ``#vars + #eval-subterms``
new elements are ever needed, which is below the local finiteness bound.
An eval value lies in the class of its argument, so new points that are
not variable values only ever join classes that already exist, and an eval
entry already fixed by the base, or repeated under the assignment, needs
no new point of its own.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Optional

from kimlab.structure import F, O, FinStructure, validate
from kimlab.terms import Const, Diagram, Eq, Eval, Literal, Rel, SortIs, Var


def _subterms(t, acc: set) -> None:
    if isinstance(t, Eval):
        acc.add(t)
        for f in t.fargs:
            _subterms(f, acc)
        _subterms(t.obj, acc)


def _atom_terms(a):
    return (a.term,) if isinstance(a, SortIs) else (a.left, a.right)


def _restricted_growth(k: int, offset: int) -> Iterator[list[int]]:
    """Labels for k new classes, numbered from ``offset``, up to renaming."""
    def rec(i, labels, top):
        if i == k:
            yield labels
            return
        for lab in range(offset, top + 2):
            yield from rec(i + 1, labels + [lab], max(top, lab))
    yield from rec(0, [], offset - 1)


def _assignments(base: FinStructure, vars_: tuple) -> Iterator[tuple[dict, list[str], list[str]]]:
    """Each variable takes a base element of its sort or a new point (new points up to renaming)."""
    def rec(i, asg, new_f, new_o):
        if i == len(vars_):
            yield dict(asg), list(new_f), list(new_o)
            return
        name, sort = vars_[i]
        pool, new = (base.functions, new_f) if sort == F else (base.objects, new_o)
        for x in list(pool) + list(new):
            asg[name] = x
            yield from rec(i + 1, asg, new_f, new_o)
        new.append(f"n{sort.lower()}{len(new)}")
        asg[name] = new[-1]
        yield from rec(i + 1, asg, new_f, new_o)
        new.pop()
        del asg[name]
    yield from rec(0, {}, [], [])


def _placements(base: FinStructure, new_o: list[str], extra: int) -> Iterator[dict[str, str]]:
    """Classes for the new object points (new classes up to renaming), then ``extra``
    nameless further members of existing classes."""
    base_cls = sorted(set(base.rep.values()))
    k = len(base_cls)
    for joined in itertools.product([None] + base_cls, repeat=len(new_o)):
        free = [o for o, j in zip(new_o, joined) if j is None]
        for labels in _restricted_growth(len(free), k):
            cls = dict(base.rep)
            lab_of = dict(zip(free, labels))
            for o, j in zip(new_o, joined):
                cls[o] = j if j is not None else f"#{lab_of[o]}"
            classes = sorted(set(cls.values()))
            for where in itertools.combinations_with_replacement(classes, extra):
                out = dict(cls)
                out.update((f"nx{i}", c) for i, c in enumerate(where))
                yield out


class _Model:
    def __init__(self, base: FinStructure, funs: list[str], objs: list[str], cls: dict[str, str]):
        self.base = base
        self.funs = funs
        self.objs = objs
        self.cls = cls
        self.members: dict[str, list[str]] = {}
        for o in objs:
            self.members.setdefault(cls[o], []).append(o)
        self.chosen: dict[tuple[str, str], str] = {}

    def lookup(self, f: str, o: str) -> Optional[str]:
        c = self.cls[o]
        if f in self.base.functions and c in self.base.rep:
            return self.base.table[((f,), c)]
        return self.chosen.get((f, self.cls[o]))


def _compile(t):
    if isinstance(t, Var):
        return ("v", t.name)
    if isinstance(t, Const):
        return ("c", t.name)
    return ("e", _compile(t.fargs[0]), _compile(t.obj))


def _compile_lit(lit: Literal):
    a = lit.atom
    kind = "s" if isinstance(a, SortIs) else "=" if isinstance(a, Eq) else "E"
    terms = tuple(_compile(t) for t in _atom_terms(a))
    return kind, lit.positive, terms, getattr(a, "sort", None)


def _n_evals(lit: Literal) -> int:
    acc: set = set()
    for t in _atom_terms(lit.atom):
        _subterms(t, acc)
    return len(acc)


def _open_count(base: FinStructure, open_evals: list, asg: dict) -> int:
    """Distinct eval entries under ``asg`` that the base does not fix: an upper bound on extras."""
    pairs = set()
    nested = 0
    for t in open_evals:
        f, o = t.fargs[0], t.obj
        if isinstance(f, Eval) or isinstance(o, Eval):
            nested += 1
            continue
        fv = asg[f.name] if isinstance(f, Var) else f.name
        ov = asg[o.name] if isinstance(o, Var) else o.name
        if fv in base.functions and ov in base.rep:
            continue
        pairs.add((fv, ov))
    return len(pairs) + nested


def _flat(t, asg: dict) -> str:
    return asg[t[1]] if t[0] == "v" else t[1]


def _solve(model: _Model, asg: dict, lits: list) -> bool:
    """Check the literals, branching over undetermined eval entries when first needed."""
    pending = []

    def value(t):
        tag = t[0]
        if tag == "v":
            return asg[t[1]]
        if tag == "c":
            return t[1]
        f, o = value(t[1]), value(t[2])
        if f is None or o is None:
            return None
        v = model.lookup(f, o)
        if v is None:
            pending.append((f, model.cls[o]))
        return v

    for i, (kind, positive, terms, sort) in enumerate(lits):
        pending.clear()
        vals = [value(t) for t in terms]
        if pending:
            key = pending[0]
            for v in model.members[key[1]]:
                model.chosen[key] = v
                if _solve(model, asg, lits[i:]):
                    return True
                del model.chosen[key]
            return False
        if kind == "s":
            ok = (F if vals[0] in model.funs else O) == sort
        elif kind == "=":
            ok = vals[0] == vals[1]
        else:
            ok = model.cls[vals[0]] == model.cls[vals[1]]
        if ok != positive:
            return False
    return True


def _extension(model: _Model) -> FinStructure:
    table = {}
    for f in model.funs:
        for o in model.objs:
            v = model.lookup(f, o)
            table[((f,), o)] = v if v is not None else min(model.members[model.cls[o]])
    groups = list(model.members.values())
    return FinStructure(1, model.objs, model.funs, groups, table)


def naive_satisfiable(base: FinStructure, d: Diagram) -> Optional[tuple[FinStructure, dict]]:
    """(extension, assignment) realizing ``d`` over ``base``, or None."""
    assert base.n == 1
    evals: set = set()
    for lit in d.literals:
        for t in _atom_terms(lit.atom):
            _subterms(t, evals)
    # an eval of base elements is already fixed by the base and needs no new point
    open_evals = [t for t in evals if not all(isinstance(x, Const) for x in (*t.fargs, t.obj))]
    lits = [_compile_lit(l) for l in sorted(d.literals, key=lambda l: (_n_evals(l), str(l)))]
    # equalities between variables and constants do not depend on the class placement
    flat_eqs = [(pos, terms) for kind, pos, terms, _ in lits
                if kind == "=" and all(t[0] != "e" for t in terms)]
    # an unused extra point is harmless, so the largest number of extras covers the rest
    for asg, new_f, new_o in _assignments(base, tuple(d.vars)):
        if any((_flat(t0, asg) == _flat(t1, asg)) != pos for pos, (t0, t1) in flat_eqs):
            continue
        funs = list(base.functions) + new_f
        for cls in _placements(base, new_o, _open_count(base, open_evals, asg)):
            objs = list(base.objects) + [o for o in cls if o not in base.rep]
            model = _Model(base, funs, objs, cls)
            if _solve(model, asg, lits):
                return _extension(model), asg
    return None


def check_witness(base: FinStructure, d: Diagram, ext: FinStructure, asg: dict) -> bool:
    from kimlab.terms import holds_all
    if not validate(ext):
        return False
    if ext.restrict(base.elems) != base:
        return False
    return holds_all(ext, asg, d)


# ---------------------------------------------------------------- query corpus

VAR_SIGNATURES = ((), (("x", O),), (("x", F),), (("x", O), ("y", O)), (("x", O), ("y", F)),
                  (("x", F), ("y", F)))


def literal_pool(base: FinStructure, vars_: tuple) -> list[Literal]:
    """Literals over depth-one terms built from the variables and the base elements."""
    o_atoms = [Var(v, s) for v, s in vars_ if s == O] + [Const(c) for c in base.objects]
    f_atoms = [Var(v, s) for v, s in vars_ if s == F] + [Const(c) for c in base.functions]
    o_terms = o_atoms + [Eval((f,), o) for f in f_atoms for o in o_atoms]
    atoms = []
    for s, t in itertools.combinations(o_terms, 2):
        atoms.append(Eq(s, t))
        atoms.append(Rel(s, t))
    for s, t in itertools.combinations(f_atoms, 2):
        atoms.append(Eq(s, t))
    return [Literal(p, a) for a in atoms for p in (True, False)]


def _has_var(lit: Literal) -> bool:
    def rec(t):
        if isinstance(t, Var):
            return True
        if isinstance(t, Eval):
            return any(rec(f) for f in t.fargs) or rec(t.obj)
        return False
    return any(rec(t) for t in _atom_terms(lit.atom))


def query_corpus(base: FinStructure) -> Iterator[Diagram]:
    """Every query with at most two variables over ``base``.

    A query is a conjunction of at most two literals from the pool; in
    two-literal queries both literals mention a variable.
    """
    for vars_ in VAR_SIGNATURES:
        yield Diagram(vars_)
        pool = literal_pool(base, vars_)
        for lit in pool:
            yield Diagram(vars_, frozenset([lit]))
        with_var = [l for l in pool if _has_var(l)]
        for l1, l2 in itertools.combinations(with_var, 2):
            if l1.atom != l2.atom:
                yield Diagram(vars_, frozenset([l1, l2]))


def compare_all(bases) -> dict:
    """Run the production oracle and the reference on every corpus query; collect disagreements."""
    from kimlab.oracle import satisfiable
    stats = {"queries": 0, "sat": 0, "disagree": [], "bad_witness": []}
    for B in bases:
        for q in query_corpus(B):
            stats["queries"] += 1
            w = satisfiable(B, q)
            ref = naive_satisfiable(B, q)
            if (w is None) != (ref is None):
                stats["disagree"].append((B, q, w is not None))
                continue
            if w is None:
                continue
            stats["sat"] += 1
            if not (w.check(B, q) and check_witness(B, q, *ref)):
                stats["bad_witness"].append((B, q))
    return stats
