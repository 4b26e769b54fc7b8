"""Definable closure, the relation ⫝*, generic extensions and finite Morley sequences."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .oracle import Templates, find_consistent, least_inconsistency
from .report import Report
from .structure import (F, O, Builder, FinStructure, FormatError, StructureError, closure, elem_key,
                        equal_type_over, sort_ids)


def dcl(ambient: FinStructure, X: Iterable[str]) -> frozenset[str]:
    """dcl = acl = generated substructure, computed inside the finite ambient."""
    return closure(ambient, X)


def _classes_of(S: FinStructure, ids: Iterable[str]) -> set[str]:
    return {S.rep[x] for x in ids if S.sort_of(x) == O}


def indep_star(ambient: FinStructure, a: Sequence[str], b: Sequence[str], C: Iterable[str]) -> Report:
    """a ⫝*_C b: dcl(aC) and dcl(bC) share no element and no E-class outside dcl(C)."""
    C = list(C)
    da, db, dc = dcl(ambient, list(a) + C), dcl(ambient, list(b) + C), dcl(ambient, C)
    rep = Report("indep*", detail=f"a={' '.join(a)}; b={' '.join(b)}; C={' '.join(sort_ids(C))}")
    shared_cls = (_classes_of(ambient, da) & _classes_of(ambient, db)) - _classes_of(ambient, dc)
    bad_cls = sort_ids(shared_cls)
    rep.add("dcl(aC)/E ∩ dcl(bC)/E ⊆ dcl(C)/E", not bad_cls,
            "dcl(aC)/E ∩ dcl(bC)/E ⊆ dcl(C)/E",
            {"class": bad_cls[0], "members": list(ambient.classes[bad_cls[0]])} if bad_cls else None)
    bad = sort_ids((da & db) - dc)
    rep.add("dcl(aC) ∩ dcl(bC) ⊆ dcl(C)", not bad, "dcl(aC) ∩ dcl(bC) ⊆ dcl(C)",
            {"element": bad[0]} if bad else None)
    return rep


# ---------------------------------------------------------------- generic extensions (n = 1)

@dataclass(frozen=True)
class GenericSpec:
    """The C-invariant type extending tp(seed/C), with C = ``base``.

    ``seed`` is a tuple of ambient ids whose type over the base is copied;
    the extension then satisfies, for every ambient m outside the base,
    eval(x_i, m) != m, eval(x_i, m) != eval(x_j, m) (m's class not in C/E),
    eval(x_i, y_j) != m, eval(m, y_j) != y_j, and !E(y_j, m) (m's class not
    in C/E).  A seed coordinate whose class meets the base stays in that class.
    """

    base: tuple[str, ...]
    seed: tuple[str, ...]

    @classmethod
    def make(cls, base: Iterable[str], seed: Iterable[str]) -> "GenericSpec":
        return cls(tuple(sort_ids(set(base))), tuple(seed))


class UnsupportedError(ValueError):
    pass


def _check_spec(ambient: FinStructure, spec: GenericSpec) -> None:
    if ambient.n != 1:
        raise UnsupportedError("generic extensions are only implemented for n = 1")
    for x in list(spec.base) + list(spec.seed):
        if x not in ambient:
            raise StructureError(f"unknown id {x!r}")
    if not ambient.is_closed(spec.base):
        raise StructureError("the base of a generic spec must be eval-closed")


def _fresh_namer(taken: set[str]):
    def name(hint: str) -> str:
        x = hint
        i = 0
        while x in taken:
            i += 1
            x = f"{hint}_{i}"
        taken.add(x)
        return x
    return name


def parse_spec(text: str) -> tuple[GenericSpec, Optional[str]]:
    """Parse ``base: ...``, ``seed: ...`` and optional ``ambient: path`` lines."""
    fields: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep or head not in ("ambient", "base", "seed"):
            raise FormatError("expected 'ambient:', 'base:' or 'seed:'", lineno)
        fields[head] = rest.split()
    if "seed" not in fields:
        raise FormatError("spec needs a 'seed:' line")
    ambient = fields.get("ambient") or [None]
    return GenericSpec.make(fields.get("base", []), fields["seed"]), ambient[0]


def generic_extend(ambient: FinStructure, spec: GenericSpec,
                   tag: str = "g") -> tuple[FinStructure, tuple[str, ...]]:
    """Extend ``ambient`` by a realization of the finitized invariant-type scheme.

    The copy of <C seed> over C gets fresh ids ``<id>_<tag>``.  Entries the
    copy does not determine are the ones the scheme constrains: a new
    function on an ambient class disjoint from C, and an ambient function
    outside C on a new class.  Each such entry gets its own new element in
    the relevant class, so all the required inequalities hold.
    """
    _check_spec(ambient, spec)
    S = ambient
    C = set(spec.base)
    G = closure(S, C | set(spec.seed))
    new = [g for g in S.elems if g in G and g not in C]
    name = _fresh_namer(set(S.elems))
    pi = {c: c for c in C}
    for g in new:
        pi[g] = name(f"{g}_{tag}")
    b = Builder(1)
    b.add_structure(S)
    for g in new:
        b.add(pi[g], S.sort_of(g))
    c_classes = _classes_of(S, C)
    anchor = {}
    for c in sort_ids(o for o in C if S.sort_of(o) == O):
        anchor.setdefault(S.rep[c], c)
    for g in new:
        if S.sort_of(g) != O:
            continue
        r = S.rep[g]
        if r in c_classes:
            b.join(anchor[r], pi[g])
        else:
            first = min((h for h in new if S.sort_of(h) == O and S.rep[h] == r), key=elem_key)
            b.join(pi[first], pi[g])
    g_funs = [f for f in S.functions if f in G]
    g_objs = [o for o in S.objects if o in G]
    for f in g_funs:
        for o in g_objs:
            b.set_eval((pi[f],), pi[o], pi[S.table[((f,), o)]])
    new_funs = [f for f in new if S.sort_of(f) == F]
    new_cls = sort_ids({S.rep[o] for o in new if S.sort_of(o) == O and S.rep[o] not in c_classes})
    for f in new_funs:
        for r in sort_ids(S.classes):
            if r in c_classes:
                continue
            v = name(f"{f}_{tag}_{r}")
            b.add(v, O)
            b.join(r, v)
            b.set_eval((pi[f],), r, v)
    for m in S.functions:
        if m in C:
            continue
        for r in new_cls:
            y = pi[min((h for h in new if S.sort_of(h) == O and S.rep[h] == r), key=elem_key)]
            v = name(f"{m}_{tag}_{y}")
            b.add(v, O)
            b.join(y, v)
            b.set_eval((m,), y, v)
    ext = b.build()
    return ext, tuple(pi[x] for x in spec.seed)


def scheme_violations(ext: FinStructure, ambient: FinStructure, base: Iterable[str],
                      xs: Sequence[str], ys: Sequence[str]) -> list[str]:
    """The scheme's clauses that fail for (xs, ys) over the ambient ids, as readable strings."""
    C = set(base)
    c_cls = _classes_of(ext, C)
    out = []
    outside = [m for m in ambient.elems if m not in C]
    for x in xs:
        for m in ambient.objects:
            if m in C:
                continue
            if ext.ev((x,), m) == m:
                out.append(f"eval({x},{m}) = {m}")
    for x1, x2 in itertools.combinations(xs, 2):
        for m in ambient.objects:
            if ext.rep[m] not in c_cls and ext.ev((x1,), m) == ext.ev((x2,), m):
                out.append(f"eval({x1},{m}) = eval({x2},{m})")
    for x in xs:
        for y in ys:
            v = ext.ev((x,), y)
            if v in ambient and v not in C:
                out.append(f"eval({x},{y}) = {v}")
    for y in ys:
        for m in outside:
            if ext.sort_of(m) == F and ext.ev((m,), y) == y:
                out.append(f"eval({m},{y}) = {y}")
            if ext.sort_of(m) == O and ext.rep[m] not in c_cls and ext.E(y, m):
                out.append(f"E({y},{m})")
    return out


def morley_sequence(ambient: FinStructure, spec: GenericSpec,
                    L: int) -> tuple[list[tuple[str, ...]], FinStructure]:
    """L tuples, each realizing the scheme over the ambient grown by its predecessors."""
    if L < 1:
        raise ValueError("L must be at least 1")
    seq = []
    S = ambient
    for i in range(L):
        S, t = generic_extend(S, spec, tag=f"s{i}")
        seq.append(t)
    return seq, S


def indiscernibility_violation(S: FinStructure, base: Iterable[str],
                               seq: Sequence[Sequence[str]]) -> Optional[tuple]:
    """First pair of increasing index tuples whose concatenations differ in type over ``base``."""
    base = list(base)
    L = len(seq)
    for r in range(1, L + 1):
        combos = list(itertools.combinations(range(L), r))
        first = combos[0]
        ref = [x for i in first for x in seq[i]]
        for other in combos[1:]:
            cand = [x for i in other for x in seq[i]]
            if not equal_type_over(base, ref, cand, S):
                return first, other
    return None


def kim_divides(ambient: FinStructure, template: Templates, b: Sequence[str],
                base: Iterable[str], L: int = 4) -> Report:
    """Finite proxy for Kim-dividing of template(x; b) over ``base``.

    Instantiates the template along a length-L scheme-generated sequence
    in tp(b/base) and reports consistency plus the least k of
    k-inconsistency.  ``passed`` means the template divides along it.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    spec = GenericSpec.make(base, b)
    seq, S = morley_sequence(ambient, spec, L)
    params = [tuple(t) for t in seq]
    w = find_consistent(S, template, params)
    k = None if w is not None else least_inconsistency(S, template, params)
    rep = Report("kim-divides", detail=f"L={L}; " + (f"{k}-inconsistent" if k else "consistent"))
    rep.passed = w is None
    rep.witness = {"sequence": [list(t) for t in seq], "least_k": k}
    return rep
