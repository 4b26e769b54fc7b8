"""Satisfiability of quantifier-free diagrams in the generic model of T_n.

A diagram over a base structure B is realized in the generic model iff some
finite model of T_n extending B realizes it.  Only the values of the
variables and of the eval-terms occurring in the (normalized) diagram
matter: any other table entry can be completed by a selector choice.  The
search therefore branches on

1. each variable: an element of B, an earlier fresh element, or a new one;
2. the E-class of each new O-element: a class of B, an earlier fresh class,
   or a new class;
3. each eval-term whose value B does not already fix: a current member of
   its class, or a new anonymous member.

New elements and classes are only ever introduced in canonical order, which
removes the symmetric branches.  Every witness found has at most
``|B| + |vars| + k^(n+1)`` elements with ``k = |B| + |vars|``, within the
uniform local finiteness bound ``k^(n+1) + k``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .structure import F, O, Builder, FinStructure, sort_ids
from .terms import (Const, Diagram, Eval, Rel, SortError, SortIs, Var, bind, conj_all,
                    holds_all, normalize_diagram)

DEFAULT_NODE_BUDGET = 2_000_000
MIN_NODE_BUDGET = 10_000


class SearchBudgetExceeded(RuntimeError):
    pass


def node_budget() -> int:
    """Search-node cap; ``KIMLAB_CAP`` may raise it above the default, never below the minimum."""
    raw = os.environ.get("KIMLAB_CAP")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"KIMLAB_CAP must be an integer, got {raw!r}") from None
    return max(cap, MIN_NODE_BUDGET)


@dataclass(frozen=True)
class OracleQuery:
    base: FinStructure
    diagram: Diagram


@dataclass(frozen=True)
class Witness:
    extension: FinStructure
    assignment: dict

    def check(self, base: FinStructure, diagram: Diagram) -> bool:
        """Re-verify from scratch: the extension is a model, contains ``base``, and satisfies the diagram."""
        from .structure import validate
        ext = self.extension
        if not validate(ext):
            return False
        if not all(x in ext for x in base.elems) or ext.restrict(base.elems) != base:
            return False
        return holds_all(ext, self.assignment, diagram)


def size_bound(n: int, k: int) -> int:
    return k ** (n + 1) + k


# A reference to a value during search: an int is a slot index, a str a base element.
Ref = Union[int, str]


class _Search:
    def __init__(self, S: FinStructure, d: Diagram, budget: int):
        self.S = S
        self.budget = budget
        self.nodes = 0
        self.vars = list(d.vars)
        self.nv = len(self.vars)
        vidx = {name: i for i, (name, _) in enumerate(self.vars)}
        self.slots: list[tuple[tuple[Ref, ...], Ref]] = []
        slot_of: dict[Eval, int] = {}

        def ref(t) -> Ref:
            if isinstance(t, Var):
                return vidx[t.name]
            if isinstance(t, Const):
                return t.name
            if t not in slot_of:
                args = (tuple(ref(f) for f in t.fargs), ref(t.obj))
                slot_of[t] = self.nv + len(self.slots)
                self.slots.append(args)
            return slot_of[t]

        static_fail = False
        compiled = []
        for lit in sorted(d.literals, key=str):
            a = lit.atom
            if isinstance(a, SortIs):
                sort = a.term.sort if isinstance(a.term, Var) else (O if isinstance(a.term, Eval)
                                                                    else S.sort_of(a.term.name))
                if (sort == a.sort) != lit.positive:
                    static_fail = True
                continue
            kind = "E" if isinstance(a, Rel) else "="
            compiled.append((kind, lit.positive, ref(a.left), ref(a.right)))
        self.total = self.nv + len(self.slots)
        self.static_fail = static_fail
        # literal becomes checkable once its highest slot is filled
        self.ready: list[list[tuple]] = [[] for _ in range(self.total + 1)]
        for c in compiled:
            deps = [r for r in c[2:] if isinstance(r, int)]
            self.ready[max(deps, default=-1) + 1].append(c)

        self.vals: list[Optional[str]] = [None] * self.total
        self.clsof: dict[str, str] = dict(S.rep)
        self.members: dict[str, list[str]] = {r: list(ms) for r, ms in S.classes.items()}
        self.base_classes = sort_ids(S.classes)
        self.base_f = set(S.functions)
        self.fresh: list[tuple[str, str]] = []
        self.fresh_classes: list[str] = []
        self.assigned: dict[tuple, str] = {}
        taken = set(S.elems)
        self._names = (f"_w{i}" for i in itertools.count() if f"_w{i}" not in taken)
        self._name_pool: list[str] = []

    def _name(self, i: int) -> str:
        while len(self._name_pool) <= i:
            self._name_pool.append(next(self._names))
        return self._name_pool[i]

    def _val(self, r: Ref) -> str:
        return r if isinstance(r, str) else self.vals[r]  # type: ignore[return-value]

    def _check(self, step: int) -> bool:
        for kind, pos, a, b in self.ready[step]:
            x, y = self._val(a), self._val(b)
            if kind == "=":
                ok = x == y
            else:
                ok = self.clsof[x] == self.clsof[y]
            if ok != pos:
                return False
        return True

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"oracle search exceeded {self.budget} nodes")

    def _new_elem(self, sort: str, label: Optional[str]) -> str:
        x = self._name(len(self.fresh))
        self.fresh.append((x, sort))
        if sort == O:
            self.clsof[x] = label  # type: ignore[assignment]
            self.members.setdefault(label, []).append(x)  # type: ignore[arg-type]
        return x

    def _drop_elem(self) -> None:
        x, sort = self.fresh.pop()
        if sort == O:
            lab = self.clsof.pop(x)
            self.members[lab].pop()
            if not self.members[lab]:
                del self.members[lab]

    def run(self) -> bool:
        if self.static_fail or not self._check(0):
            return False
        return self._assign(0)

    def _assign(self, i: int) -> bool:
        if i == self.total:
            return True
        self._tick()
        if i < self.nv:
            return self._assign_var(i)
        return self._assign_eval(i)

    def _try(self, i: int, x: str) -> bool:
        self.vals[i] = x
        if self._check(i + 1) and self._assign(i + 1):
            return True
        self.vals[i] = None
        return False

    def _assign_var(self, i: int) -> bool:
        sort = self.vars[i][1]
        base = self.S.objects if sort == O else self.S.functions
        for x in base:
            if self._try(i, x):
                return True
        for x, s in list(self.fresh):
            if s == sort and self._try(i, x):
                return True
        if sort == F:
            x = self._new_elem(F, None)
            if self._try(i, x):
                return True
            self._drop_elem()
            return False
        labels = self.base_classes + self.fresh_classes + [f"~{len(self.fresh_classes)}"]
        for lab in labels:
            opened = lab not in self.members
            if opened:
                self.fresh_classes.append(lab)
            x = self._new_elem(O, lab)
            if self._try(i, x):
                return True
            self._drop_elem()
            if opened:
                self.fresh_classes.pop()
        return False

    def _assign_eval(self, i: int) -> bool:
        fargs, obj = self.slots[i - self.nv]
        ft = tuple(self._val(r) for r in fargs)
        o = self._val(obj)
        lab = self.clsof[o]
        if lab in self.S.rep and all(f in self.base_f for f in ft):
            return self._try(i, self.S.table[(ft, lab)])
        key = (ft, lab)
        if key in self.assigned:
            return self._try(i, self.assigned[key])
        for x in list(self.members[lab]):
            self.assigned[key] = x
            if self._try(i, x):
                return True
        x = self._new_elem(O, lab)
        self.assigned[key] = x
        if self._try(i, x):
            return True
        self._drop_elem()
        del self.assigned[key]
        return False

    def witness(self) -> Witness:
        S = self.S
        b = Builder(S.n)
        b.add_structure(S)
        for x, sort in self.fresh:
            b.add(x, sort)
        for lab, ms in self.members.items():
            for x in ms[1:]:
                b.join(ms[0], x)
        for (ft, lab), v in self.assigned.items():
            b.set_eval(ft, self.members[lab][0], v)
        ext = b.build()
        asg = {name: self.vals[i] for i, (name, _) in enumerate(self.vars)}
        return Witness(ext, asg)


def satisfiable(base: FinStructure | OracleQuery, diagram: Optional[Diagram] = None,
                budget: Optional[int] = None) -> Optional[Witness]:
    """A witness realizing ``diagram`` over ``base``, or ``None`` (UNSAT)."""
    if isinstance(base, OracleQuery):
        base, diagram = base.base, base.diagram
    if diagram is None:
        raise TypeError("satisfiable() needs a diagram")
    d = normalize_diagram(diagram)
    bind(d, base)
    search = _Search(base, d, budget or node_budget())
    if not search.run():
        return None
    w = search.witness()
    k = len(base) + len(d.vars)
    assert len(w.extension) <= size_bound(base.n, k), "witness exceeds the local finiteness bound"
    return w


Templates = Union[Diagram, Sequence[Diagram]]


def _as_disjuncts(templates: Templates) -> list[Diagram]:
    return [templates] if isinstance(templates, Diagram) else list(templates)


def _instances(templates: Templates, params: Sequence[Sequence[str]]) -> list[list[Diagram]]:
    disjuncts = _as_disjuncts(templates)
    out = []
    for p in params:
        row = []
        for t in disjuncts:
            if len(p) != len(t.params):
                raise SortError(f"template takes {len(t.params)} parameters, got {len(p)}")
            row.append(t.instantiate(p))
        out.append(row)
    return out


def find_consistent(base: FinStructure, templates: Templates,
                    params: Sequence[Sequence[str]]) -> Optional[Witness]:
    """Witness for the conjunction over ``params`` of the disjunction of ``templates``.

    Disjunction is handled by distributing into DNF; each branch is one
    conjunctive oracle call, tried in lexicographic order of disjunct choices.
    """
    rows = _instances(templates, params)
    if not rows:
        return satisfiable(base, Diagram(vars=_merged_vars(_as_disjuncts(templates))))
    for choice in itertools.product(*rows):
        w = satisfiable(base, conj_all(choice))
        if w is not None:
            return w
    return None


def _merged_vars(ds: Iterable[Diagram]) -> tuple:
    return conj_all(Diagram(d.vars) for d in ds).vars


def consistent_set(base: FinStructure, templates: Templates, params: Sequence[Sequence[str]]) -> bool:
    return find_consistent(base, templates, params) is not None


def k_inconsistent(base: FinStructure, templates: Templates,
                   params: Sequence[Sequence[str]], k: int) -> bool:
    """Every ``k``-element subfamily of the instances is unsatisfiable."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > len(params):
        raise ValueError(f"k = {k} exceeds the number of parameters ({len(params)})")
    return all(not consistent_set(base, templates, sub) for sub in itertools.combinations(params, k))


def least_inconsistency(base: FinStructure, templates: Templates,
                        params: Sequence[Sequence[str]]) -> Optional[int]:
    """Least ``k`` (2 <= k <= len(params)) for which the family is k-inconsistent."""
    for k in range(2, len(params) + 1):
        if k_inconsistent(base, templates, params, k):
            return k
    return None


def as_params(elems: Iterable) -> list[tuple[str, ...]]:
    """Wrap single ids as 1-tuples; tuples pass through."""
    return [tuple(e) if isinstance(e, (tuple, list)) else (e,) for e in elems]
