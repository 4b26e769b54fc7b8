"""Finite L_n-structures: two sorts O and F, an equivalence E on O and an
(n+1)-ary function ``eval: F^n x O -> O``.

Element ids are identifier strings.  Canonical order is :func:`elem_key`
(natural sort, so ``o2 < o10``); every E-class is represented by its least
member in that order.
"""
from __future__ import annotations

import itertools
import random
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import Optional

from .report import Report

O, F = "O", "F"
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_DIGITS = re.compile(r"(\d+)")

FTuple = tuple[str, ...]
EvalKey = tuple[FTuple, str]


class StructureError(ValueError):
    pass


class FormatError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col else "") if line else ""
        super().__init__(f"{where}: {msg}" if where else msg)


def elem_key(x: str) -> tuple:
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in _DIGITS.split(x) if p)


def sort_ids(ids: Iterable[str]) -> list[str]:
    return sorted(ids, key=elem_key)


class UnionFind:
    """Disjoint sets keyed by element id; the root of each set is its least id."""

    def __init__(self, items: Iterable[str] = ()):
        self.parent: dict[str, str] = {}
        for x in items:
            self.add(x)

    def add(self, x: str) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if elem_key(rb) < elem_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list[str]]:
        out: dict[str, list[str]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


class FinStructure:
    """Immutable finite L_n-structure with a total eval table.

    The constructor checks the shape (disjoint sorts, a partition of O, a
    total and well-sorted table) but not the selector axioms; use
    :func:`validate` for those, so that broken structures can be represented
    and reported.
    """

    __slots__ = ("n", "objects", "functions", "rep", "table", "_classes", "_sort", "_hash")

    def __init__(self, n: int, objects: Iterable[str], functions: Iterable[str],
                 classes: Optional[Iterable[Iterable[str]]] = None,
                 table: Optional[Mapping[EvalKey, str]] = None):
        if n < 1:
            raise StructureError("n must be >= 1")
        self.n = n
        self.objects = tuple(sort_ids(set(objects)))
        self.functions = tuple(sort_ids(set(functions)))
        both = set(self.objects) & set(self.functions)
        if both:
            raise StructureError(f"elements in both sorts: {sort_ids(both)}")
        self._sort = {**{o: O for o in self.objects}, **{f: F for f in self.functions}}
        groups = [list(g) for g in classes] if classes is not None else [[o] for o in self.objects]
        rep: dict[str, str] = {}
        for g in groups:
            if not g:
                continue
            r = min(g, key=elem_key)
            for x in g:
                if self._sort.get(x) != O:
                    raise StructureError(f"E relates non-O element {x!r}")
                if x in rep:
                    raise StructureError(f"{x!r} in two E-classes")
                rep[x] = r
        missing = set(self.objects) - set(rep)
        if missing:
            raise StructureError(f"O-elements without a class: {sort_ids(missing)}")
        self.rep = rep
        self.table: dict[EvalKey, str] = dict(table or {})
        for key in itertools.product(self.f_tuples(), self.objects):
            if key not in self.table:
                raise StructureError(f"eval undefined at {fmt_key(key)}")
        if len(self.table) != len(self.f_tuples()) * len(self.objects):
            bad = next(k for k in self.table if k[1] not in rep or any(self._sort.get(f) != F for f in k[0])
                       or len(k[0]) != n)
            raise StructureError(f"eval entry outside F^n x O: {fmt_key(bad)}")
        for key, v in self.table.items():
            if self._sort.get(v) != O:
                raise StructureError(f"eval{fmt_key(key)} = {v!r} is not an O-element")
        cls: dict[str, list[str]] = {}
        for o in self.objects:
            cls.setdefault(rep[o], []).append(o)
        self._classes = {r: tuple(ms) for r, ms in cls.items()}
        self._hash: Optional[int] = None

    # basic accessors
    def f_tuples(self) -> list[FTuple]:
        return list(itertools.product(self.functions, repeat=self.n))

    @property
    def elems(self) -> tuple[str, ...]:
        return self.objects + self.functions

    def __contains__(self, x: object) -> bool:
        return x in self._sort

    def __len__(self) -> int:
        return len(self._sort)

    def sort_of(self, x: str) -> Optional[str]:
        return self._sort.get(x)

    def cls(self, o: str) -> str:
        return self.rep[o]

    @property
    def classes(self) -> dict[str, tuple[str, ...]]:
        return self._classes

    def E(self, a: str, b: str) -> bool:
        return self.rep[a] == self.rep[b]

    def ev(self, fs: Sequence[str], o: str) -> str:
        return self.table[(tuple(fs), o)]

    def class_groups(self) -> list[tuple[str, ...]]:
        return [self._classes[r] for r in sort_ids(self._classes)]

    # comparison
    def _content(self):
        return (self.n, self.objects, self.functions,
                tuple(sorted(self.rep.items())), tuple(sorted(self.table.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinStructure):
            return NotImplemented
        return (self.n == other.n and self.objects == other.objects
                and self.functions == other.functions and self.rep == other.rep
                and self.table == other.table)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._content())
        return self._hash

    def __repr__(self) -> str:
        return (f"FinStructure(n={self.n}, O={list(self.objects)}, F={list(self.functions)}, "
                f"classes={[list(g) for g in self.class_groups()]})")

    # derived structures
    def is_closed(self, ids: Iterable[str]) -> bool:
        ids = set(ids)
        fs = [f for f in self.functions if f in ids]
        os_ = [o for o in self.objects if o in ids]
        return all(self.table[(t, o)] in ids
                   for t in itertools.product(fs, repeat=self.n) for o in os_)

    def restrict(self, ids: Iterable[str]) -> "FinStructure":
        """Induced substructure on an eval-closed subset."""
        ids = set(ids)
        unknown = ids - set(self._sort)
        if unknown:
            raise StructureError(f"unknown ids: {sort_ids(unknown)}")
        if not self.is_closed(ids):
            raise StructureError("subset is not closed under eval")
        objs = [o for o in self.objects if o in ids]
        funs = [f for f in self.functions if f in ids]
        groups: dict[str, list[str]] = {}
        for o in objs:
            groups.setdefault(self.rep[o], []).append(o)
        table = {(t, o): self.table[(t, o)] for t in itertools.product(funs, repeat=self.n) for o in objs}
        return FinStructure(self.n, objs, funs, groups.values(), table)

    def relabel(self, mapping: Mapping[str, str]) -> "FinStructure":
        """Rename elements; ids missing from ``mapping`` are kept."""
        m = {x: mapping.get(x, x) for x in self.elems}
        if len(set(m.values())) != len(m):
            raise StructureError("relabelling is not injective")
        table = {(tuple(m[f] for f in t), m[o]): m[v] for (t, o), v in self.table.items()}
        return FinStructure(self.n, [m[o] for o in self.objects], [m[f] for f in self.functions],
                            [[m[o] for o in g] for g in self._classes.values()], table)

    def with_eval(self, updates: Mapping[EvalKey, str]) -> "FinStructure":
        """Copy with some table entries overwritten (no axiom check)."""
        table = dict(self.table)
        table.update(updates)
        return FinStructure(self.n, self.objects, self.functions, self._classes.values(), table)

    def to_text(self) -> str:
        return dump_structure(self)


def fmt_key(key: EvalKey) -> str:
    fs, o = key
    return f"({' '.join(fs)} | {o})"


def empty(n: int) -> FinStructure:
    return FinStructure(n, (), ())


class Builder:
    """Mutable accumulator used while constructing structures."""

    def __init__(self, n: int):
        self.n = n
        self.objects: list[str] = []
        self.functions: list[str] = []
        self.uf = UnionFind()
        self.table: dict[EvalKey, str] = {}
        self._seen: set[str] = set()

    def add(self, x: str, sort: str) -> None:
        if x in self._seen:
            if (x in self.uf.parent) != (sort == O):
                raise StructureError(f"{x!r} declared with two sorts")
            return
        self._seen.add(x)
        if sort == O:
            self.objects.append(x)
            self.uf.add(x)
        elif sort == F:
            self.functions.append(x)
        else:
            raise StructureError(f"unknown sort {sort!r}")

    def add_structure(self, S: FinStructure) -> None:
        for o in S.objects:
            self.add(o, O)
        for f in S.functions:
            self.add(f, F)
        for g in S.classes.values():
            for x in g[1:]:
                self.uf.union(g[0], x)
        for key, v in S.table.items():
            self.set_eval(key[0], key[1], v)

    def join(self, a: str, b: str) -> None:
        self.uf.union(a, b)

    def set_eval(self, fs: Sequence[str], o: str, value: str) -> None:
        key = (tuple(fs), o)
        old = self.table.get(key)
        if old is not None and old != value:
            raise StructureError(f"conflicting values for eval{fmt_key(key)}: {old} vs {value}")
        self.table[key] = value

    def build(self) -> FinStructure:
        """Totalize and freeze.

        A missing entry ``eval(fs, o)`` takes the value already given for
        some class-mate of ``o``, otherwise the class representative.
        """
        groups = self.uf.groups()
        rep = {x: self.uf.find(x) for x in self.objects}
        known: dict[tuple[FTuple, str], str] = {}
        for (fs, o), v in sorted(self.table.items(), key=lambda kv: (kv[0][0], elem_key(kv[0][1]))):
            if o in rep:
                known.setdefault((fs, rep[o]), v)
        table = dict(self.table)
        for fs in itertools.product(sort_ids(self.functions), repeat=self.n):
            for o in self.objects:
                if (fs, o) not in table:
                    table[(fs, o)] = known.get((fs, rep[o]), rep[o])
        return FinStructure(self.n, self.objects, self.functions, groups, table)


# ---------------------------------------------------------------- validation

def validate(S: FinStructure) -> Report:
    """Check the selector axioms; never raises."""
    rep = Report("validate")
    for fs in S.f_tuples():
        for r, members in S.classes.items():
            first = S.table[(fs, members[0])]
            for b in members:
                v = S.table[(fs, b)]
                if S.rep.get(v) != S.rep[b]:
                    rep.passed = False
                    rep.detail = f"eval{fmt_key((fs, b))} = {v} is not E-equivalent to {b}"
                    rep.witness = {"f": list(fs), "b": b, "value": v}
                    return rep
                if v != first:
                    rep.passed = False
                    rep.detail = (f"E({members[0]},{b}) but eval{fmt_key((fs, members[0]))} = {first}"
                                  f" != {v} = eval{fmt_key((fs, b))}")
                    rep.witness = {"f": list(fs), "b": members[0], "b2": b, "values": [first, v]}
                    return rep
    rep.detail = f"{len(S.objects)} O, {len(S.functions)} F, {len(S.classes)} classes"
    return rep


# ---------------------------------------------------------------- closure

def closure(S: FinStructure, X: Iterable[str]) -> frozenset[str]:
    """Id-set of the substructure generated by ``X``."""
    X = set(X)
    unknown = X - set(S.elems)
    if unknown:
        raise StructureError(f"unknown ids: {sort_ids(unknown)}")
    fs = [f for f in S.functions if f in X]
    tuples = list(itertools.product(fs, repeat=S.n))
    frontier = [o for o in X if S.sort_of(o) == O]
    # one round suffices in a model of T_n; iterate so broken tables still close
    while frontier:
        new = []
        for o in frontier:
            for t in tuples:
                v = S.table[(t, o)]
                if v not in X:
                    X.add(v)
                    new.append(v)
        frontier = new
    return frozenset(X)


def generated_substructure(S: FinStructure, X: Iterable[str]) -> FinStructure:
    return S.restrict(closure(S, X))


def class_reps(S: FinStructure, X: Iterable[str]) -> frozenset[str]:
    out = set()
    for x in X:
        if x not in S:
            raise StructureError(f"unknown id {x!r}")
        if S.sort_of(x) != O:
            raise StructureError(f"{x!r} is not an O-element")
        out.add(S.rep[x])
    return frozenset(out)


# ---------------------------------------------------------------- embeddings

def _is_embedding(A: FinStructure, B: FinStructure, m: Mapping[str, str]) -> bool:
    if len(set(m.values())) != len(m):
        return False
    for x, y in m.items():
        if A.sort_of(x) != B.sort_of(y):
            return False
    objs = A.objects
    for i, a in enumerate(objs):
        for b in objs[i + 1:]:
            if A.E(a, b) != B.E(m[a], m[b]):
                return False
    for (fs, o), v in A.table.items():
        if B.table[(tuple(m[f] for f in fs), m[o])] != m[v]:
            return False
    return True


def find_embeddings(A: FinStructure, B: FinStructure,
                    partial: Optional[Mapping[str, str]] = None) -> Iterator[dict[str, str]]:
    """Yield every L_n-embedding A -> B extending ``partial``, in canonical order."""
    partial = dict(partial or {})
    if A.n != B.n:
        return
    for x, y in partial.items():
        if x not in A or y not in B or A.sort_of(x) != B.sort_of(y):
            return
    if len(set(partial.values())) != len(partial):
        return
    order = [x for x in A.elems if x in partial] + [x for x in A.objects if x not in partial] \
        + [x for x in A.functions if x not in partial]
    pos = {x: i for i, x in enumerate(order)}
    # constraints become checkable once their last element (in ``order``) is mapped
    e_checks: dict[str, list[str]] = {x: [] for x in order}
    objs = A.objects
    for i, a in enumerate(objs):
        for b in objs[i + 1:]:
            last, other = (a, b) if pos[a] > pos[b] else (b, a)
            e_checks[last].append(other)
    t_checks: dict[str, list[EvalKey]] = {x: [] for x in order}
    for key, v in A.table.items():
        involved = list(key[0]) + [key[1], v]
        t_checks[max(involved, key=pos.__getitem__)].append(key)

    m: dict[str, str] = {}
    used: set[str] = set()

    def ok(x: str) -> bool:
        y = m[x]
        if A.sort_of(x) == O:
            for other in e_checks[x]:
                if A.E(x, other) != B.E(y, m[other]):
                    return False
        for fs, o in t_checks[x]:
            if B.table[(tuple(m[f] for f in fs), m[o])] != m[A.table[(fs, o)]]:
                return False
        return True

    def rec(i: int) -> Iterator[dict[str, str]]:
        if i == len(order):
            yield dict(m)
            return
        x = order[i]
        cands = [partial[x]] if x in partial else (B.objects if A.sort_of(x) == O else B.functions)
        for y in cands:
            if y in used:
                continue
            m[x] = y
            used.add(y)
            if ok(x):
                yield from rec(i + 1)
            used.discard(y)
            del m[x]

    yield from rec(0)


def iso_over(S1: FinStructure, t1: Sequence[str], S2: FinStructure, t2: Sequence[str],
             C: Iterable[str] = ()) -> Optional[dict[str, str]]:
    """The isomorphism <C t1>^S1 -> <C t2>^S2 fixing C and sending t1 to t2, if any.

    A map on generators extends in at most one way, so no search is needed:
    the candidate is built term by term and then checked.
    """
    C = list(C)
    t1, t2 = list(t1), list(t2)
    if len(t1) != len(t2):
        return None
    gens1, gens2 = C + t1, C + t2
    for x in gens1:
        if x not in S1:
            raise StructureError(f"unknown id {x!r}")
    for y in gens2:
        if y not in S2:
            raise StructureError(f"unknown id {y!r}")
    m: dict[str, str] = {}
    for x, y in zip(gens1, gens2):
        if S1.sort_of(x) != S2.sort_of(y):
            return None
        if m.setdefault(x, y) != y:
            return None
    G1 = closure(S1, gens1)
    G2 = closure(S2, gens2)
    if len(G1) != len(G2):
        return None
    fs1 = [f for f in S1.functions if f in m]
    os1 = [o for o in S1.objects if o in m]
    for t in itertools.product(fs1, repeat=S1.n):
        ti = tuple(m[f] for f in t)
        for o in os1:
            v1 = S1.table[(t, o)]
            v2 = S2.table[(ti, m[o])]
            if m.setdefault(v1, v2) != v2:
                return None
    if set(m) != G1 or set(m.values()) != G2 or len(set(m.values())) != len(m):
        return None
    A, B = S1.restrict(G1), S2.restrict(G2)
    return m if _is_embedding(A, B, m) else None


def equal_type_over(C: Iterable[str], a: Sequence[str], b: Sequence[str], S: FinStructure) -> bool:
    """Whether ``a`` and ``b`` have the same quantifier-free (hence complete) type over C."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise StructureError("tuples of different length")
    for x, y in zip(a, b):
        if S.sort_of(x) != S.sort_of(y):
            raise StructureError(f"sort mismatch between {x!r} and {y!r}")
    return iso_over(S, a, S, b, C) is not None


def automorphisms(S: FinStructure) -> list[dict[str, str]]:
    return list(find_embeddings(S, S))


# ---------------------------------------------------------------- random generation

def _random_fill(b: Builder, rng: random.Random) -> FinStructure:
    """Choose a random selector value for every (tuple, class) pair left open."""
    groups = {}
    for x in b.objects:
        groups.setdefault(b.uf.find(x), []).append(x)
    for r in groups:
        groups[r] = sort_ids(groups[r])
    decided = {}
    for (fs, o), v in b.table.items():
        decided[(fs, b.uf.find(o))] = v
    for fs in itertools.product(sort_ids(b.functions), repeat=b.n):
        for r in sort_ids(groups):
            v = decided.get((fs, r))
            if v is None:
                v = rng.choice(groups[r])
            for o in groups[r]:
                b.table[(fs, o)] = v
    return b.build()


def random_structure(n: int, sizes: tuple[int, int], classes: int, seed: int,
                     prefix: tuple[str, str] = ("o", "f")) -> FinStructure:
    """Random model of T_n with ``sizes = (|O|, |F|)`` and exactly ``classes`` E-classes."""
    n_o, n_f = sizes
    if n < 1 or n_o < 0 or n_f < 0:
        raise StructureError("infeasible parameters")
    if not (classes <= n_o and (classes >= 1 or n_o == 0)):
        raise StructureError(f"cannot split {n_o} O-elements into {classes} classes")
    rng = random.Random(seed)
    b = Builder(n)
    objs = [f"{prefix[0]}{i}" for i in range(n_o)]
    for o in objs:
        b.add(o, O)
    for i in range(n_f):
        b.add(f"{prefix[1]}{i}", F)
    if n_o:
        labels = list(range(classes)) + [rng.randrange(classes) for _ in range(n_o - classes)]
        rng.shuffle(labels)
        first: dict[int, str] = {}
        for o, lab in zip(objs, labels):
            if lab in first:
                b.join(first[lab], o)
            else:
                first[lab] = o
    return _random_fill(b, rng)


def random_extension(A: FinStructure, add_o: int, add_f: int, rng: random.Random,
                     prefix: str = "x", p_new_class: float = 0.5) -> FinStructure:
    """Random model of T_n containing A as a substructure, with fresh ids ``prefix<i>``."""
    b = Builder(A.n)
    b.add_structure(A)
    taken = set(A.elems)
    names = (f"{prefix}{i}" for i in itertools.count())
    fresh = []
    while len(fresh) < add_o + add_f:
        x = next(names)
        if x not in taken:
            fresh.append(x)
    new_o, new_f = fresh[:add_o], fresh[add_o:]
    for x in new_f:
        b.add(x, F)
    anchors = list(A.objects)
    for x in new_o:
        b.add(x, O)
        if anchors and rng.random() >= p_new_class:
            b.join(rng.choice(anchors), x)
        anchors.append(x)
    return _random_fill(b, rng)


def random_closed_subset(S: FinStructure, rng: random.Random, p: float = 0.4) -> frozenset[str]:
    return closure(S, [x for x in S.elems if rng.random() < p])


# ---------------------------------------------------------------- text format

def dump_structure(S: FinStructure) -> str:
    lines = [f"tn {S.n}", "O: " + " ".join(S.objects), "F: " + " ".join(S.functions)]
    for g in S.class_groups():
        for x in g[1:]:
            lines.append(f"E: {g[0]}~{x}")
    for fs in S.f_tuples():
        for r in sort_ids(S.classes):
            members = S.classes[r]
            vals = [S.table[(fs, o)] for o in members]
            if all(v == r for v in vals):
                continue
            if all(v == vals[0] for v in vals):
                lines.append(f"eval: {' '.join(fs)} | {r} -> {vals[0]}")
            else:
                # not a selector: spell out every member so the table round-trips
                for o, v in zip(members, vals):
                    lines.append(f"eval: {' '.join(fs)} | {o} -> {v}")
    return "\n".join(lines) + "\n"


def _idents(text: str, lineno: int, col0: int) -> list[str]:
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        if not IDENT_RE.match(tok):
            raise FormatError(f"bad identifier {tok!r}", lineno, col0 + m.start() + 1)
        out.append(tok)
    return out


def parse_structure(text: str) -> FinStructure:
    """Parse the line-based ``.tn`` format; missing eval entries are totalized."""
    n: Optional[int] = None
    b: Optional[Builder] = None
    pending_e: list[tuple[int, str, str]] = []
    pending_eval: list[tuple[int, FTuple, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if n is None:
            m = re.fullmatch(r"\s*tn\s+(\d+)\s*", line)
            if not m:
                raise FormatError("first line must be 'tn <n>'", lineno)
            n = int(m.group(1))
            if n < 1:
                raise FormatError("n must be >= 1", lineno)
            b = Builder(n)
            continue
        assert b is not None
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep:
            raise FormatError("expected '<field>: ...'", lineno)
        col0 = len(head) + 1
        if head in (O, F):
            for x in _idents(rest, lineno, col0):
                try:
                    b.add(x, head)
                except StructureError as exc:
                    raise FormatError(str(exc), lineno) from None
        elif head == "E":
            m = re.fullmatch(r"\s*([A-Za-z_]\w*)\s*~\s*([A-Za-z_]\w*)\s*", rest)
            if not m:
                raise FormatError("expected 'E: id~id'", lineno, col0 + 1)
            pending_e.append((lineno, m.group(1), m.group(2)))
        elif head == "eval":
            m = re.fullmatch(r"\s*([^|]*)\|\s*([A-Za-z_]\w*)\s*->\s*([A-Za-z_]\w*)\s*", rest)
            if not m:
                raise FormatError("expected 'eval: f1 ... fn | o -> o2'", lineno, col0 + 1)
            fs = tuple(_idents(m.group(1), lineno, col0))
            if len(fs) != n:
                raise FormatError(f"eval needs {n} F-arguments, got {len(fs)}", lineno)
            pending_eval.append((lineno, fs, m.group(2), m.group(3)))
        else:
            raise FormatError(f"unknown field {head!r}", lineno)
    if b is None:
        raise FormatError("empty structure file", 1)
    for lineno, x, y in pending_e:
        for z in (x, y):
            if z not in b.uf.parent:
                raise FormatError(f"E relates {z!r}, which is not a declared O-element", lineno)
        b.join(x, y)
    fset, oset = set(b.functions), set(b.objects)
    for lineno, fs, o, v in pending_eval:
        for f in fs:
            if f not in fset:
                raise FormatError(f"{f!r} is not a declared F-element", lineno)
        for z in (o, v):
            if z not in oset:
                raise FormatError(f"{z!r} is not a declared O-element", lineno)
        try:
            b.set_eval(fs, o, v)
        except StructureError as exc:
            raise FormatError(str(exc), lineno) from None
    try:
        return b.build()
    except StructureError as exc:
        raise FormatError(str(exc)) from None


def load_structure(path: str) -> FinStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def save_structure(S: FinStructure, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_structure(S))
