"""Strong amalgamation and joint embedding in K_n, plus Fraisse-property checks."""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Optional, Sequence

from .report import Report
from .structure import (F, O, FinStructure, StructureError, UnionFind, closure, elem_key, empty,
                        find_embeddings, iso_over, random_closed_subset, random_extension,
                        random_structure, sort_ids, validate)


class AmalgamError(StructureError):
    """An amalgamation precondition failed; ``witness`` names the offending data."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


def check_amalgam_input(A: FinStructure, B: FinStructure, C: FinStructure) -> None:
    if not A.n == B.n == C.n:
        raise AmalgamError("structures have different n", {"n": [A.n, B.n, C.n]})
    a, b, c = set(A.elems), set(B.elems), set(C.elems)
    if b & c != a:
        extra = sort_ids((b & c) ^ a)
        raise AmalgamError("B and C must intersect exactly in A", {"ids": extra})
    for name, S in (("B", B), ("C", C)):
        rep = validate(S)
        if not rep:
            raise AmalgamError(f"{name} is not a model of T_n: {rep.detail}", rep.witness)
        for x in A.elems:
            if S.sort_of(x) != A.sort_of(x):
                raise AmalgamError(f"{x!r} has a different sort in {name}", {"id": x})
        if not S.is_closed(a):
            raise AmalgamError(f"A is not eval-closed in {name}", {"in": name})
        if S.restrict(a) != A:
            raise AmalgamError(f"A is not a substructure of {name}", {"in": name})


def strong_amalgam(A: FinStructure, B: FinStructure, C: FinStructure) -> FinStructure:
    """Amalgam D of B and C over A on the universe B ∪ C.

    E^D is the equivalence generated by E^B ∪ E^C.  Each D-class gets a
    canonical representative: its least A-element if it meets A, otherwise
    its least element.  On a representative d, a tuple from B acts as in B
    when d is in B, a tuple from C acts as in C when d is in C, and any other
    tuple fixes d; values then spread over the class.
    """
    check_amalgam_input(A, B, C)
    n = A.n
    uf = UnionFind(list(B.objects) + [o for o in C.objects if o not in B])
    for S in (B, C):
        for g in S.classes.values():
            for x in g[1:]:
                uf.union(g[0], x)
    groups = uf.groups()
    a_ids = set(A.elems)
    rep: dict[str, str] = {}
    for g in groups:
        in_a = [x for x in g if x in a_ids]
        r = min(in_a or g, key=elem_key)
        for x in g:
            rep[x] = r
    fb, fc = set(B.functions), set(C.functions)
    b_ids, c_ids = set(B.elems), set(C.elems)
    functions = sort_ids(fb | fc)

    table = {}
    for fs in itertools.product(functions, repeat=n):
        in_b = all(f in fb for f in fs)
        in_c = all(f in fc for f in fs)
        for g in groups:
            d = rep[g[0]]
            if in_b and d in b_ids:
                v = B.table[(fs, d)]
            elif in_c and d in c_ids:
                v = C.table[(fs, d)]
            else:
                v = d
            for x in g:
                # the B and C definitions must agree wherever both apply
                if in_b and x in b_ids and B.table[(fs, x)] != v:
                    raise AssertionError(f"amalgam disagrees with B at {fs}, {x}")
                if in_c and x in c_ids and C.table[(fs, x)] != v:
                    raise AssertionError(f"amalgam disagrees with C at {fs}, {x}")
                table[(fs, x)] = v
    objects = sort_ids(set(B.objects) | set(C.objects))
    return FinStructure(n, objects, functions, groups, table)


def fresh_relabelling(S: FinStructure, avoid: Iterable[str], keep: Iterable[str] = (),
                      prefix: str = "r") -> dict[str, str]:
    """Rename ids of S that clash with ``avoid`` (except those in ``keep``)."""
    avoid, keep = set(avoid), set(keep)
    taken = avoid | set(S.elems)
    names = (f"{prefix}{i}" for i in itertools.count())
    out = {}
    for x in S.elems:
        if x in avoid and x not in keep:
            y = next(names)
            while y in taken:
                y = next(names)
            taken.add(y)
            out[x] = y
    return out


def joint_embed(B: FinStructure, C: FinStructure) -> FinStructure:
    """Amalgam over the empty structure; clashing ids of C are renamed first."""
    if B.n != C.n:
        raise AmalgamError("structures have different n", {"n": [B.n, C.n]})
    C2 = C.relabel(fresh_relabelling(C, B.elems))
    return strong_amalgam(empty(B.n), B, C2)


def move_onto(A: FinStructure, C: FinStructure, emb: dict[str, str], avoid: Iterable[str]) -> FinStructure:
    """Copy of C in which the image of the embedding ``emb: A -> C`` carries A's ids.

    Remaining ids of C are renamed away from ``avoid`` and from A.
    """
    inv = {v: k for k, v in emb.items()}
    taken = set(avoid) | set(A.elems) | set(C.elems)
    names = (f"r{i}" for i in itertools.count())
    m = {}
    for x in C.elems:
        if x in inv:
            m[x] = inv[x]
        else:
            y = next(names)
            while y in taken:
                y = next(names)
            taken.add(y)
            m[x] = y
    return C.relabel(m)


# ---------------------------------------------------------------- Fraisse checks

def size_bound(n: int, k: int) -> int:
    return k ** (n + 1) + k


def amalgam_problems(A: FinStructure, B: FinStructure, C: FinStructure,
                     D: Optional[FinStructure] = None) -> list[str]:
    """Everything wrong with D as a strong amalgam of B and C over A (empty list if fine)."""
    if D is None:
        try:
            D = strong_amalgam(A, B, C)
        except (AmalgamError, AssertionError) as exc:
            return [f"construction failed: {exc}"]
    out = []
    v = validate(D)
    if not v:
        out.append(f"amalgam is not a model: {v.detail}")
    if set(D.elems) != set(B.elems) | set(C.elems):
        out.append("amalgam universe differs from B ∪ C")
    if set(B.elems) & set(C.elems) != set(A.elems):
        out.append("copies of B and C meet outside A")
    for name, S in (("B", B), ("C", C)):
        if not D.is_closed(S.elems) or D.restrict(S.elems) != S:
            out.append(f"amalgam restricted to {name} differs from {name}")
    a_objs = [o for o in A.objects]
    for b in B.objects:
        if b in A:
            continue
        for c in C.objects:
            if c in A or not D.E(b, c):
                continue
            if not any(D.E(b, a) for a in a_objs):
                out.append(f"E({b},{c}) in the amalgam without a link through A")
    return out


def _set_partitions(items: Sequence[str]) -> Iterator[list[list[str]]]:
    """Set partitions via restricted growth strings."""
    k = len(items)
    if k == 0:
        yield []
        return

    def rec(i: int, labels: list[int], top: int) -> Iterator[list[int]]:
        if i == k:
            yield labels
            return
        for lab in range(top + 2):
            yield from rec(i + 1, labels + [lab], max(top, lab))

    for labels in rec(1, [0], 0):
        groups: dict[int, list[str]] = {}
        for x, lab in zip(items, labels):
            groups.setdefault(lab, []).append(x)
        yield list(groups.values())


def enumerate_structures(n: int, cap: int, prefix: tuple[str, str] = ("o", "f")) -> Iterator[FinStructure]:
    """Every model of T_n with at most ``cap`` elements, on ids o0.. and f0.."""
    for size in range(cap + 1):
        for n_o in range(size + 1):
            objs = [f"{prefix[0]}{i}" for i in range(n_o)]
            funs = [f"{prefix[1]}{i}" for i in range(size - n_o)]
            tuples = list(itertools.product(funs, repeat=n))
            for groups in _set_partitions(objs):
                slots = [(t, g) for t in tuples for g in groups]
                for choice in itertools.product(*[g for _, g in slots]):
                    table = {}
                    for (t, g), v in zip(slots, choice):
                        for o in g:
                            table[(t, o)] = v
                    yield FinStructure(n, objs, funs, groups, table)


def _closed_subsets(S: FinStructure) -> list[frozenset[str]]:
    seen = set()
    out = []
    elems = S.elems
    for r in range(len(elems) + 1):
        for X in itertools.combinations(elems, r):
            c = closure(S, X)
            if c not in seen:
                seen.add(c)
                out.append(c)
    return out


class _Tally:
    def __init__(self) -> None:
        self.count = 0
        self.witness = None

    def record(self, ok: bool, witness) -> None:
        self.count += 1
        if not ok and self.witness is None:
            self.witness = witness


def _dump(**structs: FinStructure) -> dict:
    return {k: v.to_text() for k, v in structs.items()}


def _check_structure(S: FinStructure, valid: _Tally, hp: _Tally, bound: _Tally, subsets: bool = True) -> bool:
    v = validate(S)
    valid.record(bool(v), {"structure": S.to_text(), "problem": v.detail} if not v else None)
    if not v:
        return False
    if subsets:
        elems = S.elems
        for r in range(len(elems) + 1):
            for X in itertools.combinations(elems, r):
                G = closure(S, X)
                sub = S.restrict(G)
                ok = bool(validate(sub))
                hp.record(ok, {"structure": S.to_text(), "generators": list(X)} if not ok else None)
                ok = len(G) <= size_bound(S.n, len(X))
                bound.record(ok, {"structure": S.to_text(), "generators": list(X),
                                  "generated": sort_ids(G)} if not ok else None)
    return True


def _amalgam_check(A: FinStructure, B: FinStructure, C: FinStructure, tally: _Tally,
                   symmetric: bool = False) -> None:
    probs = amalgam_problems(A, B, C)
    if not probs and symmetric:
        D1, D2 = strong_amalgam(A, B, C), strong_amalgam(A, C, B)
        ids = list(D1.elems)
        if iso_over(D1, ids, D2, ids, A.elems) is None:
            probs.append("swapping B and C changes the amalgam")
    tally.record(not probs, {"problems": probs, **_dump(A=A, B=B, C=C)} if probs else None)


def check_fraisse(n: int, size_cap: int, mode: str = "exhaustive", samples: int = 10_000,
                  seed: int = 0, extra: Sequence[FinStructure] = ()) -> Report:
    """HP, JEP, SAP and the local finiteness bound on a corpus of finite models.

    ``exhaustive`` uses every structure with at most ``size_cap`` elements;
    ``random`` draws ``samples`` triples with at most ``size_cap`` elements
    per structure.  Structures in ``extra`` join the corpus unchecked, so a
    broken table shows up as a failure with that structure as witness.
    """
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" and size_cap > 4:
        raise ValueError("exhaustive mode is limited to size_cap <= 4")
    valid, hp, bound, jep, sap = (_Tally() for _ in range(5))
    if mode == "exhaustive":
        corpus = list(enumerate_structures(n, size_cap))
        good = []
        for S in list(corpus) + list(extra):
            if _check_structure(S, valid, hp, bound):
                good.append(S)
        for B, C in itertools.product(good, repeat=2):
            C2 = C.relabel(fresh_relabelling(C, B.elems))
            _amalgam_check(empty(n), B, C2, jep)
        for B in good:
            for ids in _closed_subsets(B):
                A = B.restrict(ids)
                for C in good:
                    for emb in find_embeddings(A, C):
                        _amalgam_check(A, B, move_onto(A, C, emb, B.elems), sap, symmetric=True)
    else:
        rng = random.Random(seed)
        for S in extra:
            _check_structure(S, valid, hp, bound)
        for _ in range(samples):
            size_b = rng.randint(0, size_cap)
            n_o = rng.randint(0, size_b)
            B = random_structure(n, (n_o, size_b - n_o), rng.randint(1, n_o) if n_o else 0,
                                 rng.randrange(2 ** 32))
            _check_structure(B, valid, hp, bound)
            A = B.restrict(random_closed_subset(B, rng))
            room = size_cap - len(A)
            add_o = rng.randint(0, room)
            add_f = rng.randint(0, room - add_o)
            C = random_extension(A, add_o, add_f, rng, prefix="c")
            C = C.relabel(fresh_relabelling(C, B.elems, keep=A.elems))
            _check_structure(C, valid, hp, bound, subsets=False)
            _amalgam_check(A, B, C, sap)
            _amalgam_check(empty(n), A, B.relabel(fresh_relabelling(B, A.elems)), jep)
    rep = Report("fraisse-check", detail=f"n={n}, cap={size_cap}, mode={mode}")
    rep.add(f"corpus members are models of T_n ({valid.count} structures)", valid.witness is None,
            "eval(f,b) E b and E(b,b') -> eval(f,b) = eval(f,b')", valid.witness)
    rep.add(f"HP: generated substructures are models ({hp.count} subsets)", hp.witness is None,
            "<X> is in K_n for every finite X", hp.witness)
    rep.add(f"uniform local finiteness ({bound.count} subsets)", bound.witness is None,
            "|<X>| <= k^(n+1) + k for |X| = k", bound.witness)
    rep.add(f"JEP via amalgam over the empty structure ({jep.count} pairs)", jep.witness is None,
            "B, C embed jointly into some D in K_n", jep.witness)
    rep.add(f"SAP ({sap.count} amalgamation problems)", sap.witness is None,
            "D|B = B, D|C = C, B ∩ C = A in D, E^D(b,c) -> E(b,a) for some a in A", sap.witness)
    return rep
