"""Quantifier-free terms, literals and conjunctive diagrams over L_n.

Text grammar (whitespace insignificant)::

    literal := ['!'] atom
    atom    := term '=' term | 'E(' term ',' term ')'
    term    := ident | 'eval(' term {',' term} ';' term ')'

``t != s`` is accepted as sugar for ``!t = s``, ``O(t)`` / ``F(t)`` as sort
atoms, and ``eval(a, b, o)`` without ``;`` takes the last argument as the
O-argument.  A diagram file adds optional ``vars: x:F y:O`` and
``params: z`` header lines; literals are separated by newlines or ``&``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

from .structure import F, O, FinStructure

SORTS = (O, F)

GRAMMAR = """diagram grammar:
  vars: x:F y:O        (optional declarations)
  params: z            (optional template parameters)
  literal := ['!'] atom          one per line, or joined with '&'
  atom    := term '=' term | term '!=' term | 'E(' term ',' term ')'
  term    := ident | 'eval(' term {',' term} ';' term ')'"""


class SortError(ValueError):
    pass


class DiagramSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}")


# ---------------------------------------------------------------- syntax

@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Eval:
    fargs: tuple["Term", ...]
    obj: "Term"

    def __str__(self) -> str:
        return f"eval({','.join(map(str, self.fargs))};{self.obj})"


Term = Union[Var, Const, Eval]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Rel:
    """The equivalence relation E."""
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"E({self.left},{self.right})"


@dataclass(frozen=True)
class SortIs:
    term: Term
    sort: str

    def __str__(self) -> str:
        return f"{self.sort}({self.term})"


Atom = Union[Eq, Rel, SortIs]


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Atom

    def __str__(self) -> str:
        return ("" if self.positive else "!") + str(self.atom)

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.atom)


@dataclass(frozen=True)
class Diagram:
    """A finite conjunction of literals.

    ``params`` names placeholder constants; a diagram with params is a
    template to be instantiated with parameter tuples.
    """
    vars: tuple[tuple[str, str], ...] = ()
    literals: frozenset[Literal] = field(default_factory=frozenset)
    params: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names = [v for v, _ in self.vars]
        if len(set(names)) != len(names):
            raise SortError("duplicate variable declaration")
        for v, s in self.vars:
            if s not in SORTS:
                raise SortError(f"variable {v} has unknown sort {s!r}")
        if set(names) & set(self.params):
            raise SortError("a name is both a variable and a parameter")
        object.__setattr__(self, "literals", frozenset(self.literals))

    @property
    def var_sorts(self) -> dict[str, str]:
        return dict(self.vars)

    def constants(self) -> set[str]:
        out: set[str] = set()
        for lit in self.literals:
            for t in atom_terms(lit.atom):
                out |= term_consts(t)
        return out

    def instantiate(self, values: Mapping[str, str] | Iterable[str]) -> "Diagram":
        """Replace the parameters by element ids (a mapping or a tuple in ``params`` order)."""
        if not isinstance(values, Mapping):
            values = list(values)
            if len(values) != len(self.params):
                raise SortError(f"template takes {len(self.params)} parameters, got {len(values)}")
            values = dict(zip(self.params, values))
        missing = set(self.params) - set(values)
        if missing:
            raise SortError(f"unbound parameters {sorted(missing)}")
        sub = {p: Const(values[p]) for p in self.params}
        lits = frozenset(map_literal(l, lambda t: sub.get(t.name, t) if isinstance(t, Const) else t)
                         for l in self.literals)
        return Diagram(self.vars, lits, ())

    def conj(self, other: "Diagram") -> "Diagram":
        mine = self.var_sorts
        for v, s in other.vars:
            if mine.get(v, s) != s:
                raise SortError(f"variable {v} declared with two sorts")
        merged = tuple(self.vars) + tuple((v, s) for v, s in other.vars if v not in mine)
        params = tuple(self.params) + tuple(p for p in other.params if p not in self.params)
        return Diagram(merged, self.literals | other.literals, params)

    def __str__(self) -> str:
        return print_diagram(self)


def conj_all(diagrams: Iterable[Diagram]) -> Diagram:
    out = Diagram()
    for d in diagrams:
        out = out.conj(d)
    return out


def atom_terms(a: Atom) -> tuple[Term, ...]:
    if isinstance(a, SortIs):
        return (a.term,)
    return (a.left, a.right)


def term_consts(t: Term) -> set[str]:
    if isinstance(t, Const):
        return {t.name}
    if isinstance(t, Eval):
        out = term_consts(t.obj)
        for f in t.fargs:
            out |= term_consts(f)
        return out
    return set()


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Eval):
        out = term_vars(t.obj)
        for f in t.fargs:
            out |= term_vars(f)
        return out
    return set()


def depth(t: Term) -> int:
    if isinstance(t, Eval):
        return 1 + max([depth(t.obj)] + [depth(f) for f in t.fargs])
    return 0


def map_term(t: Term, fn: Callable[[Term], Term]) -> Term:
    if isinstance(t, Eval):
        return Eval(tuple(map_term(f, fn) for f in t.fargs), map_term(t.obj, fn))
    return fn(t)


def map_literal(l: Literal, fn: Callable[[Term], Term]) -> Literal:
    a = l.atom
    if isinstance(a, SortIs):
        return Literal(l.positive, SortIs(map_term(a.term, fn), a.sort))
    return Literal(l.positive, type(a)(map_term(a.left, fn), map_term(a.right, fn)))


# ---------------------------------------------------------------- sorts

ConstSort = Callable[[str], Optional[str]]


def term_sort(t: Term, const_sort: Optional[ConstSort] = None) -> Optional[str]:
    if isinstance(t, Var):
        return t.sort
    if isinstance(t, Eval):
        return O
    return const_sort(t.name) if const_sort else None


def check_term(t: Term, const_sort: Optional[ConstSort] = None, n: Optional[int] = None) -> str | None:
    """Sort of a well-sorted term; raises :class:`SortError` otherwise."""
    if isinstance(t, Eval):
        if n is not None and len(t.fargs) != n:
            raise SortError(f"{t}: eval takes {n} F-arguments")
        for f in t.fargs:
            if check_term(f, const_sort, n) not in (F, None):
                raise SortError(f"{t}: argument {f} is not of sort F")
        if check_term(t.obj, const_sort, n) not in (O, None):
            raise SortError(f"{t}: argument {t.obj} is not of sort O")
        return O
    s = term_sort(t, const_sort)
    if const_sort is not None and isinstance(t, Const) and s is None:
        raise SortError(f"unknown constant {t.name!r}")
    return s


def check_literal(l: Literal, const_sort: Optional[ConstSort] = None, n: Optional[int] = None) -> None:
    a = l.atom
    if isinstance(a, SortIs):
        check_term(a.term, const_sort, n)
        return
    sl, sr = check_term(a.left, const_sort, n), check_term(a.right, const_sort, n)
    if isinstance(a, Rel):
        if sl not in (O, None) or sr not in (O, None):
            raise SortError(f"{a}: E relates O-terms only")
    elif sl and sr and sl != sr:
        raise SortError(f"{a}: equation between sorts {sl} and {sr}")


# ---------------------------------------------------------------- normal forms

def normalize_term(t: Term) -> Term:
    """Collapse nested evals in O-position: ``eval(x; eval(y; z))`` becomes ``eval(x; z)``."""
    check_term(t)
    return _norm(t)


def _norm(t: Term) -> Term:
    if not isinstance(t, Eval):
        return t
    obj = t.obj
    while isinstance(obj, Eval):
        obj = obj.obj
    return Eval(tuple(_norm(f) for f in t.fargs), obj)


def _strip(t: Term) -> Term:
    while isinstance(t, Eval):
        t = t.obj
    return t


def _oriented(a: Term, b: Term) -> tuple[Term, Term]:
    return (a, b) if str(a) <= str(b) else (b, a)


def normalize_literal(l: Literal) -> Literal:
    """Normal form: E only between atoms, equations between normal terms, sides ordered."""
    check_literal(l)
    a = l.atom
    if isinstance(a, Rel):
        return Literal(l.positive, Rel(*_oriented(_strip(a.left), _strip(a.right))))
    if isinstance(a, Eq):
        return Literal(l.positive, Eq(*_oriented(_norm(a.left), _norm(a.right))))
    return Literal(l.positive, SortIs(_norm(a.term), a.sort))


def normalize_diagram(d: Diagram) -> Diagram:
    return Diagram(d.vars, frozenset(normalize_literal(l) for l in d.literals), d.params)


# ---------------------------------------------------------------- semantics

def eval_term(S: FinStructure, asg: Mapping[str, str], t: Term) -> str:
    if isinstance(t, Var):
        if t.name not in asg:
            raise KeyError(f"variable {t.name!r} is unassigned")
        x = asg[t.name]
        if S.sort_of(x) != t.sort:
            raise SortError(f"{t.name} := {x} has the wrong sort")
        return x
    if isinstance(t, Const):
        if t.name not in S:
            raise SortError(f"unknown constant {t.name!r}")
        return t.name
    fs = tuple(eval_term(S, asg, f) for f in t.fargs)
    o = eval_term(S, asg, t.obj)
    if len(fs) != S.n or any(S.sort_of(f) != F for f in fs) or S.sort_of(o) != O:
        raise SortError(f"ill-sorted term {t}")
    return S.table[(fs, o)]


def holds(S: FinStructure, asg: Mapping[str, str], l: Literal) -> bool:
    a = l.atom
    if isinstance(a, SortIs):
        val = S.sort_of(eval_term(S, asg, a.term)) == a.sort
    elif isinstance(a, Eq):
        val = eval_term(S, asg, a.left) == eval_term(S, asg, a.right)
    else:
        x, y = eval_term(S, asg, a.left), eval_term(S, asg, a.right)
        if S.sort_of(x) != O or S.sort_of(y) != O:
            raise SortError(f"{a}: E relates O-elements only")
        val = S.E(x, y)
    return val == l.positive


def holds_all(S: FinStructure, asg: Mapping[str, str], d: Diagram) -> bool:
    return all(holds(S, asg, l) for l in d.literals)


# ---------------------------------------------------------------- printing

def print_literal(l: Literal) -> str:
    return str(l)


def print_diagram(d: Diagram) -> str:
    lines = []
    if d.vars:
        lines.append("vars: " + " ".join(f"{v}:{s}" for v, s in d.vars))
    if d.params:
        lines.append("params: " + " ".join(d.params))
    lines.extend(sorted(str(l) for l in d.literals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>!=|[!=(),;&|]))")


class _Lexer:
    def __init__(self, text: str, line: int, col0: int = 0):
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                col = col0 + len(text[pos:]) - len(text[pos:].lstrip()) + pos + 1
                raise DiagramSyntaxError(f"unexpected character {text[col - col0 - 1]!r}", line, col)
            kind = "ident" if m.group("ident") else "op"
            val = m.group(kind)
            self.toks.append((kind, val, col0 + m.start(kind) + 1))
            pos = m.end()
        self.i = 0
        self.line = line
        self.end_col = col0 + len(text) + 1

    def peek(self, k: int = 0) -> Optional[tuple[str, str, int]]:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise DiagramSyntaxError("unexpected end of input", self.line, self.end_col)
        self.i += 1
        return tok

    def expect(self, val: str) -> None:
        kind, v, col = self.next()
        if v != val:
            raise DiagramSyntaxError(f"expected {val!r}, found {v!r}", self.line, col)

    def error(self, msg: str) -> DiagramSyntaxError:
        tok = self.peek()
        return DiagramSyntaxError(msg, self.line, tok[2] if tok else self.end_col)


def _parse_term(lx: _Lexer, var_sorts: Mapping[str, str]) -> Term:
    kind, val, col = lx.next()
    if kind != "ident":
        raise DiagramSyntaxError(f"expected a term, found {val!r}", lx.line, col)
    nxt = lx.peek()
    if val == "eval" and nxt is not None and nxt[1] == "(":
        lx.next()
        args = [_parse_term(lx, var_sorts)]
        obj: Optional[Term] = None
        while True:
            k, v, c = lx.next()
            if v == ",":
                args.append(_parse_term(lx, var_sorts))
            elif v == ";":
                obj = _parse_term(lx, var_sorts)
                lx.expect(")")
                break
            elif v == ")":
                break
            else:
                raise DiagramSyntaxError(f"unexpected {v!r} in eval", lx.line, c)
        if obj is None:
            if len(args) < 2:
                raise DiagramSyntaxError("eval needs F-arguments and an O-argument", lx.line, col)
            obj = args.pop()
        return Eval(tuple(args), obj)
    if val in var_sorts:
        return Var(val, var_sorts[val])
    return Const(val)


def _parse_literal(lx: _Lexer, var_sorts: Mapping[str, str]) -> Literal:
    positive = True
    tok = lx.peek()
    if tok is not None and tok[1] == "!":
        lx.next()
        positive = False
    tok = lx.peek()
    nxt = lx.peek(1)
    if tok is not None and tok[0] == "ident" and nxt is not None and nxt[1] == "(" \
            and tok[1] in ("E", O, F):
        lx.next()
        lx.next()
        first = _parse_term(lx, var_sorts)
        if tok[1] == "E":
            lx.expect(",")
            second = _parse_term(lx, var_sorts)
            lx.expect(")")
            return Literal(positive, Rel(first, second))
        lx.expect(")")
        return Literal(positive, SortIs(first, tok[1]))
    left = _parse_term(lx, var_sorts)
    k, v, c = lx.next()
    if v == "!=":
        positive = not positive
    elif v != "=":
        raise DiagramSyntaxError(f"expected '=', found {v!r}", lx.line, c)
    right = _parse_term(lx, var_sorts)
    return Literal(positive, Eq(left, right))


def parse_literal(text: str, var_sorts: Mapping[str, str] = {}) -> Literal:
    lx = _Lexer(text, 1)
    lit = _parse_literal(lx, var_sorts)
    if lx.peek() is not None:
        raise lx.error("trailing input after literal")
    return lit


def parse_term(text: str, var_sorts: Mapping[str, str] = {}) -> Term:
    lx = _Lexer(text, 1)
    t = _parse_term(lx, var_sorts)
    if lx.peek() is not None:
        raise lx.error("trailing input after term")
    return t


def _decls(body: str, lineno: int, col0: int) -> list[tuple[str, str]]:
    out = []
    for m in re.finditer(r"\S+", body):
        dm = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([OF])", m.group(0))
        if not dm:
            raise DiagramSyntaxError(f"bad declaration {m.group(0)!r} (want name:O or name:F)",
                                     lineno, col0 + m.start() + 1)
        out.append((dm.group(1), dm.group(2)))
    return out


def parse_diagram(text: str, var_sorts: Optional[Mapping[str, str]] = None) -> Diagram:
    """Parse a conjunctive diagram; disjunction is rejected."""
    decls: list[tuple[str, str]] = list((var_sorts or {}).items())
    params: list[str] = []
    body: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"\s*(vars|params)\s*:(.*)", line)
        if m:
            col0 = m.start(2)
            if m.group(1) == "vars":
                decls.extend(_decls(m.group(2), lineno, col0))
            else:
                for pm in re.finditer(r"\S+", m.group(2)):
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", pm.group(0)):
                        raise DiagramSyntaxError(f"bad parameter name {pm.group(0)!r}",
                                                 lineno, col0 + pm.start() + 1)
                    params.append(pm.group(0))
            continue
        body.append((lineno, line))
    sorts = dict(decls)
    if len(sorts) != len(decls):
        raise DiagramSyntaxError("duplicate variable declaration", 1, 1)
    lits = []
    arity: Optional[int] = None
    for lineno, line in body:
        lx = _Lexer(line, lineno)
        while True:
            lit = _parse_literal(lx, sorts)
            for t in atom_terms(lit.atom):
                for k in _eval_arities(t):
                    if arity is None:
                        arity = k
                    elif k != arity:
                        raise DiagramSyntaxError(f"eval used with {k} and {arity} F-arguments", lineno, 1)
            try:
                check_literal(lit)
            except SortError as exc:
                raise DiagramSyntaxError(str(exc), lineno, 1) from None
            lits.append(lit)
            tok = lx.peek()
            if tok is None:
                break
            if tok[1] == "|":
                raise DiagramSyntaxError(
                    "disjunction is not allowed in a diagram; use a list of diagrams", lineno, tok[2])
            if tok[1] != "&":
                raise lx.error(f"unexpected {tok[1]!r} after literal")
            lx.next()
    try:
        return Diagram(tuple(decls), frozenset(lits), tuple(params))
    except SortError as exc:
        raise DiagramSyntaxError(str(exc), 1, 1) from None


def _eval_arities(t: Term) -> list[int]:
    if isinstance(t, Eval):
        out = [len(t.fargs)] + _eval_arities(t.obj)
        for f in t.fargs:
            out += _eval_arities(f)
        return out
    return []


def load_diagram(path: str) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(fh.read())


def bind(d: Diagram, S: FinStructure) -> None:
    """Check a parameter-free diagram against a base structure; raises SortError."""
    if d.params:
        raise SortError(f"uninstantiated parameters {list(d.params)}")
    for lit in d.literals:
        check_literal(lit, S.sort_of, S.n)
