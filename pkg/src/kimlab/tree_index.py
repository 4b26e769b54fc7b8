"""Finite truncations of the tree family T_alpha.

A node of T_alpha is a function on an end-segment ``[start, alpha)`` of the
levels with natural-number values and finite support.  Level ``alpha - 1`` is
the one adjacent to the root; the root itself is the empty function
(``start == alpha``).  Only finite ``alpha`` is represented, so every node has
finite support automatically; zero entries are never stored.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence


class TreeError(ValueError):
    """Raised on domain errors (mismatched alpha, no room to extend, ...)."""


class Cmp(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True, order=False)
class TreeNode:
    alpha: int
    start: int
    values: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.alpha:
            raise TreeError(f"start {self.start} outside [0, {self.alpha}]")
        seen = set()
        for level, value in self.values:
            if not self.start <= level < self.alpha:
                raise TreeError(f"level {level} outside domain [{self.start}, {self.alpha})")
            if value <= 0:
                raise TreeError("stored values must be positive; zeros are implicit")
            if level in seen:
                raise TreeError(f"duplicate level {level}")
            seen.add(level)
        object.__setattr__(self, "values", tuple(sorted(self.values, reverse=True)))

    @classmethod
    def make(cls, alpha: int, start: int, values: Optional[dict[int, int]] = None) -> "TreeNode":
        """Build a node, silently dropping zero entries."""
        items = tuple((k, v) for k, v in (values or {}).items() if v != 0)
        return cls(alpha, start, items)

    @classmethod
    def from_string(cls, alpha: int, digits: Sequence[int]) -> "TreeNode":
        """Node whose values read from level ``alpha - 1`` downwards are ``digits``."""
        if len(digits) > alpha:
            raise TreeError("string longer than the number of levels")
        start = alpha - len(digits)
        return cls.make(alpha, start, {alpha - 1 - i: d for i, d in enumerate(digits)})

    def value(self, level: int) -> int:
        if not self.start <= level < self.alpha:
            raise TreeError(f"level {level} not in domain")
        for k, v in self.values:
            if k == level:
                return v
        return 0

    def as_dict(self) -> dict[int, int]:
        """Full function including implicit zeros."""
        stored = dict(self.values)
        return {k: stored.get(k, 0) for k in range(self.start, self.alpha)}

    def string(self) -> tuple[int, ...]:
        """Values read from the root-adjacent level down to ``start``."""
        stored = dict(self.values)
        return tuple(stored.get(k, 0) for k in range(self.alpha - 1, self.start - 1, -1))

    @property
    def level(self) -> int:
        return self.start

    @property
    def is_root(self) -> bool:
        return self.start == self.alpha

    def __str__(self) -> str:
        return format_node(self)


@dataclass(frozen=True)
class LevelSet:
    alpha: int
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        levels = tuple(sorted(set(self.levels)))
        if any(not 0 <= k < self.alpha for k in levels):
            raise TreeError(f"levels must lie in [0, {self.alpha})")
        object.__setattr__(self, "levels", levels)

    def __contains__(self, level: object) -> bool:
        return level in self.levels


def _check_alpha(a: TreeNode, b: TreeNode) -> None:
    if a.alpha != b.alpha:
        raise TreeError(f"mismatched alpha: {a.alpha} vs {b.alpha}")


def root(alpha: int) -> TreeNode:
    return TreeNode(alpha, alpha)


def tree_leq(a: TreeNode, b: TreeNode) -> bool:
    """``a`` is below ``b`` in the tree order, i.e. ``a`` is a restriction of ``b``."""
    _check_alpha(a, b)
    if a.start < b.start:
        return False
    return all(a.value(k) == b.value(k) for k in range(a.start, a.alpha))


def tree_lt(a: TreeNode, b: TreeNode) -> bool:
    return a != b and tree_leq(a, b)


def incomparable(a: TreeNode, b: TreeNode) -> bool:
    return not tree_leq(a, b) and not tree_leq(b, a)


def restrict_to(eta: TreeNode, start: int) -> TreeNode:
    """Restriction of ``eta`` to ``[start, alpha)``; ``start`` must be ≥ eta.start."""
    if start < eta.start or start > eta.alpha:
        raise TreeError("restriction must shrink the domain")
    return TreeNode(eta.alpha, start, tuple((k, v) for k, v in eta.values if k >= start))


def meet(a: TreeNode, b: TreeNode) -> TreeNode:
    """Largest common restriction; the root when the nodes disagree right below it."""
    _check_alpha(a, b)
    lo = max(a.start, b.start)
    beta = a.alpha
    for k in range(a.alpha - 1, lo - 1, -1):
        if a.value(k) != b.value(k):
            break
        beta = k
    return restrict_to(a, beta)


def lex_cmp(a: TreeNode, b: TreeNode) -> Cmp:
    _check_alpha(a, b)
    if a == b:
        return Cmp.EQ
    if tree_leq(a, b):
        return Cmp.LT
    if tree_leq(b, a):
        return Cmp.GT
    gamma = meet(a, b).start - 1
    return Cmp.LT if a.value(gamma) < b.value(gamma) else Cmp.GT


def lex_key(eta: TreeNode) -> tuple[int, ...]:
    """Sort key compatible with ``lex_cmp`` (a proper prefix sorts first)."""
    return eta.string()


def enum_key(eta: TreeNode) -> tuple[int, tuple[int, ...]]:
    """Deterministic enumeration order: domain length, then lex."""
    return (eta.alpha - eta.start, lex_key(eta))


def enumerate_tree(alpha: int, branching: int) -> list[TreeNode]:
    """All nodes of T_alpha with values < branching, in enumeration order."""
    if branching < 1:
        raise TreeError("branching must be at least 1")
    out = []
    for length in range(alpha + 1):
        for digits in itertools.product(range(branching), repeat=length):
            out.append(TreeNode.from_string(alpha, digits))
    return sorted(out, key=enum_key)


def restrict(alpha: int, w: LevelSet | Iterable[int], branching: int) -> list[TreeNode]:
    """Nodes whose least level lies in ``w`` and which vanish off ``w``.

    The root is always included (every finite alpha admits the empty function).
    """
    if branching < 1:
        raise TreeError("branching must be at least 1")
    levels = w if isinstance(w, LevelSet) else LevelSet(alpha, tuple(w))
    if levels.alpha != alpha:
        raise TreeError("level set belongs to a different alpha")
    out = [root(alpha)]
    for start in levels.levels:
        free = [k for k in range(start, alpha) if k in levels]
        for vals in itertools.product(range(branching), repeat=len(free)):
            out.append(TreeNode.make(alpha, start, dict(zip(free, vals))))
    return sorted(out, key=enum_key)


def concat_low(eta: TreeNode, i: int) -> TreeNode:
    """Extend ``eta`` one level further from the root with value ``i``."""
    if eta.start == 0:
        raise TreeError("node already reaches level 0")
    return TreeNode.make(eta.alpha, eta.start - 1, {**dict(eta.values), eta.start - 1: i})


def concat_high(i: int, eta: TreeNode) -> TreeNode:
    """Embed ``eta`` into T_{alpha+1} with value ``i`` on the new root-adjacent level."""
    return TreeNode.make(eta.alpha + 1, eta.start, {**dict(eta.values), eta.alpha: i})


def iota(alpha: int, beta: int, eta: TreeNode) -> TreeNode:
    """Canonical inclusion T_alpha -> T_beta: pad levels alpha..beta-1 with zeros."""
    if alpha > beta:
        raise TreeError("iota requires alpha <= beta")
    if eta.alpha != alpha:
        raise TreeError(f"node lives in T_{eta.alpha}, not T_{alpha}")
    return TreeNode(beta, eta.start, eta.values)


def zeta(beta: int, alpha: int) -> TreeNode:
    """All-zeros node with domain ``[beta, alpha)``."""
    if not 0 <= beta < alpha:
        raise TreeError("zeta requires 0 <= beta < alpha")
    return TreeNode(alpha, beta)


_NODE_RE = re.compile(r"^\s*[⟨<]\s*([0-9,\s]*)[⟩>]\s*@\s*(\d+)\s*$")


def format_node(eta: TreeNode) -> str:
    return "⟨" + ",".join(map(str, eta.string())) + f"⟩@{eta.alpha}"


def parse_node(text: str) -> TreeNode:
    """Parse ``⟨i_k,...,i_0⟩@alpha`` (ASCII ``<...>`` accepted too)."""
    m = _NODE_RE.match(text)
    if not m:
        raise TreeError(f"bad node notation: {text!r}")
    body, alpha = m.group(1).strip(), int(m.group(2))
    digits = [int(t) for t in body.split(",")] if body else []
    return TreeNode.from_string(alpha, digits)

