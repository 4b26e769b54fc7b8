import functools
import itertools

import pytest

from kimlab.tree_index import (Cmp, LevelSet, TreeError, TreeNode, concat_high, concat_low, enumerate_tree,
                               format_node, incomparable, iota, lex_cmp, meet, parse_node, restrict, root,
                               tree_leq, zeta)


def node(alpha, start, values=None):
    return TreeNode.make(alpha, start, values or {})


# ---------------------------------------------------------------- brute-force ω^{≤n}

def strings(n, b):
    """All sequences of length <= n over range(b)."""
    return [s for k in range(n + 1) for s in itertools.product(range(b), repeat=k)]


def s_leq(s, t):
    return len(s) <= len(t) and t[:len(s)] == s


def s_meet(s, t):
    k = 0
    while k < min(len(s), len(t)) and s[k] == t[k]:
        k += 1
    return s[:k]


def s_lex(s, t):
    if s == t:
        return 0
    if s_leq(s, t):
        return -1
    if s_leq(t, s):
        return 1
    k = len(s_meet(s, t))
    return -1 if s[k] < t[k] else 1


SIZES = [(a, b) for a in range(5) for b in range(1, 4)]


@pytest.mark.parametrize("alpha,b", SIZES)
def test_isomorphism_with_strings(alpha, b):
    nodes = enumerate_tree(alpha, b)
    ss = strings(alpha, b)
    assert len(nodes) == len(ss) == sum(b ** k for k in range(alpha + 1))
    phi = {eta: eta.string() for eta in nodes}
    assert set(phi.values()) == set(ss)
    for x, y in itertools.product(nodes, repeat=2):
        assert tree_leq(x, y) == s_leq(phi[x], phi[y])
        assert phi[meet(x, y)] == s_meet(phi[x], phi[y])
        assert int(lex_cmp(x, y)) == s_lex(phi[x], phi[y])


@pytest.mark.parametrize("alpha,b", SIZES)
def test_order_laws(alpha, b):
    nodes = enumerate_tree(alpha, b)
    idx = range(len(nodes))
    leq = [[tree_leq(x, y) for y in nodes] for x in nodes]
    lex = [[lex_cmp(x, y) for y in nodes] for x in nodes]
    pos = {x: i for i, x in enumerate(nodes)}
    mt = [[pos[meet(x, y)] for y in nodes] for x in nodes]
    down = [[z for z in idx if leq[z][x]] for x in idx]
    for i in idx:
        assert leq[i][i]
        for j in idx:
            if leq[i][j] and leq[j][i]:
                assert i == j
            if leq[i][j]:
                assert all(leq[i][k] for k in idx if leq[j][k])
                assert lex[i][j] != Cmp.GT
            m = mt[i][j]
            assert m == mt[j][i] and leq[m][i] and leq[m][j]
            # meet is the greatest lower bound
            assert set(down[i]) & set(down[j]) == set(down[m])
            assert (lex[i][j] == Cmp.EQ) == (i == j)
            assert lex[j][i] == Cmp(-int(lex[i][j]))
    # a total order: sorting by the comparison gives a chain consistent with every pair
    order = sorted(idx, key=functools.cmp_to_key(lambda i, j: int(lex[i][j])))
    rank = {i: r for r, i in enumerate(order)}
    for i in idx:
        for j in idx:
            assert (rank[i] < rank[j]) == (lex[i][j] == Cmp.LT)


def test_iota_composition():
    for a in range(3):
        for eta in enumerate_tree(a, 3):
            for beta in range(a, 5):
                for gamma in range(beta, 5):
                    assert iota(beta, gamma, iota(a, beta, eta)) == iota(a, gamma, eta)
            assert iota(a, a, eta) == eta


def test_leq_examples():
    assert tree_leq(zeta(1, 2), zeta(0, 2))
    assert tree_leq(node(2, 1, {1: 1}), node(2, 0, {1: 1, 0: 5}))
    assert not tree_leq(node(2, 1, {1: 1}), node(2, 0, {0: 5}))
    with pytest.raises(TreeError):
        tree_leq(root(1), root(2))


def test_meet_examples():
    x = node(2, 0, {1: 1, 0: 3})
    assert meet(x, x) == x
    assert meet(node(2, 0, {1: 1}), node(2, 0, {1: 1, 0: 3})) == node(2, 1, {1: 1})
    assert meet(node(2, 1, {1: 1}), node(2, 1, {1: 2})) == root(2)


def test_lex_examples():
    assert lex_cmp(zeta(1, 2), zeta(0, 2)) == Cmp.LT
    assert lex_cmp(TreeNode.from_string(1, [0]), TreeNode.from_string(1, [1])) == Cmp.LT
    nodes = enumerate_tree(2, 3)
    assert len(nodes) == 13
    chain = sorted(nodes, key=lambda e: e.string())
    for x, y in zip(chain, chain[1:]):
        assert lex_cmp(x, y) == Cmp.LT


def test_restrict_examples():
    for n in range(4):
        for b in range(1, 4):
            assert len(restrict(n, range(n), b)) == sum(b ** k for k in range(n + 1))
    assert restrict(3, [], 2) == [root(3)]
    got = restrict(3, LevelSet(3, (0, 2)), 2)
    assert len(got) == 7
    brute = [e for e in enumerate_tree(3, 2)
             if (e.is_root or e.start in (0, 2)) and all(e.value(k) == 0 for k in range(e.start, 3) if k == 1)]
    assert set(got) == set(brute)


def test_concat_examples():
    assert concat_low(zeta(1, 2), 0) == zeta(0, 2)
    assert concat_high(0, root(0)) == TreeNode.from_string(1, [0])
    assert concat_low(node(3, 2, {2: 1}), 4) == node(3, 1, {2: 1, 1: 4})
    with pytest.raises(TreeError):
        concat_low(zeta(0, 2), 1)


def test_iota_zeta_examples():
    # the new levels 1 and 2 are padded with zeros; level 0 keeps its value
    assert iota(1, 3, TreeNode.from_string(1, [2])) == node(3, 0, {0: 2})
    with pytest.raises(TreeError):
        iota(3, 1, root(3))
    assert zeta(2, 3) == TreeNode(3, 2)
    assert zeta(2, 3).values == ()
    for a in range(1, 6):
        for b in range(a):
            assert zeta(b, a).level == b
            assert tree_leq(zeta(b, a), zeta(0, a))
    with pytest.raises(TreeError):
        zeta(3, 3)


def test_node_invariants():
    with pytest.raises(TreeError):
        TreeNode(2, 0, ((0, 0),))
    with pytest.raises(TreeError):
        TreeNode(2, 1, ((0, 1),))
    with pytest.raises(TreeError):
        TreeNode(2, 3)
    assert node(2, 0, {0: 0}).values == ()


def test_notation_round_trip():
    for e in enumerate_tree(3, 3):
        assert parse_node(format_node(e)) == e
    assert parse_node("<1, 0>@3") == node(3, 1, {2: 1})
    assert incomparable(TreeNode.from_string(2, [0]), TreeNode.from_string(2, [1]))
