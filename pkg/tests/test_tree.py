from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings

from conftest import bfs_path, naive_lca, parent_lists
from leafage._blob import Reader, Writer
from leafage.tree import MalformedTreeError, PreparedTree, build_prepared, format_tree, parse_tree

BALANCED = [0, 1, 1, 2, 2, 3, 3]


def relabel(parents, label_of):
    """Parent table indexed by label, for the naive oracles."""
    out = [0] * len(parents)
    for v, p in enumerate(parents[1:], start=1):
        out[label_of[v]] = label_of[p] if p else 0
    return out


def test_single_node():
    tree, label_of = build_prepared([0])
    assert tree.n == 1 and label_of[1] == 1
    assert tree.parent(1) is None and tree.child(1, 1) is None


def test_balanced_binary_labels():
    tree, label_of = build_prepared(BALANCED)
    assert label_of[1:] == [1, 2, 5, 3, 4, 6, 7]
    assert tree.lca(3, 4) == 2
    assert tree.child(1, 2) == 5
    assert tree.hp_start(4) == 4
    assert tree.hp_start(3) == 1


def test_chain():
    tree, label_of = build_prepared([0, 1, 2, 3, 4])
    assert label_of[1:] == [1, 2, 3, 4, 5]
    assert tree.child(1, 1) == 2
    assert tree.depth(5) == 4
    assert all(tree.hp_start(v) == 1 for v in range(1, 6))


def test_basic_navigation():
    tree, _ = build_prepared(BALANCED)
    assert tree.parent(1) is None
    assert tree.depth(1) == 0 and tree.depth(tree.child(1, 1)) == 1
    assert tree.lmost_child(2) == 3
    assert tree.lca(6, 6) == 6
    assert all(tree.lca(v, 1) == 1 for v in range(1, 8))
    assert tree.on_path(2, 3, 7) and tree.on_path(1, 3, 7) and not tree.on_path(4, 3, 7)
    with pytest.raises(IndexError):
        tree.lca(0, 3)
    with pytest.raises(IndexError):
        tree.child(8, 1)


@pytest.mark.parametrize("parents", [[0, 0], [2, 1], [0, 3, 2], [0, 5], [1]])
def test_malformed(parents):
    with pytest.raises(MalformedTreeError):
        build_prepared(parents)


def test_declared_root_must_match():
    with pytest.raises(MalformedTreeError):
        build_prepared([0, 1], root=2)


def test_text_format_roundtrip():
    text = format_tree(BALANCED, 1)
    parents, root = parse_tree(text.splitlines())
    assert parents == BALANCED and root == 1
    with pytest.raises(MalformedTreeError, match="line 2"):
        parse_tree(["3 1", "0 1"])


@given(parent_lists(max_nodes=96))
@settings(max_examples=120)
def test_lca_and_structure_against_naive(parents):
    tree, label_of = build_prepared(parents)
    par = relabel([0] + parents, label_of)
    n = tree.n
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            assert tree.lca(a, b) == naive_lca(par, a, b)
    for v in range(1, n + 1):
        # subtree = contiguous label range
        members = [x for x in range(1, n + 1) if naive_lca(par, v, x) == v]
        assert members == list(range(v, v + tree.size(v)))
        kids = tree.children(v)
        if kids:
            assert all(tree.size(kids[0]) >= tree.size(c) for c in kids)
            assert kids[0] == v + 1
        assert (tree.hp_start(v) == v) == (v == 1 or tree.lmost_child(tree.parent(v)) != v)
        assert tree.light_depth(v) <= int(math.log2(n))


@given(parent_lists(max_nodes=40))
@settings(max_examples=60)
def test_on_path_against_bfs(parents):
    tree, _ = build_prepared(parents)
    n = tree.n
    adj = {v: [] for v in range(1, n + 1)}
    for v in range(2, n + 1):
        p = tree.parent(v)
        adj[v].append(p)
        adj[p].append(v)
    for a, b in itertools.combinations_with_replacement(range(1, n + 1), 2):
        nodes = bfs_path(adj, a, b)
        assert sorted(tree.path_nodes(a, b)) == sorted(nodes)
        for x in range(1, n + 1):
            assert tree.on_path(x, a, b) == (x in nodes)


@given(parent_lists(max_nodes=64))
@settings(max_examples=60)
def test_heavy_segments_cover_vertical_path(parents):
    tree, _ = build_prepared(parents)
    for v in range(1, tree.n + 1):
        segs = tree.heavy_segments(1, v)
        covered = [x for lo, hi in segs for x in range(lo, hi + 1)]
        assert sorted(covered) == sorted(tree.path_nodes(1, v))
        assert len(segs) == tree.light_depth(v) + 1


@given(parent_lists(max_nodes=64))
@settings(max_examples=40)
def test_bp_roundtrip(parents):
    tree, _ = build_prepared(parents)
    w = Writer()
    tree.write(w)
    back = PreparedTree.read(Reader(w.getvalue()))
    assert back.bp == tree.bp
    assert tree.size_in_bits() == 2 * tree.n
    assert all(back.parent(v) == tree.parent(v) for v in range(1, tree.n + 1))
