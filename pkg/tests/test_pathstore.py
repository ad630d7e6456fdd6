from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import parent_lists
from leafage._blob import Reader, Writer
from leafage.pathstore import PathGraphStore, TreePath, build_store, paths_intersect
from leafage.tree import build_prepared


def random_paths(rng, n, count):
    return [TreePath.of(rng.randint(1, n), rng.randint(1, n)) for _ in range(count)]


def test_empty_store():
    tree, _ = build_prepared([0, 1, 1])
    store, order = build_store(tree, [])
    assert store.m == 0 and order == []
    assert store.neighbourhood_pg(1, 3) == []


def test_single_path_single_node():
    tree, _ = build_prepared([0])
    store, _ = build_store(tree, [(1, 1)])
    assert store.pathep(1) == TreePath(1, 1)
    assert store.neighbourhood_pg(1, 1) == [1]
    with pytest.raises(IndexError):
        store.pathep(2)


def test_order_and_pathep():
    tree, _ = build_prepared([0, 1, 2, 3, 4, 1, 6, 7, 7, 1])
    paths = [(8, 9), (10, 5), (7, 7), (6, 6)]
    store, order = build_store(tree, paths)
    assert [store.pathep(u) for u in range(1, 5)] == [(5, 10), (6, 6), (7, 7), (8, 9)]
    assert order == [1, 3, 2, 0]


def test_predicate_examples():
    tree, _ = build_prepared([0, 1, 1, 2, 2, 3, 3])
    assert paths_intersect(tree, 3, 7, 3, 7)
    assert not paths_intersect(tree, 3, 3, 4, 4)
    assert paths_intersect(tree, 3, 4, 2, 2)


def test_invalid_endpoint():
    tree, _ = build_prepared([0, 1])
    with pytest.raises(IndexError):
        build_store(tree, [(1, 3)])


def test_intersection_predicate_against_node_sets():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 64)
        parents = [0] + [rng.randint(1, v - 1) for v in range(2, n + 1)]
        tree, _ = build_prepared(parents)
        paths = random_paths(rng, n, 12)
        nodes = [set(tree.path_nodes(*p)) for p in paths]
        for x in range(len(paths)):
            for y in range(len(paths)):
                got = paths_intersect(tree, *paths[x], *paths[y])
                assert got == bool(nodes[x] & nodes[y])


@given(parent_lists(max_nodes=80), st.integers(0, 60), st.randoms(use_true_random=False))
@settings(max_examples=80)
def test_neighbourhood_matches_filter(parents, count, rng):
    tree, _ = build_prepared(parents)
    n = tree.n
    store, _ = build_store(tree, random_paths(rng, n, count))
    # duplicates are kept and sorted order is total
    for u in range(1, store.m):
        assert tuple(store.pathep(u)) <= tuple(store.pathep(u + 1))
    for _ in range(10):
        q = TreePath.of(rng.randint(1, n), rng.randint(1, n))
        stats = {}
        got = store.neighbourhood_pg(q.s, q.t, stats)
        want = [u for u in range(1, store.m + 1) if store.adjacency_pg(q.s, q.t, *store.pathep(u))]
        assert got == want
        assert stats.get("segments", 0) <= 2 * (int(math.log2(n)) + 1)
        for u in range(1, store.m + 1):
            p = store.pathep(u)
            assert store.adjacency_pg(q.s, q.t, p.s, p.t) == store.adjacency_pg(p.s, p.t, q.s, q.t)


def test_stored_path_reports_itself_and_roundtrips():
    rng = random.Random(3)
    parents = [0] + [rng.randint(1, v - 1) for v in range(2, 101)]
    tree, _ = build_prepared(parents)
    paths = random_paths(rng, 100, 50)
    store, order = build_store(tree, paths)
    for u in range(1, store.m + 1):
        p = store.pathep(u)
        assert p == paths[order[u - 1]]
        assert u in store.neighbourhood_pg(p.s, p.t)
    w = Writer()
    store.write(w)
    back = PathGraphStore.read(Reader(w.getvalue()))
    assert [back.pathep(u) for u in range(1, 51)] == [store.pathep(u) for u in range(1, 51)]
    assert back.neighbourhood_pg(2, 77) == store.neighbourhood_pg(2, 77)
