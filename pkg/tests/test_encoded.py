from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import U, V, W, corpus_params
from leafage.decompose import TreeModel
from leafage.encoded import EncodedGraph, build, build_full, ceil_log2
from leafage.oracle import gen_model, oracle_graph
from leafage.pathstore import TreePath

# parent edges 1-2, 2-3, 3-4, 4-5, 4-7, 2-6; vertex 1 spans the tree, vertex 2 is {3}
VERBATIM_MISS = TreeModel([0, 1, 2, 3, 4, 2, 4], 1, [list(range(1, 8)), [3]], 4)


def test_worked_tree_components(worked_model):
    res = build_full(worked_model)
    g = res.graph
    v, u, w = (res.new_of_orig[x] for x in (V, U, W))
    assert (v, w, u) == (1, 2, 3)
    assert g.m == 4
    assert [g.store.pathep(h) for h in range(1, 5)] == [(5, 10), (6, 6), (7, 7), (8, 9)]
    assert g.get_size(v) == 2 and g.get_size(w) == 1
    assert [g.get_index_g(i) for i in (1, 2, 3)] == [1, 3, 4]
    assert g.get_index_h(v) == 1
    assert g.alpha(v) == [4] and g.alpha(w) == []
    assert g.vertex_of_h_path(4) == v
    assert g.is_connector(v, 1)
    assert g.get_cpath(TreePath(5, 10), TreePath(8, 9), v, 1) == TreePath(1, 7)
    assert g.adjacency(v, w) and not g.adjacency(u, w) and g.adjacency(u, v)
    assert g.get_nhb(1, 1, 10) == [v]
    assert g.get_nhb(2, 1, 10) == []
    assert g.neighbourhood(w) == [v]
    assert g.neighbourhood(v) == [2, 3]
    assert g.degree(v) == 2


def test_singleton_model():
    g = build(TreeModel([0], 1, [[1]], 2))
    assert g.m == 1 and g.get_size(1) == 1 and g.get_index_g(1) == 1 and g.get_index_h(1) == 1
    assert g.alpha(1) == [] and g.neighbourhood(1) == [] and g.degree(1) == 0
    rep = g.space_report()
    assert rep["total"] == sum(rep[key] for key in ("H", "K", "F", "D", "Pi", "C", "firstFlags", "Y"))
    assert rep["m_H"] == 1
    with pytest.raises(IndexError):
        g.is_connector(1, 1)


def test_errors(worked_model):
    g = build(worked_model)
    with pytest.raises(ValueError):
        g.adjacency(1, 1)
    with pytest.raises(IndexError):
        g.get_size(4)
    with pytest.raises(IndexError):
        g.vertex_of_h_path(5)


def test_verbatim_walk_misses_connector_neighbour():
    res = build_full(VERBATIM_MISS)
    g = res.graph
    big, small = res.new_of_orig[1], res.new_of_orig[2]
    assert oracle_graph(VERBATIM_MISS).adj[0][1]
    assert g.neighbourhood_verbatim(small) == []
    assert g.neighbourhood(small) == [big]
    assert g.adjacency(small, big)


def test_augment_mode_worked(worked_model):
    g = build(worked_model, "augment")
    assert g.neighbourhood(2) == [1]


def _check_encoding(model, odd_mode):
    res = build_full(model, odd_mode)
    g = res.graph
    dec = res.decomposition
    n = g.n
    first = g.first_flags
    assert first.rank(1, g.m) == n
    non_first = sorted(h for i in range(1, n + 1) for h in g.alpha(i))
    assert non_first == [h for h in range(1, g.m + 1) if not first.access(h)]
    for orig in range(1, n + 1):
        i = res.new_of_orig[orig]
        entry = dec[orig - 1]
        assert g.original_id(i) == orig
        assert g.get_size(i) == len(entry.paths) == math.ceil(entry.leaf_count / 2)
        if i < n:
            assert g.get_index_g(i + 1) - g.get_index_g(i) == g.get_size(i)
        paths = g.stored_paths(i)
        assert paths == entry.paths
        assert g.connectors(i, paths) == entry.connectors
        for h in [g.get_index_h(i)] + g.alpha(i):
            assert g.vertex_of_h_path(h) == i
    return g


@given(st.integers(0, 10 ** 6), st.sampled_from(["root-pair", "augment"]))
@settings(max_examples=40, deadline=None)
def test_encoding_consistency_and_oracle(seed, odd_mode):
    n, k, t = corpus_params(seed)
    model = gen_model(n, k, t, seed)
    g = _check_encoding(model, odd_mode)
    oracle = oracle_graph(model)
    res_new = build_full(model, odd_mode).new_of_orig
    degrees = 0
    for a in range(1, n + 1):
        nb = g.neighbourhood(res_new[a])
        assert sorted(g.original_id(x) for x in nb) == oracle.neighbours(a)
        assert len(set(nb)) == len(nb)
        degrees += g.degree(res_new[a])
        for b in range(1, n + 1):
            if a != b:
                assert g.adjacency(res_new[a], res_new[b]) == oracle.adj[a - 1][b - 1]
    assert degrees == 2 * oracle.edge_count()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_get_nhb_matches_record_filter(seed):
    n, k, t = corpus_params(seed)
    res = build_full(gen_model(n, k, t, seed))
    g, tree = res.graph, res.graph.tree
    records = []
    for i in range(1, n + 1):
        paths = g.stored_paths(i)
        entry = res.decomposition[g.original_id(i) - 1]
        last = paths[entry.pair_count - 1]
        records.append((tree.lca(*paths[0]), tree.lca(*last), i))
    rng = random.Random(seed)
    for _ in range(30):
        l = rng.randint(1, tree.n)
        lo = rng.randint(1, tree.n)
        hi = rng.randint(lo, tree.n)
        want = sorted(r for b, s, r in records if b == l and lo <= s <= hi)
        assert sorted(g.get_nhb(l, lo, hi)) == want


def test_serialization_roundtrip_and_determinism():
    model = gen_model(40, 5, 90, 3)
    blob = build(model).to_bytes()
    assert build(model).to_bytes() == blob
    back = EncodedGraph.from_bytes(blob)
    assert back.to_bytes() == blob
    g = build(model)
    for i in range(1, 41):
        assert back.neighbourhood(i) == g.neighbourhood(i)
        assert all(back.adjacency(i, j) == g.adjacency(i, j) for j in range(1, 41) if j != i)


def test_space_components_at_scale():
    g = build(gen_model(1024, 4, 1024, 0))
    rep = g.space_report()
    assert rep["K"] == 1024 * ceil_log2(4)
    assert rep["Pi"] <= 2 * (g.m - g.n) * ceil_log2(g.m)
    assert rep["reference"] == 3 * 1024 * 10
