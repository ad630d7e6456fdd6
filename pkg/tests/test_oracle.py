from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import U, V, W, corpus_params
from leafage.decompose import TreeModel, format_model
from leafage.oracle import (
    LBInstance, gen_model, heap_span, lb_check, lb_construct, lb_distinctness, oracle_graph, prune_span,
)


def test_oracle_examples(worked_model):
    disjoint = TreeModel([0, 1, 1], 1, [[1], [2], [3]], 2)
    assert not any(map(any, oracle_graph(disjoint).adj))
    same = TreeModel([0, 1, 1], 1, [[1, 2]] * 3, 2)
    g = oracle_graph(same)
    assert all(g.adj[a][b] == (a != b) for a in range(3) for b in range(3))
    w = oracle_graph(worked_model)
    edges = {(a, b) for a in range(1, 4) for b in w.neighbours(a) if a < b}
    assert edges == {tuple(sorted((V, U))), tuple(sorted((V, W)))}


def test_oracle_relabel_invariance():
    model = gen_model(20, 4, 40, 1)
    perm = list(range(20))[::-1]
    shuffled = TreeModel(model.parents, 1, [model.subtrees[p] for p in perm], 4)
    a, b = oracle_graph(model), oracle_graph(shuffled)
    assert all(b.adj[x][y] == a.adj[perm[x]][perm[y]] for x in range(20) for y in range(20))


def test_gen_singleton_and_determinism():
    m = gen_model(1, 2, 1, 0)
    assert m.parents == [0] and m.subtrees == [[1]]
    assert format_model(gen_model(30, 5, 70, 4)) == format_model(gen_model(30, 5, 70, 4))
    with pytest.raises(ValueError):
        gen_model(3, 1, 5, 0)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=80, deadline=None)
def test_generated_models_validate(seed):
    n, k, t = corpus_params(seed)
    model = gen_model(n, k, t, seed)
    model.validate()
    assert max(model.leaf_counts()) <= k
    g = oracle_graph(model)
    assert all(g.adj[a][b] == g.adj[b][a] and not g.adj[a][a] for a in range(n) for b in range(n))


def test_generator_hits_exact_k():
    model = gen_model(400, 5, 300, 2)
    counts = model.leaf_counts()
    assert counts.count(5) >= 40
    assert sum(len(s) == 1 for s in model.subtrees) >= 40


def test_lb_shape():
    inst = LBInstance(7, 3)
    assert inst.leaf_blocks() == [[4, 5], [6, 7]]
    assert inst.fixed_count == 2
    built = lb_construct(inst, [(4, 5, 6)])
    assert built["fixed"] == [frozenset({1, 2, 4, 5}), frozenset({1, 3, 6, 7})]
    assert built["dependent"][0] == prune_span(7, [4, 5, 6]) == frozenset({1, 2, 3, 4, 5, 6})
    with pytest.raises(ValueError):
        LBInstance(7, 4)
    with pytest.raises(ValueError):
        LBInstance(6, 3)
    with pytest.raises(ValueError):
        lb_construct(inst, [(1, 1, 2)])


def test_sibling_block_span_contains_parent_chain():
    assert heap_span([4, 5]) == frozenset({2, 4, 5})
    assert heap_span([4, 5, 7]) >= {4, 5, 7, 2, 1, 3}


def test_span_matches_pruning_oracle():
    for m in (7, 15):
        for k in (2, 3, 4):
            for nodes in itertools.combinations(range(1, m + 1), k):
                assert heap_span(list(nodes)) == prune_span(m, nodes)


def test_distinctness_counts_match_independent_enumeration():
    fams = list(itertools.combinations(range(1, 8), 3))
    distinct = len({prune_span(7, f) for f in fams})
    rep = lb_check(7, 3, 1)
    assert rep.count == 35 and rep.exhaustive
    assert rep.distinct == distinct
    ok, _ = lb_distinctness(7, 3, [[(1, 2, 3)], [(1, 2, 3)]])
    assert ok
    ok, witness = lb_distinctness(7, 3, [[(1, 3, 4)], [(2, 3, 4)]])
    assert not ok and witness == (((1, 3, 4),), ((2, 3, 4),))


def test_csv_row():
    assert lb_check(7, 2, 1).csv_row() == "7,2,21,yes"
