from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from leafage.decompose import TreeModel

# worked tree W: edges 1-2, 2-3, 3-4, 4-5, 1-6, 6-7, 7-8, 7-9, 1-10
W_PARENTS = [0, 1, 2, 3, 4, 1, 6, 7, 7, 1]
# vertices in file order: v = whole tree, u = {7}, w = {6}
W_SUBTREES = [list(range(1, 11)), [7], [6]]
V, U, W = 1, 2, 3


@pytest.fixture
def worked_model() -> TreeModel:
    return TreeModel(list(W_PARENTS), 1, [list(s) for s in W_SUBTREES], 4)


def corpus_params(seed: int):
    """(n, k, t) for the seeded acceptance corpus."""
    rng = random.Random(seed)
    n = rng.randint(2, 64)
    k = rng.randint(2, 8)
    t = rng.randint(n, 4 * n)
    return n, k, t


@st.composite
def parent_lists(draw, max_nodes=64):
    """Random rooted tree as a parent list over ids 1..n, root 1."""
    n = draw(st.integers(1, max_nodes))
    return [0] + [draw(st.integers(1, v - 1)) for v in range(2, n + 1)]


def naive_lca(parents, a, b):
    def chain(v):
        out = []
        while v:
            out.append(v)
            v = parents[v]
        return out

    up = set(chain(a))
    for v in chain(b):
        if v in up:
            return v
    raise AssertionError("no common ancestor")


def bfs_path(adj, a, b):
    prev = {a: None}
    queue = [a]
    for x in queue:
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    out = set()
    v = b
    while v is not None:
        out.add(v)
        v = prev[v]
    return out
