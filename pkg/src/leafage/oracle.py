"""Brute-force ground truth, random model generation and the lower-bound toy.

Nothing here uses the succinct structures; the oracle works on plain node
sets so it can referee the encoded queries.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .decompose import TreeModel, subtree_shape


@dataclass
class OracleGraph:
    n: int
    adj: List[List[bool]]

    def neighbours(self, v: int) -> List[int]:
        """Neighbours of vertex ``v`` (1-based ids)."""
        return [u + 1 for u, hit in enumerate(self.adj[v - 1]) if hit]

    def edge_count(self) -> int:
        return sum(map(sum, self.adj)) // 2


def oracle_graph(model: TreeModel) -> OracleGraph:
    sets = [frozenset(s) for s in model.subtrees]
    n = len(sets)
    adj = [[False] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if not sets[a].isdisjoint(sets[b]):
                adj[a][b] = adj[b][a] = True
    return OracleGraph(n, adj)


# -- generator ---------------------------------------------------------------


def _grow(rng: random.Random, nbrs: List[List[int]], t: int, k: int, target_size: int,
          target_leaves: Optional[int]) -> List[int]:
    start = rng.randint(1, t)
    members = {start}
    degree = {start: 0}
    leaves = 1
    frontier = list(nbrs[start])
    while frontier and len(members) < target_size:
        if target_leaves is not None and leaves >= target_leaves:
            break
        x = frontier.pop(rng.randrange(len(frontier)))
        if x in members:
            continue
        y = next(u for u in nbrs[x] if u in members)
        gain = 0 if degree[y] == 1 else 1
        if leaves + gain > k:
            continue  # y only gains degree, so x stays rejected
        members.add(x)
        degree[x] = 1
        degree[y] += 1
        leaves += gain
        frontier.extend(u for u in nbrs[x] if u not in members)
    return sorted(members)


def gen_model(n: int, k: int, t: int, seed: int) -> TreeModel:
    """Random tree on ``t`` nodes with ``n`` connected subtrees of at most ``k`` leaves.

    About a fifth of the subtrees are single nodes and a fifth aim for
    exactly ``k`` leaves; the rest grow for a geometric number of steps.
    """
    if n < 1 or k < 2 or t < 1:
        raise ValueError(f"need n >= 1, k >= 2, t >= 1 (got n={n}, k={k}, t={t})")
    rng = random.Random(seed)
    parents = [0] + [rng.randint(1, v - 1) for v in range(2, t + 1)]
    nbrs: List[List[int]] = [[] for _ in range(t + 1)]
    for v, p in enumerate(parents, start=1):
        if p:
            nbrs[v].append(p)
            nbrs[p].append(v)
    mean = max(1.0, min(t / 4, 32.0))
    subtrees = []
    for _ in range(n):
        roll = rng.random()
        if roll < 0.2:
            subtrees.append([rng.randint(1, t)])
        elif roll < 0.4:
            subtrees.append(_grow(rng, nbrs, t, k, t, k))
        else:
            size = 1
            while rng.random() > 1.0 / mean:
                size += 1
            subtrees.append(_grow(rng, nbrs, t, k, size, None))
    return TreeModel(parents, 1, subtrees, k)


# -- lower-bound construction ------------------------------------------------


@dataclass
class LBInstance:
    """Complete binary tree on ``m`` heap-numbered nodes (children ``2c``, ``2c+1``)."""

    m: int
    k: int

    def __post_init__(self) -> None:
        m, k = self.m, self.k
        if m < 1 or (m + 1) & m:
            raise ValueError(f"m={m} is not of the form 2^h - 1")
        if k < 2:
            raise ValueError("k must be at least 2")
        if ((m + 1) // 2) % (k - 1):
            raise ValueError(f"k-1={k - 1} does not divide the {(m + 1) // 2} leaves")

    @property
    def fixed_count(self) -> int:
        return (self.m + 1) // (2 * (self.k - 1))

    def leaves(self) -> List[int]:
        return list(range((self.m + 1) // 2, self.m + 1))

    def leaf_blocks(self) -> List[List[int]]:
        leaves = self.leaves()
        size = self.k - 1
        return [leaves[i:i + size] for i in range(0, len(leaves), size)]

    def parents(self) -> List[int]:
        return [v // 2 for v in range(1, self.m + 1)]


def heap_span(nodes: Sequence[int]) -> FrozenSet[int]:
    """Smallest connected node set of the heap tree containing ``nodes``."""
    top = nodes[0]
    for v in nodes[1:]:
        a, b = top, v
        while a != b:
            if a > b:
                a //= 2
            else:
                b //= 2
        top = a
    out = set()
    for v in nodes:
        while v != top:
            out.add(v)
            v //= 2
    out.add(top)
    return frozenset(out)


def prune_span(m: int, nodes: Sequence[int]) -> FrozenSet[int]:
    """Same as :func:`heap_span` by repeatedly trimming leaves outside ``nodes``."""
    keep = set(nodes)
    alive = set(range(1, m + 1))
    degree = {v: 0 for v in alive}
    for v in alive:
        if v > 1:
            degree[v] += 1
            degree[v // 2] += 1
    queue = [v for v in alive if degree[v] <= 1 and v not in keep]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in (v // 2, 2 * v, 2 * v + 1):
            if u in alive and 1 <= u <= m:
                degree[u] -= 1
                if degree[u] <= 1 and u not in keep:
                    queue.append(u)
    return frozenset(alive)


def lb_construct(inst: LBInstance, family: Sequence[Sequence[int]]) -> Dict[str, list]:
    """Build the colored structure for one family of dependent node sets.

    Every basis vertex is a single node, so a subtree's colored neighbours
    are exactly its node set.
    """
    for nodes in family:
        if len(set(nodes)) != inst.k or not all(1 <= v <= inst.m for v in nodes):
            raise ValueError(f"dependent set {tuple(nodes)} is not {inst.k} distinct nodes of 1..{inst.m}")
    fixed = [heap_span(block + [1]) for block in inst.leaf_blocks()]
    dependent = [heap_span(list(nodes)) for nodes in family]
    return {"fixed": fixed, "dependent": dependent, "colored_neighbours": dependent}


def lb_distinctness(m: int, k: int, sample: Sequence[Sequence[Sequence[int]]]
                    ) -> Tuple[bool, Optional[Tuple[tuple, tuple]]]:
    """Do distinct families always give distinct colored neighbour sets?

    Returns ``(True, None)`` or ``(False, (family_a, family_b))``.
    """
    inst = LBInstance(m, k)
    seen: Dict[tuple, tuple] = {}
    for family in sample:
        key_family = tuple(tuple(sorted(j)) for j in family)
        signature = tuple(lb_construct(inst, family)["colored_neighbours"])
        other = seen.get(signature)
        if other is not None and other != key_family:
            return False, (other, key_family)
        seen.setdefault(signature, key_family)
    return True, None


@dataclass
class LBReport:
    m: int
    k: int
    dependents: int
    count: int
    distinct: int
    exhaustive: bool
    witness: Optional[Tuple[tuple, tuple]]

    @property
    def all_distinct(self) -> bool:
        return self.distinct == self.count

    def csv_row(self) -> str:
        return f"{self.m},{self.k},{self.count},{'yes' if self.all_distinct else 'no'}"


def lb_check(m: int, k: int, dependents: int, limit: int = 10 ** 6, seed: int = 0) -> LBReport:
    """Enumerate (or sample, beyond ``limit``) families and count distinct structures."""
    inst = LBInstance(m, k)
    if dependents < 1:
        raise ValueError("need at least one dependent vertex")
    choices = list(itertools.combinations(range(1, m + 1), k))
    total = len(choices) ** dependents
    if total <= limit:
        families = itertools.product(choices, repeat=dependents)
        exhaustive = True
    else:
        rng = random.Random(seed)
        families = (tuple(rng.choice(choices) for _ in range(dependents)) for _ in range(limit))
        exhaustive = False
    spans = {c: heap_span(list(c)) for c in choices}
    signatures: Dict[tuple, tuple] = {}
    witness = None
    count = 0
    for family in families:
        count += 1
        sig = tuple(spans[c] for c in family)
        prior = signatures.setdefault(sig, family)
        if witness is None and prior != family:
            witness = (prior, family)
    return LBReport(m, k, dependents, count, len(signatures), exhaustive, witness)
