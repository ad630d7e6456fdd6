"""Tree models and their decomposition into nested leaf-to-leaf paths.

A subtree with leaves ``l_1 < ... < l_K`` (preorder) is covered by the paths
``(l_j, l_{K-j+1})``, which nest inside each other, plus the vertical
"connector" paths joining the apexes of consecutive disjoint paths.  When
``K`` is odd and at least 3 the middle leaf is joined to the subtree apex by
one extra path, placed last.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from .pathstore import TreePath, paths_intersect
from .tree import MalformedTreeError, PreparedTree, build_prepared, format_tree, parse_tree

ODD_MODES = ("root-pair", "augment")


class ModelError(ValueError):
    """Tree model fails validation (bad ids, disconnected subtree, too many leaves)."""


def subtree_shape(parent_of: Sequence[int], nodes: Iterable[int]) -> Tuple[int, List[int]]:
    """Return ``(top, leaves)`` of a connected node set.

    ``parent_of[v]`` is the parent of ``v`` (0 for the root).  Leaves are
    nodes of degree at most one inside the set, listed in ascending id order.
    Raises :class:`ModelError` when the set is empty or disconnected.
    """
    members = set(nodes)
    if not members:
        raise ModelError("empty subtree")
    tops = [v for v in members if parent_of[v] not in members]
    if len(tops) != 1:
        raise ModelError("subtree is not connected")
    degree = dict.fromkeys(members, 0)
    for v in members:
        p = parent_of[v]
        if p in members:
            degree[v] += 1
            degree[p] += 1
    return tops[0], sorted(v for v, d in degree.items() if d <= 1)


@dataclass
class TreeModel:
    parents: List[int]
    root: int
    subtrees: List[List[int]]
    k: int

    @property
    def n_nodes(self) -> int:
        return len(self.parents)

    @property
    def n_vertices(self) -> int:
        return len(self.subtrees)

    def parent_of(self) -> List[int]:
        return [0] + list(self.parents)

    def leaf_counts(self) -> List[int]:
        par = self.parent_of()
        return [len(subtree_shape(par, s)[1]) for s in self.subtrees]

    def validate(self, first_vertex_line: int = 1) -> None:
        """Check ids, connectivity and the leaf bound; errors name the line."""
        build_prepared(self.parents, self.root)
        if self.k < 1:
            raise ModelError(f"line {first_vertex_line - 1}: k must be positive")
        par = self.parent_of()
        n = self.n_nodes
        for idx, nodes in enumerate(self.subtrees):
            line = first_vertex_line + idx
            bad = [v for v in nodes if not 1 <= v <= n]
            if bad:
                raise ModelError(f"line {line}: node id {bad[0]} outside 1..{n}")
            if len(set(nodes)) != len(nodes):
                raise ModelError(f"line {line}: repeated node id")
            try:
                _, leaves = subtree_shape(par, nodes)
            except ModelError as exc:
                raise ModelError(f"line {line}: {exc}") from None
            if len(leaves) > self.k:
                raise ModelError(f"line {line}: {len(leaves)} leaves exceeds k={self.k}")


def parse_model(text: str) -> TreeModel:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    try:
        parents, root = parse_tree(lines[:2])
    except MalformedTreeError as exc:
        raise ModelError(str(exc)) from None
    if len(lines) < 3:
        raise ModelError("line 3: expected 'n_vertices k'")
    head = lines[2].split()
    try:
        if len(head) != 2:
            raise ValueError("expected 'n_vertices k'")
        count, k = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ModelError(f"line 3: {exc}") from None
    body = lines[3:]
    if len(body) != count:
        raise ModelError(f"line {4 + len(body)}: expected {count} vertex lines, found {len(body)}")
    subtrees = []
    for offset, line in enumerate(body):
        try:
            subtrees.append([int(x) for x in line.split()])
        except ValueError as exc:
            raise ModelError(f"line {4 + offset}: {exc}") from None
    model = TreeModel(parents, root, subtrees, k)
    try:
        model.validate(first_vertex_line=4)
    except MalformedTreeError as exc:
        raise ModelError(f"line 2: {exc}") from None
    return model


def format_model(model: TreeModel) -> str:
    out = [format_tree(model.parents, model.root), f"{model.n_vertices} {model.k}\n"]
    out.extend(" ".join(map(str, sorted(s))) + "\n" for s in model.subtrees)
    return "".join(out)


def normalize_even_leaves(model: TreeModel) -> TreeModel:
    """Give every subtree with an odd leaf count >= 3 an even count.

    Two fresh children are hung below the middle leaf (preorder) of each such
    subtree and added to it.  Subtrees that pick the same host leaf share the
    same fresh pair, so the tree at most triples in size; adjacency is
    unchanged because those subtrees already share the host leaf.
    """
    tree, label_of = build_prepared(model.parents, model.root)
    par = model.parent_of()
    parents = list(model.parents)
    fresh = {}
    subtrees = []
    for nodes in model.subtrees:
        _, leaves = subtree_shape(par, nodes)
        nodes = list(nodes)
        if len(leaves) >= 3 and len(leaves) % 2 == 1:
            host = sorted(leaves, key=lambda v: label_of[v])[len(leaves) // 2]
            if host not in fresh:
                parents.extend([host, host])
                fresh[host] = (len(parents) - 1, len(parents))
            nodes.extend(fresh[host])
        subtrees.append(sorted(nodes))
    out = TreeModel(parents, model.root, subtrees, model.k)
    if subtrees:
        out.k = max(model.k, max(out.leaf_counts()))
    return out


def get_paths(tree: PreparedTree, labels: Iterable[int]) -> List[TreePath]:
    """Stored paths of a connected label set, outermost first."""
    par = tree.parent_table()
    top, leaves = subtree_shape(par, labels)
    if len(leaves) == 1:
        return [TreePath(top, top)]
    count = len(leaves)
    paths = [TreePath.of(leaves[j], leaves[count - 1 - j]) for j in range(count // 2)]
    if count % 2:
        paths.append(TreePath.of(top, leaves[count // 2]))
    return paths


def precede(p: TreePath, q: TreePath) -> bool:
    """True when ``p`` encloses ``q`` in label order."""
    return p.s <= q.s <= q.t <= p.t


def connector(tree: PreparedTree, p: TreePath, q: TreePath) -> Optional[TreePath]:
    """Apex-to-apex path joining two consecutive stored paths, or None if they meet."""
    if paths_intersect(tree, p.s, p.t, q.s, q.t):
        return None
    if not precede(p, q):
        raise ValueError(f"{p} does not enclose {q}")
    return TreePath.of(tree.lca(p.s, p.t), tree.lca(q.s, q.t))


@dataclass
class VertexPaths:
    paths: List[TreePath]
    leaf_count: int
    connectors: List[Optional[TreePath]] = field(default_factory=list)

    @property
    def pair_count(self) -> int:
        """Number of leaf-to-leaf paths (excludes the odd middle path)."""
        if self.leaf_count <= 1:
            return 1
        return self.leaf_count // 2


@dataclass
class PathDecomposition:
    vertices: List[VertexPaths]

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, i: int) -> VertexPaths:
        return self.vertices[i]


def decompose(tree: PreparedTree, label_sets: Sequence[Iterable[int]]) -> PathDecomposition:
    out = []
    par = tree.parent_table()
    for labels in label_sets:
        labels = list(labels)
        _, leaves = subtree_shape(par, labels)
        paths = get_paths(tree, labels)
        links = [connector(tree, paths[j], paths[j + 1]) for j in range(len(paths) - 1)]
        out.append(VertexPaths(paths, len(leaves), links))
    return PathDecomposition(out)


def reconstruct_subtree(tree: PreparedTree, decomposition: PathDecomposition, i: int) -> Set[int]:
    """Union of the stored paths and connectors of vertex ``i`` (0-based)."""
    entry = decomposition[i]
    nodes: Set[int] = set()
    for p in list(entry.paths) + [c for c in entry.connectors if c is not None]:
        nodes.update(tree.path_nodes(p.s, p.t))
    return nodes


def prepare_model(model: TreeModel, odd_mode: str = "root-pair"):
    """Normalize (if asked), build the prepared tree and map subtrees to labels.

    Returns ``(model_used, tree, label_of, label_sets)``.
    """
    if odd_mode not in ODD_MODES:
        raise ValueError(f"unknown odd-leaf mode {odd_mode!r}")
    if odd_mode == "augment":
        model = normalize_even_leaves(model)
    tree, label_of = build_prepared(model.parents, model.root)
    label_sets = [sorted(label_of[v] for v in s) for s in model.subtrees]
    return model, tree, label_of, label_sets
