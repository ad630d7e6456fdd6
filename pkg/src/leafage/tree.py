"""Rooted ordinal host tree with heavy-first child order and preorder labels.

After :func:`build_prepared` every node is addressed by its preorder label
``1..n``.  The first child of each internal node is its heavy child, so a
heavy path occupies a contiguous label range and the subtree of ``v`` is the
label range ``[v, v + size(v) - 1]``.

The persistent form is the balanced-parentheses (BP) bit sequence; navigation
tables (parent, depth, sizes, heavy-path heads, an RMQ table for lca) are
derived from it on load.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from ._blob import Reader, Writer
from .succinct import BitVector


class MalformedTreeError(ValueError):
    """Parent list does not describe a single rooted tree."""


class PreparedTree:
    __slots__ = ("n", "_bp", "_parent", "_size", "_depth", "_head", "_children", "_rmq")

    def __init__(self, bp: BitVector) -> None:
        self._bp = bp
        self._decode()

    # -- construction -----------------------------------------------------

    def _decode(self) -> None:
        bits = self._bp.bits()
        n = len(bits) // 2
        parent = [0] * (n + 1)
        depth = [0] * (n + 1)
        size = [1] * (n + 1)
        children: List[List[int]] = [[] for _ in range(n + 1)]
        stack: List[int] = []
        label = 0
        for b in bits:
            if b:
                label += 1
                if stack:
                    p = stack[-1]
                    parent[label] = p
                    depth[label] = depth[p] + 1
                    children[p].append(label)
                stack.append(label)
            else:
                v = stack.pop()
                if stack:
                    size[stack[-1]] += size[v]
        if stack or label != n:
            raise MalformedTreeError("unbalanced parentheses sequence")
        head = [0] * (n + 1)
        for v in range(1, n + 1):
            p = parent[v]
            head[v] = head[p] if p and children[p][0] == v else v
        self.n = n
        self._parent = parent
        self._depth = depth
        self._size = size
        self._children = children
        self._head = head
        self._rmq = _build_rmq(depth, n)

    # -- navigation -------------------------------------------------------

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise IndexError(f"node label {v} outside 1..{self.n}")

    @property
    def root(self) -> int:
        return 1

    def parent(self, v: int) -> Optional[int]:
        self._check(v)
        return self._parent[v] or None

    def parent_table(self) -> List[int]:
        """``table[v]`` is the parent label of ``v`` (0 for the root); read-only."""
        return self._parent

    def depth(self, v: int) -> int:
        self._check(v)
        return self._depth[v]

    def size(self, v: int) -> int:
        self._check(v)
        return self._size[v]

    def subtree_end(self, v: int) -> int:
        """Largest label inside the subtree of ``v``."""
        self._check(v)
        return v + self._size[v] - 1

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._children[v])

    def children(self, v: int) -> Tuple[int, ...]:
        self._check(v)
        return tuple(self._children[v])

    def child(self, v: int, q: int) -> Optional[int]:
        """The ``q``-th child of ``v`` (1-based) or ``None``."""
        self._check(v)
        kids = self._children[v]
        return kids[q - 1] if 1 <= q <= len(kids) else None

    def lmost_child(self, v: int) -> Optional[int]:
        return self.child(v, 1)

    def hp_start(self, v: int) -> int:
        """Shallowest node of the heavy path through ``v``."""
        self._check(v)
        return self._head[v]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when ``a`` is ``b`` or an ancestor of ``b``."""
        return a <= b < a + self._size[a]

    def lca(self, i: int, j: int) -> int:
        self._check(i)
        self._check(j)
        if i > j:
            i, j = j, i
        if j < i + self._size[i]:
            return i
        # shallowest node in (i, j] is a child of the lca
        return self._parent[_rmq_query(self._rmq, self._depth, i + 1, j)]

    def on_path(self, x: int, a: int, b: int) -> bool:
        """Does ``x`` lie on the tree path between ``a`` and ``b``?"""
        self._check(x)
        apex = self.lca(a, b)
        return self.is_ancestor(apex, x) and (self.is_ancestor(x, a) or self.is_ancestor(x, b))

    def path_nodes(self, a: int, b: int) -> List[int]:
        """Labels on the path between ``a`` and ``b`` (unordered)."""
        apex = self.lca(a, b)
        out = [apex]
        for end in (a, b):
            v = end
            while v != apex:
                out.append(v)
                v = self._parent[v]
        return out

    def heavy_segments(self, top: int, bottom: int) -> List[Tuple[int, int]]:
        """Split the vertical path ``top``..``bottom`` into heavy-path pieces.

        Each piece is a contiguous label range ``(lo, hi)``; ``top`` must be
        an ancestor of ``bottom``.
        """
        if not self.is_ancestor(top, bottom):
            raise ValueError(f"{top} is not an ancestor of {bottom}")
        out = []
        v = bottom
        head = self._head
        while head[v] > top:
            out.append((head[v], v))
            v = self._parent[head[v]]
        out.append((top, v))
        return out

    def light_depth(self, v: int) -> int:
        """Number of light edges on the root path of ``v``."""
        self._check(v)
        count = 0
        while self._head[v] != 1:
            count += 1
            v = self._parent[self._head[v]]
        return count

    # -- persistence ------------------------------------------------------

    @property
    def bp(self) -> BitVector:
        return self._bp

    def size_in_bits(self) -> int:
        # the BP sequence is the persistent part; lca tables are rebuilt on load
        return len(self._bp)

    def write(self, w: Writer) -> None:
        w.tag(b"TREE")
        self._bp.write(w)

    @classmethod
    def read(cls, r: Reader) -> "PreparedTree":
        r.tag(b"TREE")
        return cls(BitVector.read(r))


def _build_rmq(depth: Sequence[int], n: int) -> List[List[int]]:
    # sparse table of argmin(depth) over labels; leftmost wins ties
    table = [list(range(n + 1))]
    span = 1
    while 2 * span <= n:
        prev = table[-1]
        row = prev[:]
        for i in range(1, n - 2 * span + 2):
            a, b = prev[i], prev[i + span]
            row[i] = b if depth[b] < depth[a] else a
        table.append(row)
        span *= 2
    return table


def _rmq_query(table: List[List[int]], depth: Sequence[int], lo: int, hi: int) -> int:
    k = (hi - lo + 1).bit_length() - 1
    a = table[k][lo]
    b = table[k][hi - (1 << k) + 1]
    return b if depth[b] < depth[a] else a


def build_prepared(parents: Sequence[int], root: Optional[int] = None) -> Tuple[PreparedTree, List[int]]:
    """Heavy-first ordinal tree from a parent list over original ids ``1..n``.

    ``parents[i - 1]`` is the parent of node ``i`` (0 for the root).  Returns
    the prepared tree and ``label_of`` with ``label_of[orig] = preorder label``
    (index 0 unused).  The heavy child is the one with the largest subtree,
    ties going to the smallest original id; light children follow in
    original-id order.
    """
    n = len(parents)
    if n == 0:
        raise MalformedTreeError("tree has no nodes")
    roots = [i + 1 for i, p in enumerate(parents) if p == 0]
    if len(roots) != 1:
        raise MalformedTreeError(f"expected exactly one root, found {len(roots)}")
    if root is not None and roots[0] != root:
        raise MalformedTreeError(f"declared root {root} but node {roots[0]} has no parent")
    root = roots[0]
    kids: List[List[int]] = [[] for _ in range(n + 1)]
    for i, p in enumerate(parents, start=1):
        if p == 0:
            continue
        if not 1 <= p <= n or p == i:
            raise MalformedTreeError(f"node {i} has invalid parent {p}")
        kids[p].append(i)

    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])
    if len(order) != n:
        raise MalformedTreeError("parent list contains a cycle or is disconnected")

    size = [1] * (n + 1)
    for v in reversed(order):
        p = parents[v - 1]
        if p:
            size[p] += size[v]
    for v in range(1, n + 1):
        if kids[v]:
            ids = sorted(kids[v])
            heavy = max(ids, key=lambda c: (size[c], -c))
            ids.remove(heavy)
            kids[v] = [heavy] + ids

    label_of = [0] * (n + 1)
    bits: List[int] = []
    nxt = 1
    stack2: List[Tuple[int, int]] = [(root, 0)]
    while stack2:
        v, state = stack2.pop()
        if state == 0:
            label_of[v] = nxt
            nxt += 1
            bits.append(1)
            stack2.append((v, 1))
            for c in reversed(kids[v]):
                stack2.append((c, 0))
        else:
            bits.append(0)
    return PreparedTree(BitVector(bits)), label_of


def parse_tree(lines: Sequence[str], start_line: int = 1) -> Tuple[List[int], int]:
    """Parse the two-line ``n root`` / parent-list block."""
    if len(lines) < 2:
        raise MalformedTreeError(f"line {start_line}: tree block needs two lines")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedTreeError(f"line {start_line}: expected 'n root'")
    try:
        n, root = int(head[0]), int(head[1])
        parents = [int(x) for x in lines[1].split()]
    except ValueError as exc:
        raise MalformedTreeError(f"line {start_line}: {exc}") from None
    if len(parents) != n:
        raise MalformedTreeError(
            f"line {start_line + 1}: expected {n} parent entries, found {len(parents)}"
        )
    if not 1 <= root <= n or parents[root - 1] != 0:
        raise MalformedTreeError(f"line {start_line}: root {root} must have parent 0")
    return parents, root


def format_tree(parents: Sequence[int], root: int) -> str:
    return f"{len(parents)} {root}\n{' '.join(map(str, parents))}\n"
