"""Static store of tree paths answering intersection queries.

Paths are kept sorted by ``(start, end, insertion order)``.  Starts live in a
:class:`MonotoneSequence`, ends in a :class:`WaveletMatrix` so that "start in
a label range and end in another label range" can be reported directly, and
an apex index lists the paths grouped by their shallowest node.

A stored path ``P`` meets a query path ``Q`` with apex ``q`` exactly when
either ``q`` lies on ``P`` or the apex of ``P`` lies on ``Q`` below ``q``.
The first case splits into "apex of P is q" and "P has exactly one endpoint
inside the subtree of q"; both are range lookups thanks to preorder
contiguity.  The second case is a lookup per heavy-path piece of ``Q``.
"""

from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ._blob import Reader, Writer
from .succinct import MonotoneSequence, PackedArray, WaveletMatrix, width_for
from .tree import PreparedTree


class TreePath(NamedTuple):
    s: int
    t: int

    @classmethod
    def of(cls, a: int, b: int) -> "TreePath":
        return cls(a, b) if a <= b else cls(b, a)


def paths_intersect(tree: PreparedTree, su: int, tu: int, sv: int, tv: int) -> bool:
    p = tree.lca(su, tu)
    q = tree.lca(sv, tv)
    return tree.on_path(q, su, tu) or tree.on_path(p, sv, tv)


def _bump(stats: Optional[Dict[str, int]], key: str, amount: int = 1) -> None:
    if stats is not None:
        stats[key] = stats.get(key, 0) + amount


class PathGraphStore:
    def __init__(self, tree: PreparedTree, starts: MonotoneSequence, ends: WaveletMatrix,
                 apex_keys: MonotoneSequence, apex_ids: PackedArray) -> None:
        self.tree = tree
        self._starts = starts
        self._ends = ends
        self._apex_keys = apex_keys
        self._apex_ids = apex_ids

    @property
    def m(self) -> int:
        return len(self._starts)

    def _check(self, u: int) -> None:
        if not 1 <= u <= self.m:
            raise IndexError(f"path index {u} outside 1..{self.m}")

    def pathep(self, u: int) -> TreePath:
        self._check(u)
        return TreePath(self._starts.access(u), self._ends[u - 1] + 1)

    def adjacency_pg(self, su: int, tu: int, sv: int, tv: int) -> bool:
        return paths_intersect(self.tree, su, tu, sv, tv)

    def _with_apex_in(self, lo: int, hi: int) -> List[int]:
        keys = self._apex_keys
        a = keys.count_less(lo)
        b = keys.count_less(hi + 1)
        return [self._apex_ids[p] + 1 for p in range(a, b)]

    def neighbourhood_pg(self, a: int, b: int, stats: Optional[Dict[str, int]] = None) -> List[int]:
        """Indices of stored paths meeting the path ``a``..``b``, ascending.

        ``stats`` (optional) accumulates ``segments`` (heavy-path pieces of
        the query visited) and ``probes`` (index range lookups).
        """
        tree = self.tree
        q = tree.lca(a, b)
        e = tree.subtree_end(q)
        n = tree.n
        found: List[int] = []
        if self.m == 0:
            return found
        # apex exactly q
        found.extend(self._with_apex_in(q, q))
        # one endpoint inside subtree(q), the other outside
        inside_lo = self._starts.count_less(q)
        inside_hi = self._starts.count_less(e + 1)
        ends = self._ends
        found.extend(p + 1 for p in ends.report(inside_lo, inside_hi, e, n - 1))
        found.extend(p + 1 for p in ends.report(0, inside_lo, q - 1, e - 1))
        _bump(stats, "probes", 3)
        # apex strictly below q on the query path
        for end in {a, b}:
            for lo, hi in tree.heavy_segments(q, end):
                if lo == q:
                    lo += 1
                _bump(stats, "segments")
                if lo > hi:
                    continue
                _bump(stats, "probes")
                found.extend(self._with_apex_in(lo, hi))
        found.sort()
        return found

    def size_in_bits(self) -> int:
        return (
            self.tree.size_in_bits()
            + self._starts.size_in_bits()
            + self._ends.size_in_bits()
            + self._apex_keys.size_in_bits()
            + self._apex_ids.size_in_bits()
        )

    def component_bits(self) -> Dict[str, int]:
        return {
            "tree": self.tree.size_in_bits(),
            "starts": self._starts.size_in_bits(),
            "ends": self._ends.size_in_bits(),
            "apex_index": self._apex_keys.size_in_bits() + self._apex_ids.size_in_bits(),
        }

    def write(self, w: Writer) -> None:
        w.tag(b"PGST")
        self.tree.write(w)
        self._starts.write(w)
        self._ends.write(w)
        self._apex_keys.write(w)
        self._apex_ids.write(w)

    @classmethod
    def read(cls, r: Reader) -> "PathGraphStore":
        r.tag(b"PGST")
        tree = PreparedTree.read(r)
        return cls(tree, MonotoneSequence.read(r), WaveletMatrix.read(r),
                   MonotoneSequence.read(r), PackedArray.read(r))


def build_store(tree: PreparedTree, paths: Sequence[Tuple[int, int]]) -> Tuple[PathGraphStore, List[int]]:
    """Store ``paths`` over ``tree``.

    Returns the store and ``order`` where ``order[u - 1]`` is the input
    position (0-based) of the path stored at index ``u``.
    """
    n = tree.n
    norm = []
    for a, b in paths:
        if not (1 <= a <= n and 1 <= b <= n):
            raise IndexError(f"path endpoint outside 1..{n}: ({a}, {b})")
        norm.append(TreePath.of(a, b))
    order = sorted(range(len(norm)), key=lambda i: (norm[i].s, norm[i].t, i))
    ordered = [norm[i] for i in order]
    label_width = width_for(max(n - 1, 0))
    starts = MonotoneSequence([p.s for p in ordered])
    ends = WaveletMatrix([p.t - 1 for p in ordered], label_width)
    apexes = [tree.lca(p.s, p.t) for p in ordered]
    by_apex = sorted(range(len(ordered)), key=lambda u: (apexes[u], u))
    apex_keys = MonotoneSequence([apexes[u] for u in by_apex])
    apex_ids = PackedArray(by_apex, width_for(max(len(ordered) - 1, 0)))
    return PathGraphStore(tree, starts, ends, apex_keys, apex_ids), order
