"""Succinct encoding of a chordal graph given by a tree model.

Vertex ``i`` owns stored paths ``P_1 .. P_K`` (outermost first).  Two orders
over all stored paths matter:

* G order: vertices ``1..n`` in turn, each listing its own paths in order.
* H order: the path store's order, by ``(start, end)`` with G order breaking ties.

Vertices are numbered so that their first paths appear in the same relative
order in both, which lets a flag bitvector over H order find first paths.
Components:

``K``       stored-path count per vertex (packed)
``F``       G position of each vertex's first path
``D``       owning vertex of each non-first path, by G rank
``Pi``      non-first G rank -> non-first H rank
``C``       per non-first path, whether it is disjoint from its predecessor
``first``   H-order flags marking first paths
``Y``       one record per vertex keyed by the apex of its first path,
            holding the apex of its last leaf-to-leaf path
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set

from ._blob import FormatError, Reader, Writer
from .decompose import PathDecomposition, TreeModel, decompose, prepare_model
from .pathstore import PathGraphStore, TreePath, build_store
from .succinct import BitVector, IndexPermutation, MonotoneSequence, PackedArray, WaveletMatrix, width_for

MAGIC = b"CHRD"


def _bump(stats: Optional[Dict[str, int]], key: str, amount: int = 1) -> None:
    if stats is not None:
        stats[key] = stats.get(key, 0) + amount


def ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


class EncodedGraph:
    def __init__(self, n: int, k: int, store: PathGraphStore, counts: PackedArray,
                 first_pos: MonotoneSequence, owner: MonotoneSequence, perm: IndexPermutation,
                 conn_flags: BitVector, first_flags: BitVector, y_keys: MonotoneSequence,
                 y_apex: WaveletMatrix, y_vertex: PackedArray, orig_of: PackedArray) -> None:
        self.n = n
        self.k = k
        self.store = store
        self.tree = store.tree
        self._K = counts
        self._F = first_pos
        self._D = owner
        self._Pi = perm
        self._C = conn_flags
        self._first = first_flags
        self._y_keys = y_keys
        self._y_apex = y_apex
        self._y_vertex = y_vertex
        self._orig_of = orig_of

    # -- vertex map -------------------------------------------------------

    def original_id(self, i: int) -> int:
        self._check(i)
        return self._orig_of[i - 1] + 1

    def vertex_of_original(self, orig: int) -> int:
        for i, o in enumerate(self._orig_of, start=1):
            if o + 1 == orig:
                return i
        raise IndexError(f"original vertex {orig} outside 1..{self.n}")

    # -- array accessors --------------------------------------------------

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"vertex {i} outside 1..{self.n}")

    @property
    def m(self) -> int:
        return self.store.m

    @property
    def first_flags(self) -> BitVector:
        return self._first

    def get_size(self, i: int) -> int:
        self._check(i)
        return self._K[i - 1]

    def get_index_g(self, i: int) -> int:
        self._check(i)
        return self._F.access(i)

    def get_index_h(self, i: int) -> int:
        self._check(i)
        return self._first.select(1, i)

    def _first_nonfirst_rank(self, i: int) -> int:
        return self._F.access(i) - i + 1

    def alpha(self, i: int) -> List[int]:
        """H indices of ``P_2 .. P_K`` of vertex ``i``."""
        size = self.get_size(i)
        p = self._first_nonfirst_rank(i)
        return [self._first.select(0, self._Pi.apply(p + t)) for t in range(size - 1)]

    def is_connector(self, i: int, j: int) -> bool:
        size = self.get_size(i)
        if not 1 <= j <= size - 1:
            raise IndexError(f"connector ordinal {j} outside 1..{size - 1} for vertex {i}")
        return bool(self._C.access(self._first_nonfirst_rank(i) + j - 1))

    def get_cpath(self, pj: TreePath, pj1: TreePath, i: int, j: int) -> Optional[TreePath]:
        if not self.is_connector(i, j):
            return None
        lca = self.tree.lca
        return TreePath.of(lca(pj.s, pj.t), lca(pj1.s, pj1.t))

    def vertex_of_h_path(self, h: int) -> int:
        if not 1 <= h <= self.m:
            raise IndexError(f"path index {h} outside 1..{self.m}")
        first = self._first
        if first.access(h):
            return first.rank(1, h)
        return self._D.access(self._Pi.invert(first.rank(0, h)))

    def stored_paths(self, i: int) -> List[TreePath]:
        pathep = self.store.pathep
        return [pathep(self.get_index_h(i))] + [pathep(h) for h in self.alpha(i)]

    def connectors(self, i: int, paths: Optional[List[TreePath]] = None) -> List[Optional[TreePath]]:
        paths = paths if paths is not None else self.stored_paths(i)
        return [self.get_cpath(paths[j], paths[j + 1], i, j + 1) for j in range(len(paths) - 1)]

    # -- queries ----------------------------------------------------------

    def adjacency(self, i: int, j: int, stats: Optional[Dict[str, int]] = None) -> bool:
        self._check(i)
        self._check(j)
        if i == j:
            raise ValueError("adjacency needs two distinct vertices")
        store = self.store
        pi = store.pathep(self.get_index_h(i))
        pj = store.pathep(self.get_index_h(j))
        _bump(stats, "probes")
        if store.adjacency_pg(pi.s, pi.t, pj.s, pj.t):
            return True
        if pi.s <= pj.s <= pj.t <= pi.t:
            outer, inner = i, pj
        elif pj.s <= pi.s <= pi.t <= pj.t:
            outer, inner = j, pi
        else:
            return False
        paths = self.stored_paths(outer)
        for p in paths[1:]:
            _bump(stats, "probes")
            if store.adjacency_pg(p.s, p.t, inner.s, inner.t):
                return True
        for t in range(1, len(paths)):
            c = self.get_cpath(paths[t - 1], paths[t], outer, t)
            if c is None:
                continue
            _bump(stats, "probes")
            if store.adjacency_pg(c.s, c.t, inner.s, inner.t):
                return True
        return False

    def get_nhb(self, l: int, l2: int, a: int) -> List[int]:
        """Vertices whose first-path apex is ``l`` and last-pair apex lies in ``[l2, a]``."""
        if not 1 <= l <= self.tree.n:
            raise IndexError(f"node label {l} outside 1..{self.tree.n}")
        lo = self._y_keys.count_less(l)
        hi = self._y_keys.count_less(l + 1)
        apex = self._y_apex
        first = _lower_bound(apex, lo, hi, l2 - 1)
        last = _lower_bound(apex, first, hi, a)
        return [self._y_vertex[p] + 1 for p in range(first, last)]

    def _y_report(self, bucket_lo: int, bucket_hi: int, s_lo: int, s_hi: int) -> List[int]:
        lo = self._y_keys.count_less(bucket_lo)
        hi = self._y_keys.count_less(bucket_hi + 1)
        return [self._y_vertex[p] + 1 for p in self._y_apex.report(lo, hi, s_lo - 1, s_hi - 1)]

    def _paths_of(self, i: int) -> List[TreePath]:
        paths = self.stored_paths(i)
        return paths + [c for c in self.connectors(i, paths) if c is not None]

    def neighbourhood(self, i: int, stats: Optional[Dict[str, int]] = None) -> List[int]:
        """Sorted neighbours of ``i``.

        Part one reports every vertex owning a stored path that meets a path
        of ``i``.  Part two finds vertices that reach ``i`` only through a
        connector: their first-path apex is a strict ancestor of the apex of
        ``i`` and their last-pair apex sits inside its subtree.
        """
        self._check(i)
        seen = bytearray(self.n + 1)
        seen[i] = 1
        out: List[int] = []
        for p in self._paths_of(i):
            for h in self.store.neighbourhood_pg(p.s, p.t, stats):
                v = self.vertex_of_h_path(h)
                if not seen[v]:
                    seen[v] = 1
                    out.append(v)
        tree = self.tree
        first = self.store.pathep(self.get_index_h(i))
        top = tree.lca(first.s, first.t)
        above = tree.parent(top)
        if above is not None:
            end = tree.subtree_end(top)
            for lo, hi in tree.heavy_segments(tree.root, above):
                _bump(stats, "ywalk")
                for v in self._y_report(lo, hi, top, end):
                    if not seen[v]:
                        seen[v] = 1
                        out.append(v)
        out.sort()
        return out

    def neighbourhood_verbatim(self, i: int, stats: Optional[Dict[str, int]] = None) -> List[int]:
        """The textbook walk: fixed lower bound ``l'`` and upper bound ``b_1``.

        Kept for comparison; it can miss neighbours met only through a
        connector whose last-pair apex lies outside ``[l', b_1]``.
        """
        self._check(i)
        seen = bytearray(self.n + 1)
        seen[i] = 1
        out: Set[int] = set()
        for p in self._paths_of(i):
            for h in self.store.neighbourhood_pg(p.s, p.t):
                v = self.vertex_of_h_path(h)
                if not seen[v]:
                    seen[v] = 1
                    out.add(v)
        tree = self.tree
        first = self.store.pathep(self.get_index_h(i))
        l = tree.lca(first.s, first.t)
        low = l
        v = _climb(tree, l)
        while v is not None:
            _bump(stats, "ywalk")
            out.update(self.get_nhb(v, low, first.t))
            v = _climb(tree, v)
        out.discard(i)
        return sorted(out)

    def degree(self, i: int) -> int:
        return len(self.neighbourhood(i))

    # -- space ------------------------------------------------------------

    def space_report(self) -> Dict[str, int]:
        parts = {
            "H": self.store.size_in_bits(),
            "K": self._K.size_in_bits(),
            "F": self._F.size_in_bits(),
            "D": self._D.size_in_bits(),
            "Pi": self._Pi.size_in_bits(),
            "C": self._C.size_in_bits(),
            "firstFlags": self._first.size_in_bits(),
            "Y": self._y_keys.size_in_bits() + self._y_apex.size_in_bits() + self._y_vertex.size_in_bits(),
        }
        parts["total"] = sum(parts.values())
        parts["reference"] = (self.k - 1) * self.n * ceil_log2(self.n)
        parts["vertex_map"] = self._orig_of.size_in_bits()
        parts["n"] = self.n
        parts["k"] = self.k
        parts["m_H"] = self.m
        return parts

    # -- persistence ------------------------------------------------------

    def _components(self):
        return [
            (b"H___", self.store), (b"K___", self._K), (b"F___", self._F), (b"D___", self._D),
            (b"Pi__", self._Pi), (b"C___", self._C), (b"FRST", self._first),
            (b"YKEY", self._y_keys), (b"YAPX", self._y_apex), (b"YVTX", self._y_vertex),
            (b"VMAP", self._orig_of),
        ]

    def to_bytes(self) -> bytes:
        blobs = []
        for name, comp in self._components():
            w = Writer()
            comp.write(w)
            blobs.append((name, w.getvalue()))
        out = Writer()
        out.tag(MAGIC)
        out.u64(self.n)
        out.u64(self.k)
        out.u64(len(blobs))
        offset = 0
        for name, data in blobs:
            out.raw(name)
            out.u64(offset)
            out.u64(len(data))
            offset += len(data)
        for _, data in blobs:
            out.raw(data)
        return out.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncodedGraph":
        r = Reader(data)
        r.tag(MAGIC)
        n = r.u64()
        k = r.u64()
        count = r.u64()
        names = []
        for _ in range(count):
            names.append(r.raw())
            r.u64()
            r.u64()
        blobs = {name: Reader(r.raw()) for name in names}
        if not r.at_end():
            raise FormatError("trailing bytes after encoded graph")
        expected = [b"H___", b"K___", b"F___", b"D___", b"Pi__", b"C___", b"FRST",
                    b"YKEY", b"YAPX", b"YVTX", b"VMAP"]
        if names != expected:
            raise FormatError(f"unexpected component table {names!r}")
        return cls(
            n, k,
            PathGraphStore.read(blobs[b"H___"]),
            PackedArray.read(blobs[b"K___"]),
            MonotoneSequence.read(blobs[b"F___"]),
            MonotoneSequence.read(blobs[b"D___"]),
            IndexPermutation.read(blobs[b"Pi__"]),
            BitVector.read(blobs[b"C___"]),
            BitVector.read(blobs[b"FRST"]),
            MonotoneSequence.read(blobs[b"YKEY"]),
            WaveletMatrix.read(blobs[b"YAPX"]),
            PackedArray.read(blobs[b"YVTX"]),
            PackedArray.read(blobs[b"VMAP"]),
        )


def _lower_bound(seq: WaveletMatrix, lo: int, hi: int, value: int) -> int:
    """First position in ``[lo, hi)`` whose value is >= ``value`` (sorted run)."""
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _climb(tree, l: int) -> Optional[int]:
    # next stop above l: past the heavy path when l is a first child
    p = tree.parent(l)
    if p is None:
        return None
    if tree.lmost_child(p) == l:
        return tree.parent(tree.hp_start(l))
    return p


class BuildResult:
    """An encoded graph plus the build-side artefacts tests like to inspect."""

    def __init__(self, graph: EncodedGraph, model: TreeModel, decomposition: PathDecomposition,
                 label_of: List[int], new_of_orig: List[int]) -> None:
        self.graph = graph
        self.model = model
        self.decomposition = decomposition
        self.label_of = label_of
        self.new_of_orig = new_of_orig


def build_full(model: TreeModel, odd_mode: str = "root-pair") -> BuildResult:
    used, tree, label_of, label_sets = prepare_model(model, odd_mode)
    dec = decompose(tree, label_sets)
    n = len(label_sets)
    if n == 0:
        raise ValueError("model has no vertices")
    order = sorted(range(n), key=lambda v: (dec[v].paths[0].s, dec[v].paths[0].t, v))
    new_of_orig = [0] * (n + 1)
    for new, v in enumerate(order, start=1):
        new_of_orig[v + 1] = new

    g_paths: List[TreePath] = []
    g_first: List[bool] = []
    first_pos: List[int] = []
    owner: List[int] = []
    conn: List[int] = []
    for new, v in enumerate(order, start=1):
        entry = dec[v]
        first_pos.append(len(g_paths) + 1)
        for t, p in enumerate(entry.paths):
            g_paths.append(p)
            g_first.append(t == 0)
            if t:
                owner.append(new)
                conn.append(int(entry.connectors[t - 1] is not None))

    store, h_order = build_store(tree, g_paths)
    m = len(g_paths)
    first_flags = BitVector(int(g_first[g]) for g in h_order)
    g_rank = [0] * m
    r = 0
    for g in range(m):
        if not g_first[g]:
            r += 1
            g_rank[g] = r
    perm = [0] * (m - n)
    r = 0
    for g in h_order:
        if not g_first[g]:
            r += 1
            perm[g_rank[g] - 1] = r

    lca = tree.lca
    records = []
    for new, v in enumerate(order, start=1):
        entry = dec[v]
        head = entry.paths[0]
        tail = entry.paths[entry.pair_count - 1]
        records.append((lca(head.s, head.t), lca(tail.s, tail.t), new))
    records.sort()
    label_width = width_for(max(tree.n - 1, 0))
    k = used.k
    graph = EncodedGraph(
        n, k, store,
        PackedArray([len(dec[v].paths) for v in order], max(1, ceil_log2(k))),
        MonotoneSequence(first_pos),
        MonotoneSequence(owner),
        IndexPermutation(perm),
        BitVector(conn),
        first_flags,
        MonotoneSequence([b for b, _, _ in records]),
        WaveletMatrix([s - 1 for _, s, _ in records], label_width),
        PackedArray([r - 1 for _, _, r in records], width_for(max(n - 1, 0))),
        PackedArray(order, width_for(max(n - 1, 0))),
    )
    return BuildResult(graph, used, dec, label_of, new_of_orig)


def build(model: TreeModel, odd_mode: str = "root-pair") -> EncodedGraph:
    return build_full(model, odd_mode).graph
