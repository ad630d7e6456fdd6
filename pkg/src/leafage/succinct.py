"""Static succinct building blocks.

All public positions are 1-based, matching rank/select conventions in the
literature: ``rank(b, i)`` counts occurrences in positions ``1..i`` and
``select(b, i)`` returns the position of the ``i``-th occurrence, or 0 if there
is none.  Internal helpers (``PackedArray``, ``WaveletMatrix``) are 0-based
like ordinary Python sequences.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from ._blob import Reader, Writer

SUPER_BITS = 512
WORD_BITS = 64
WORDS_PER_SUPER = SUPER_BITS // WORD_BITS
SELECT_SAMPLE = 512
# in-superblock block counts never exceed 448, so 9 bits suffice
BLOCK_COUNT_BITS = 9


def width_for(max_value: int) -> int:
    """Bits needed for integers in ``[0, max_value]`` (at least one)."""
    return max(1, int(max_value).bit_length())


def _nth_set_bit(word: int, k: int) -> int:
    # 0-based offset of the k-th (1-based) set bit of ``word``
    pos = 0
    for width in (32, 16, 8):
        low = word & ((1 << width) - 1)
        c = low.bit_count()
        if c < k:
            k -= c
            word >>= width
            pos += width
        else:
            word = low
    for _ in range(k - 1):
        word &= word - 1
    return pos + (word & -word).bit_length() - 1


class BitVector:
    """Fixed-length bit vector with constant-ish time rank and select.

    The directory is the classic two-level layout: cumulative counts per
    512-bit superblock, per-word counts relative to the superblock, and one
    sampled superblock pointer for every 512th one (and zero) to narrow
    selects.
    """

    __slots__ = ("n", "_words", "_ones", "_super", "_block", "_sel1", "_sel0")

    def __init__(self, bits: Iterable[int] = ()) -> None:
        words: List[int] = []
        acc = 0
        n = 0
        for b in bits:
            if b:
                acc |= 1 << (n & 63)
            n += 1
            if n & 63 == 0:
                words.append(acc)
                acc = 0
        if n & 63:
            words.append(acc)
        self._init_from_words(words, n)

    @classmethod
    def from_words(cls, words: Sequence[int], length: int) -> "BitVector":
        bv = cls.__new__(cls)
        bv._init_from_words(list(words), length)
        return bv

    @classmethod
    def from_positions(cls, ones: Iterable[int], length: int) -> "BitVector":
        """Build from the 1-based positions of the set bits."""
        words = [0] * ((length + 63) // 64)
        for p in ones:
            if not 1 <= p <= length:
                raise IndexError(f"position {p} outside 1..{length}")
            q = p - 1
            words[q >> 6] |= 1 << (q & 63)
        return cls.from_words(words, length)

    def _init_from_words(self, words: List[int], n: int) -> None:
        self.n = n
        self._words = words
        nsuper = (len(words) + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
        sup = [0] * (nsuper + 1)
        block = [0] * len(words)
        total = 0
        within = 0
        for w, word in enumerate(words):
            if w % WORDS_PER_SUPER == 0:
                sup[w // WORDS_PER_SUPER] = total
                within = 0
            block[w] = within
            c = word.bit_count()
            within += c
            total += c
        sup[nsuper] = total
        self._ones = total
        self._super = sup
        self._block = block
        self._sel1 = self._sample(lambda s: sup[s], total)
        zeros = n - total
        self._sel0 = self._sample(lambda s: s * SUPER_BITS - sup[s], zeros)

    def _sample(self, count_before, occurrences: int) -> List[int]:
        # superblock holding occurrence 1, 1+S, 1+2S, ...
        samples: List[int] = []
        nsuper = len(self._super) - 1
        sb = 0
        target = 1
        while target <= occurrences:
            while sb + 1 < nsuper and count_before(sb + 1) < target:
                sb += 1
            samples.append(sb)
            target += SELECT_SAMPLE
        return samples

    def __len__(self) -> int:
        return self.n

    @property
    def ones(self) -> int:
        return self._ones

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"bit position {i} outside 1..{self.n}")
        q = i - 1
        return (self._words[q >> 6] >> (q & 63)) & 1

    def _rank1(self, i: int) -> int:
        if i >= self.n:
            return self._ones
        w = i >> 6
        r = self._super[w // WORDS_PER_SUPER] + self._block[w]
        off = i & 63
        if off:
            r += (self._words[w] & ((1 << off) - 1)).bit_count()
        return r

    def rank(self, b: int, i: int) -> int:
        """Number of ``b`` symbols in positions ``1..i``."""
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside 0..{self.n}")
        r1 = self._rank1(i)
        return r1 if b else i - r1

    def select(self, b: int, i: int) -> int:
        """Position of the ``i``-th ``b``; 0 when it does not exist."""
        total = self._ones if b else self.n - self._ones
        if i < 1 or i > total:
            return 0
        sup = self._super
        samples = self._sel1 if b else self._sel0
        s_idx = (i - 1) // SELECT_SAMPLE
        lo = samples[s_idx]
        hi = samples[s_idx + 1] if s_idx + 1 < len(samples) else len(sup) - 2
        # largest superblock in [lo, hi] with fewer than i occurrences before it
        while lo < hi:
            mid = (lo + hi + 1) // 2
            before = sup[mid] if b else mid * SUPER_BITS - sup[mid]
            if before < i:
                lo = mid
            else:
                hi = mid - 1
        remaining = i - (sup[lo] if b else lo * SUPER_BITS - sup[lo])
        w = lo * WORDS_PER_SUPER
        last = min(w + WORDS_PER_SUPER, len(self._words))
        words = self._words
        while w < last:
            word = words[w] if b else ~words[w] & 0xFFFFFFFFFFFFFFFF
            c = word.bit_count()
            if c >= remaining:
                pos = (w << 6) + _nth_set_bit(word, remaining) + 1
                return pos if pos <= self.n else 0
            remaining -= c
            w += 1
        return 0

    def bits(self) -> List[int]:
        return [(self._words[q >> 6] >> (q & 63)) & 1 for q in range(self.n)]

    def size_in_bits(self) -> int:
        """Raw bits plus the serialized directory."""
        wn = width_for(self.n)
        nsuper = len(self._super) - 1
        return (
            self.n
            + len(self._super) * wn
            + len(self._block) * BLOCK_COUNT_BITS
            + (len(self._sel1) + len(self._sel0)) * width_for(nsuper)
        )

    def write(self, w: Writer) -> None:
        w.tag(b"BVEC")
        w.u64(self.n)
        w.words(self._words)
        nsuper = len(self._super) - 1
        w.packed(self._super, width_for(self.n))
        w.packed(self._block, BLOCK_COUNT_BITS)
        w.packed(self._sel1, width_for(nsuper))
        w.packed(self._sel0, width_for(nsuper))

    @classmethod
    def read(cls, r: Reader) -> "BitVector":
        r.tag(b"BVEC")
        n = r.u64()
        words = r.words((n + 63) // 64)
        bv = cls.__new__(cls)
        bv.n = n
        bv._words = words
        bv._super = r.packed()
        bv._block = r.packed()
        bv._sel1 = r.packed()
        bv._sel0 = r.packed()
        bv._ones = bv._super[-1] if bv._super else 0
        return bv

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self._words == other._words
        )

    def __repr__(self) -> str:
        preview = "".join(map(str, self.bits()[:64]))
        return f"BitVector(n={self.n}, bits={preview}{'...' if self.n > 64 else ''})"


class MonotoneSequence:
    """Non-decreasing sequence of non-negative integers, unary gap coded.

    Value ``a_i`` contributes ``a_i - a_{i-1}`` ones followed by a zero, so
    the stream holds ``n`` zeros and ``a_n`` ones.
    """

    __slots__ = ("_n", "_bv")

    def __init__(self, values: Sequence[int] = ()) -> None:
        bits: List[int] = []
        prev = 0
        for v in values:
            if v < prev:
                raise ValueError(f"sequence is not non-decreasing at value {v}")
            bits.extend([1] * (v - prev))
            bits.append(0)
            prev = v
        self._n = len(values)
        self._bv = BitVector(bits)

    def __len__(self) -> int:
        return self._n

    def access(self, i: int) -> int:
        if not 1 <= i <= self._n:
            raise IndexError(f"sequence index {i} outside 1..{self._n}")
        return self._bv.rank(1, self._bv.select(0, i))

    def count_less(self, v: int) -> int:
        """How many stored values are strictly smaller than ``v``."""
        if v <= 0:
            return 0
        p = self._bv.select(1, v)
        return self._n if p == 0 else p - v

    def values(self) -> List[int]:
        out = []
        acc = 0
        for b in self._bv.bits():
            if b:
                acc += 1
            else:
                out.append(acc)
        return out

    @property
    def bitvector(self) -> BitVector:
        return self._bv

    def size_in_bits(self) -> int:
        return self._bv.size_in_bits()

    def write(self, w: Writer) -> None:
        w.tag(b"MSEQ")
        w.u64(self._n)
        self._bv.write(w)

    @classmethod
    def read(cls, r: Reader) -> "MonotoneSequence":
        r.tag(b"MSEQ")
        seq = cls.__new__(cls)
        seq._n = r.u64()
        seq._bv = BitVector.read(r)
        return seq


class PackedArray:
    """Fixed-width unsigned integer array (0-based)."""

    __slots__ = ("width", "_values")

    def __init__(self, values: Sequence[int] = (), width: Optional[int] = None) -> None:
        vals = list(values)
        if vals and min(vals) < 0:
            raise ValueError("packed arrays hold non-negative integers")
        if width is None:
            width = width_for(max(vals) if vals else 0)
        if vals and max(vals) >= (1 << width):
            raise ValueError(f"value does not fit in {width} bits")
        self.width = width
        self._values = vals

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, i):
        return self._values[i]

    def __iter__(self):
        return iter(self._values)

    def size_in_bits(self) -> int:
        return self.width * len(self._values)

    def write(self, w: Writer) -> None:
        w.tag(b"PACK")
        w.packed(self._values, self.width)

    @classmethod
    def read(cls, r: Reader) -> "PackedArray":
        r.tag(b"PACK")
        arr = cls.__new__(cls)
        arr.width, arr._values = r.packed_with_width()
        return arr


class IndexPermutation:
    """Permutation of ``1..n`` with sublinear inverse lookup.

    Every cycle longer than ``t = ceil(log2 n)`` is sampled every ``t`` steps
    and each sample keeps a pointer to the previous sample on its cycle, so
    ``invert`` follows at most about ``2t`` forward links.
    """

    __slots__ = ("_n", "_perm", "_stride", "_sampled", "_back")

    def __init__(self, values: Sequence[int]) -> None:
        n = len(values)
        if sorted(values) != list(range(1, n + 1)):
            raise ValueError("values are not a permutation of 1..n")
        self._n = n
        self._perm = PackedArray([v - 1 for v in values], width_for(max(n - 1, 0)))
        self._stride = max(1, (n - 1).bit_length()) if n > 1 else 1
        t = self._stride
        perm = self._perm
        seen = [False] * n
        back_of = {}
        for start in range(n):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = perm[x]
            if len(cycle) <= t:
                continue
            samples = cycle[::t]
            for idx, s in enumerate(samples):
                back_of[s] = samples[idx - 1]
        marked = sorted(back_of)
        self._sampled = BitVector.from_positions((p + 1 for p in marked), n)
        self._back = PackedArray([back_of[p] for p in marked], width_for(max(n - 1, 0)))

    def __len__(self) -> int:
        return self._n

    @property
    def stride(self) -> int:
        return self._stride

    def apply(self, i: int) -> int:
        if not 1 <= i <= self._n:
            raise IndexError(f"permutation index {i} outside 1..{self._n}")
        return self._perm[i - 1] + 1

    def invert(self, j: int) -> int:
        return self.invert_counted(j)[0]

    def invert_counted(self, j: int) -> Tuple[int, int]:
        """Inverse lookup returning ``(position, link steps followed)``."""
        if not 1 <= j <= self._n:
            raise IndexError(f"permutation value {j} outside 1..{self._n}")
        target = j - 1
        perm = self._perm
        sampled = self._sampled
        i = target
        jumped = False
        steps = 0
        while True:
            steps += 1
            nxt = perm[i]
            if nxt == target:
                return i + 1, steps
            if not jumped and sampled.access(i + 1):
                i = self._back[sampled.rank(1, i + 1) - 1]
                jumped = True
            else:
                i = nxt

    def values(self) -> List[int]:
        return [v + 1 for v in self._perm]

    def size_in_bits(self) -> int:
        return (
            self._perm.size_in_bits()
            + self._sampled.size_in_bits()
            + self._back.size_in_bits()
        )

    def write(self, w: Writer) -> None:
        w.tag(b"PERM")
        w.u64(self._n)
        w.u64(self._stride)
        self._perm.write(w)
        self._sampled.write(w)
        self._back.write(w)

    @classmethod
    def read(cls, r: Reader) -> "IndexPermutation":
        r.tag(b"PERM")
        p = cls.__new__(cls)
        p._n = r.u64()
        p._stride = r.u64()
        p._perm = PackedArray.read(r)
        p._sampled = BitVector.read(r)
        p._back = PackedArray.read(r)
        return p


class WaveletMatrix:
    """Integer sequence supporting access and 2-D range reporting.

    ``report(l, r, lo, hi)`` lists every position ``p`` in ``[l, r)`` whose
    value lies in ``[lo, hi]``; each hit costs O(width) rank/select calls.
    """

    __slots__ = ("_n", "width", "_levels", "_zeros")

    def __init__(self, values: Sequence[int], width: Optional[int] = None) -> None:
        vals = list(values)
        if width is None:
            width = width_for(max(vals) if vals else 0)
        self._n = len(vals)
        self.width = width
        self._levels: List[BitVector] = []
        self._zeros: List[int] = []
        cur = vals
        for level in range(width):
            shift = width - 1 - level
            bits = [(v >> shift) & 1 for v in cur]
            bv = BitVector(bits)
            self._levels.append(bv)
            self._zeros.append(len(cur) - bv.ones)
            cur = [v for v, b in zip(cur, bits) if not b] + [v for v, b in zip(cur, bits) if b]

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self._n:
            raise IndexError(f"wavelet index {i} outside 0..{self._n - 1}")
        v = 0
        p = i
        for bv, z in zip(self._levels, self._zeros):
            if bv.access(p + 1):
                p = z + bv.rank(1, p)
                v = (v << 1) | 1
            else:
                p = bv.rank(0, p)
                v <<= 1
        return v

    def _trace_up(self, level: int, p: int) -> int:
        for lvl in range(level - 1, -1, -1):
            bv = self._levels[lvl]
            z = self._zeros[lvl]
            if p < z:
                p = bv.select(0, p + 1) - 1
            else:
                p = bv.select(1, p - z + 1) - 1
        return p

    def report(self, l: int, r: int, lo: int, hi: int) -> List[int]:
        l = max(l, 0)
        r = min(r, self._n)
        if l >= r or lo > hi:
            return []
        out: List[int] = []
        stack = [(0, l, r, 0)]
        width = self.width
        while stack:
            level, a, b, prefix = stack.pop()
            if a >= b:
                continue
            rem = width - level
            node_lo = prefix << rem
            node_hi = node_lo + (1 << rem) - 1
            if node_hi < lo or node_lo > hi:
                continue
            if lo <= node_lo and node_hi <= hi:
                out.extend(self._trace_up(level, p) for p in range(a, b))
                continue
            bv = self._levels[level]
            z = self._zeros[level]
            a0 = bv.rank(0, a)
            b0 = bv.rank(0, b)
            stack.append((level + 1, z + (a - a0), z + (b - b0), (prefix << 1) | 1))
            stack.append((level + 1, a0, b0, prefix << 1))
        return out

    def size_in_bits(self) -> int:
        return sum(bv.size_in_bits() for bv in self._levels) + len(self._zeros) * width_for(self._n)

    def write(self, w: Writer) -> None:
        w.tag(b"WAVM")
        w.u64(self._n)
        w.u8(self.width)
        for bv in self._levels:
            bv.write(w)
        w.packed(self._zeros, width_for(self._n))

    @classmethod
    def read(cls, r: Reader) -> "WaveletMatrix":
        r.tag(b"WAVM")
        wm = cls.__new__(cls)
        wm._n = r.u64()
        wm.width = r.u8()
        wm._levels = [BitVector.read(r) for _ in range(wm.width)]
        wm._zeros = r.packed()
        return wm
