"""Little-endian binary writer/reader shared by every serialized component.

Every blob starts with a 4-byte magic tag and a 1-byte version.  Integers are
unsigned 64-bit little-endian unless noted; packed integer arrays are written
as ``width:u8, length:u64, words:u64[ceil(width*length/64)]``.
"""

from __future__ import annotations

import struct
from typing import Iterable, List, Sequence, Tuple

VERSION = 1


class FormatError(ValueError):
    """Raised when a blob is truncated, has the wrong tag or version."""


def pack_words(values: Sequence[int], width: int) -> List[int]:
    words: List[int] = []
    acc = 0
    filled = 0
    mask = (1 << width) - 1
    for v in values:
        if v < 0 or v > mask:
            raise ValueError(f"value {v} does not fit in {width} bits")
        acc |= v << filled
        filled += width
        while filled >= 64:
            words.append(acc & 0xFFFFFFFFFFFFFFFF)
            acc >>= 64
            filled -= 64
    if filled:
        words.append(acc)
    return words


def unpack_words(words: Sequence[int], width: int, length: int) -> List[int]:
    out: List[int] = []
    mask = (1 << width) - 1
    acc = 0
    filled = 0
    it = iter(words)
    for _ in range(length):
        while filled < width:
            acc |= next(it) << filled
            filled += 64
        out.append(acc & mask)
        acc >>= width
        filled -= width
    return out


class Writer:
    def __init__(self) -> None:
        self._parts: List[bytes] = []

    def tag(self, magic: bytes) -> None:
        assert len(magic) == 4
        self._parts.append(magic + bytes([VERSION]))

    def u8(self, v: int) -> None:
        self._parts.append(struct.pack("<B", v))

    def u64(self, v: int) -> None:
        self._parts.append(struct.pack("<Q", v))

    def words(self, ws: Iterable[int]) -> None:
        ws = list(ws)
        self._parts.append(struct.pack(f"<{len(ws)}Q", *ws))

    def packed(self, values: Sequence[int], width: int) -> None:
        self.u8(width)
        self.u64(len(values))
        self.words(pack_words(values, width))

    def raw(self, data: bytes) -> None:
        self.u64(len(data))
        self._parts.append(data)

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes) -> None:
        self._data = data
        self._pos = 0

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise FormatError("truncated blob")
        chunk = self._data[self._pos:self._pos + n]
        self._pos += n
        return chunk

    def tag(self, magic: bytes) -> None:
        got = self._take(5)
        if got[:4] != magic:
            raise FormatError(f"expected tag {magic!r}, found {got[:4]!r}")
        if got[4] != VERSION:
            raise FormatError(f"unsupported version {got[4]} for {magic!r}")

    def u8(self) -> int:
        return self._take(1)[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def words(self, count: int) -> List[int]:
        return list(struct.unpack(f"<{count}Q", self._take(8 * count)))

    def packed(self) -> List[int]:
        return self.packed_with_width()[1]

    def packed_with_width(self) -> Tuple[int, List[int]]:
        width = self.u8()
        length = self.u64()
        nwords = (width * length + 63) // 64
        return width, unpack_words(self.words(nwords), width, length)

    def raw(self) -> bytes:
        return self._take(self.u64())

    def at_end(self) -> bool:
        return self._pos == len(self._data)
