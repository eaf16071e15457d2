"""Canonical binary encoding used for signing, state hashing, and the block log.

Frozen wire rules:
  - unsigned 64-bit integers: 8 bytes big-endian
  - byte strings and UTF-8 strings: 4-byte big-endian length, then the bytes
  - addresses and hashes: raw 32 bytes; signatures: raw 64 bytes
  - tagged unions: 1 tag byte, then the variant's fields in declared order
  - maps: 4-byte big-endian entry count, then entries in ascending key-byte order

Decoding is strict: truncated input, trailing bytes (where checked), and
out-of-range values raise DecodeError.
"""

from __future__ import annotations

from .errors import DecodeError

U64_MAX = (1 << 64) - 1
U32_MAX = (1 << 32) - 1


class Writer:
    """Append-only canonical encoder."""

    __slots__ = ("buf",)

    def __init__(self) -> None:
        self.buf = bytearray()

    def u8(self, value: int) -> None:
        if not 0 <= value <= 0xFF:
            raise ValueError(f"u8 out of range: {value}")
        self.buf.append(value)

    def u32(self, value: int) -> None:
        if not 0 <= value <= U32_MAX:
            raise ValueError(f"u32 out of range: {value}")
        self.buf += value.to_bytes(4, "big")

    def u64(self, value: int) -> None:
        if not 0 <= value <= U64_MAX:
            raise ValueError(f"u64 out of range: {value}")
        self.buf += value.to_bytes(8, "big")

    def raw(self, data: bytes, length: int | None = None) -> None:
        if length is not None and len(data) != length:
            raise ValueError(f"expected {length} raw bytes, got {len(data)}")
        self.buf += data

    def bytes_(self, data: bytes) -> None:
        self.u32(len(data))
        self.buf += data

    def str_(self, text: str) -> None:
        self.bytes_(text.encode("utf-8"))

    def getvalue(self) -> bytes:
        return bytes(self.buf)


class Reader:
    """Strict canonical decoder over an immutable buffer."""

    __slots__ = ("data", "pos")

    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _take(self, n: int) -> bytes:
        end = self.pos + n
        if end > len(self.data):
            raise DecodeError(f"truncated input: need {n} bytes at offset {self.pos}")
        chunk = self.data[self.pos:end]
        self.pos = end
        return chunk

    def u8(self) -> int:
        return self._take(1)[0]

    def u32(self) -> int:
        return int.from_bytes(self._take(4), "big")

    def u64(self) -> int:
        return int.from_bytes(self._take(8), "big")

    def raw(self, n: int) -> bytes:
        return self._take(n)

    def bytes_(self) -> bytes:
        return self._take(self.u32())

    def str_(self) -> str:
        raw = self.bytes_()
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"invalid utf-8 string: {exc}") from None

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def expect_end(self) -> None:
        if self.pos != len(self.data):
            raise DecodeError(f"{self.remaining()} trailing bytes after decode")


def write_map(w: Writer, items: dict, write_key, write_value) -> None:
    """Encode a map: u32 count, then entries sorted by encoded key bytes."""
    encoded = []
    for key, value in items.items():
        kw = Writer()
        write_key(kw, key)
        encoded.append((kw.getvalue(), value))
    encoded.sort(key=lambda kv: kv[0])
    w.u32(len(encoded))
    for key_bytes, value in encoded:
        w.raw(key_bytes)
        write_value(w, value)
