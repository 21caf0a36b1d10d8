"""Fixed-length bit strings.

Bit 0 is the leftmost bit as printed, so ``BitString.from_str("1100")[0] == 1``.
The backing integer reads the printed string as a binary number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class BitString:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    # construction

    @classmethod
    def empty(cls) -> BitString:
        return cls(0, 0)

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> BitString:
        return cls((1 << n) - 1, n)

    @classmethod
    def from_str(cls, s: str) -> BitString:
        s = "".join(s.split())
        if s and set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return cls(int(s, 2) if s else 0, len(s))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        v = n = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit must be 0 or 1, got {b!r}")
            v = (v << 1) | b
            n += 1
        return cls(v, n)

    @classmethod
    def from_bytes(cls, data: bytes) -> BitString:
        return cls(int.from_bytes(data, "big"), 8 * len(data))

    @classmethod
    def from_hex(cls, h: str) -> BitString:
        h = "".join(h.split())
        return cls(int(h, 16) if h else 0, 4 * len(h))

    @classmethod
    def from_text(cls, text: str) -> BitString:
        """UTF-8 bytes concatenated big-endian."""
        return cls.from_bytes(text.encode("utf-8"))

    @classmethod
    def parse(cls, s: str) -> BitString:
        """Parse the oracle notation: ``b0101...`` for binary, ``h41ff...`` for hex."""
        s = s.strip()
        if s[:1] == "b":
            return cls.from_str(s[1:])
        if s[:1] == "h":
            return cls.from_hex(s[1:])
        raise ValueError("message must start with 'b' (binary) or 'h' (hex)")

    @classmethod
    def concat(cls, parts: Iterable[BitString]) -> BitString:
        v = n = 0
        for p in parts:
            v = (v << p.length) | p.value
            n += p.length
        return cls(v, n)

    # access

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> (self.length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.value >> (self.length - 1 - i)) & 1

    def __add__(self, other: BitString) -> BitString:
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def __xor__(self, other: BitString) -> BitString:
        if self.length != other.length:
            raise ValueError("xor of bit strings with different lengths")
        return BitString(self.value ^ other.value, self.length)

    def __and__(self, other: BitString) -> BitString:
        if self.length != other.length:
            raise ValueError("and of bit strings with different lengths")
        return BitString(self.value & other.value, self.length)

    def slice(self, start: int, stop: int) -> BitString:
        if not 0 <= start <= stop <= self.length:
            raise IndexError((start, stop))
        n = stop - start
        return BitString((self.value >> (self.length - stop)) & ((1 << n) - 1), n)

    def blocks(self, n: int) -> list[BitString]:
        if n <= 0 or self.length % n:
            raise ValueError(f"length {self.length} is not a multiple of {n}")
        return [self.slice(i, i + n) for i in range(0, self.length, n)]

    def weight(self) -> int:
        return bin(self.value).count("1")

    # rendering

    def to_str(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_bytes(self) -> bytes:
        if self.length % 8:
            raise ValueError("length is not a whole number of bytes")
        return self.value.to_bytes(self.length // 8, "big")

    def to_hex(self) -> str:
        if self.length % 4:
            raise ValueError("length is not a whole number of nibbles")
        return format(self.value, f"0{self.length // 4}x") if self.length else ""

    def __str__(self) -> str:
        return self.to_str()
