"""Zigzag scan plus signed Exp-Golomb coding of 8x8 quantised DCT blocks.

A block is written as a 6-bit count of its non-zero entries followed by the
codes of the zigzag-ordered values up to and including the last non-zero
one. Zero is the single bit 0. Any other v is bitlen(|v|) ones, a 0, a
sign bit (1 for positive) and the binary digits of |v| after the leading 1.

Scan order (row, column of each zigzag position)::

     0 (0,0)  1 (0,1)  2 (1,0)  3 (2,0)  4 (1,1)  5 (0,2)  6 (0,3)  7 (1,2)
     8 (2,1)  9 (3,0) 10 (4,0) 11 (3,1) 12 (2,2) 13 (1,3) 14 (0,4) 15 (0,5)
    16 (1,4) 17 (2,3) 18 (3,2) 19 (4,1) 20 (5,0) 21 (6,0) 22 (5,1) 23 (4,2)
    24 (3,3) 25 (2,4) 26 (1,5) 27 (0,6) 28 (0,7) 29 (1,6) 30 (2,5) 31 (3,4)
    32 (4,3) 33 (5,2) 34 (6,1) 35 (7,0) 36 (7,1) 37 (6,2) 38 (5,3) 39 (4,4)
    40 (3,5) 41 (2,6) 42 (1,7) 43 (2,7) 44 (3,6) 45 (4,5) 46 (5,4) 47 (6,3)
    48 (7,2) 49 (7,3) 50 (6,4) 51 (5,5) 52 (4,6) 53 (3,7) 54 (4,7) 55 (5,6)
    56 (6,5) 57 (7,4) 58 (7,5) 59 (6,6) 60 (5,7) 61 (6,7) 62 (7,6) 63 (7,7)
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from cryptobench.bits import BitString

SIDE = 8
CELLS = SIDE * SIDE
PREFIX_BITS = 6
MAX_NONZERO = (1 << PREFIX_BITS) - 1


def _zigzag_order() -> list[tuple[int, int]]:
    order = []
    for s in range(2 * SIDE - 1):
        diag = [(i, s - i) for i in range(SIDE) if 0 <= s - i < SIDE]
        # even anti-diagonals run bottom-left to top-right
        order.extend(reversed(diag) if s % 2 == 0 else diag)
    return order


ZIGZAG = tuple(_zigzag_order())


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class QuantMatrix:
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.values) != SIDE or any(len(r) != SIDE for r in self.values):
            raise ValueError("expected 8 rows of 8 integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> QuantMatrix:
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def from_flat(cls, flat: Sequence[int]) -> QuantMatrix:
        if len(flat) != CELLS:
            raise ValueError(f"expected {CELLS} values, got {len(flat)}")
        return cls.from_rows([flat[i:i + SIDE] for i in range(0, CELLS, SIDE)])

    def nonzero(self) -> int:
        return sum(1 for r in self.values for v in r if v)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in r) for r in self.values)


def zigzag(m: QuantMatrix) -> list[int]:
    return [m.values[i][j] for i, j in ZIGZAG]


def unzigzag(vec: Sequence[int]) -> QuantMatrix:
    if len(vec) != CELLS:
        raise ValueError(f"expected {CELLS} values")
    rows = [[0] * SIDE for _ in range(SIDE)]
    for v, (i, j) in zip(vec, ZIGZAG):
        rows[i][j] = v
    return QuantMatrix.from_rows(rows)


def expgolomb_encode(v: int) -> BitString:
    if v == 0:
        return BitString(0, 1)
    mag = abs(v)
    k = mag.bit_length()
    head = ((1 << k) - 1) << 1  # k ones and the terminating zero
    sign = 1 if v > 0 else 0
    residual = mag - (1 << (k - 1))
    return BitString((((head << 1) | sign) << (k - 1)) | residual, 2 * k + 1)


def code_length(v: int) -> int:
    return 1 if v == 0 else 2 * abs(v).bit_length() + 1


def _read(bits: BitString, pos: int) -> tuple[int, int]:
    n = bits.length
    k = 0
    while True:
        if pos >= n:
            raise DecodeError("truncated length prefix")
        if not bits[pos]:
            pos += 1
            break
        k += 1
        pos += 1
    if k == 0:
        return 0, pos
    if pos + k > n:
        raise DecodeError("truncated sign or residual")
    sign = bits[pos]
    residual = bits.slice(pos + 1, pos + k).value if k > 1 else 0
    mag = (1 << (k - 1)) | residual
    return (mag if sign else -mag), pos + k


def expgolomb_decode(bits: BitString) -> int:
    v, pos = _read(bits, 0)
    if pos != bits.length:
        raise DecodeError("trailing bits after codeword")
    return v


def encode_matrix(m: QuantMatrix) -> BitString:
    vec = zigzag(m)
    count = sum(1 for v in vec if v)
    if count > MAX_NONZERO:
        raise ValueError(f"{count} non-zero entries do not fit the 6-bit prefix")
    last = max((i for i, v in enumerate(vec) if v), default=-1)
    parts = [BitString(count, PREFIX_BITS)]
    parts.extend(expgolomb_encode(v) for v in vec[: last + 1])
    return BitString.concat(parts)


def decode_stream(bits: BitString, pos: int = 0) -> tuple[QuantMatrix, int]:
    """Decode one block starting at ``pos``; returns it and the next position."""
    if pos + PREFIX_BITS > bits.length:
        raise DecodeError("truncated count prefix")
    count = bits.slice(pos, pos + PREFIX_BITS).value
    pos += PREFIX_BITS
    vec: list[int] = []
    seen = 0
    while seen < count:
        if len(vec) == CELLS:
            raise DecodeError("more non-zero entries announced than cells")
        v, pos = _read(bits, pos)
        vec.append(v)
        seen += v != 0
    vec.extend([0] * (CELLS - len(vec)))
    return unzigzag(vec), pos


def decode_matrix(bits: BitString) -> QuantMatrix:
    m, pos = decode_stream(bits)
    if pos != bits.length:
        raise DecodeError("trailing bits after block")
    return m


# --- corpus ----------------------------------------------------------------

_INT = re.compile(r"-?\d+")


def parse_corpus(text: str) -> list[QuantMatrix]:
    """Blank-line separated blocks of 64 integers (8 rows of 8, or any layout).

    When there are no blank-line separators, or the blocks do not hold 64
    integers each, the whole text is read as a flat stream split every 64.
    """
    blocks = [b for b in re.split(r"\n\s*\n", text.strip()) if b.strip()]
    nums = [[int(t) for t in _INT.findall(b)] for b in blocks]
    if nums and all(len(b) == CELLS for b in nums):
        return [QuantMatrix.from_flat(b) for b in nums]
    flat = [int(t) for t in _INT.findall(text)]
    if not flat or len(flat) % CELLS:
        raise ValueError(f"corpus holds {len(flat)} integers, not a positive multiple of {CELLS}")
    return [QuantMatrix.from_flat(flat[i:i + CELLS]) for i in range(0, len(flat), CELLS)]


def read_corpus(path: str | Path) -> list[QuantMatrix]:
    return parse_corpus(Path(path).read_text())


@dataclass(frozen=True)
class CorpusStats:
    matrices: int
    total_bits: int
    lengths: Counter

    @property
    def mean_bits(self) -> float:
        return self.total_bits / self.matrices if self.matrices else 0.0


def stats(matrices: Iterable[QuantMatrix]) -> CorpusStats:
    lengths: Counter = Counter()
    total = count = 0
    for m in matrices:
        n = encode_matrix(m).length
        lengths[n] += 1
        total += n
        count += 1
    return CorpusStats(count, total, lengths)


def corpus_stats(path: str | Path) -> CorpusStats:
    return stats(read_corpus(path))


# Worked example: zigzag sequence read from the annotated 91-bit string.
WORKED_SEQUENCE = (47, 9, -12, 3, 10, 2, 0, -1, -5, 1, -2, -1, 1, -4, 1)
WORKED_BITS = (
    "001110" "1111110101111" "111101001" "111100100" "11011" "111101010" "11010" "0" "100"
    "1110001" "101" "11000" "100" "101" "1110000" "101"
)


def worked_matrix() -> QuantMatrix:
    return unzigzag(list(WORKED_SEQUENCE) + [0] * (CELLS - len(WORKED_SEQUENCE)))
