"""Invariant checkers for the four warm-up puzzles."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable

RGB_MODULUS = 324


def popcount(x: int) -> int:
    return bin(x).count("1")


def winston_reachable(x: int, y: int) -> bool:
    """Inserting/removing 10..01 blocks or zeros never changes the parity of ones."""
    if x < 0 or y < 0:
        raise ValueError("non-negative integers only")
    return popcount(x) % 2 == popcount(y) % 2


class PolyInconsistency(ValueError):
    """The same plaintext was recorded with two different ciphertexts."""


def poly_consistent(pairs: Iterable[tuple[int, int]]) -> bool:
    """Could an integer-coefficient polynomial produce every (x, p(x)) record?

    Only the necessary divisibility condition (a - b) | (p(a) - p(b)) is checked.
    """
    seen: dict[int, int] = {}
    for x, y in pairs:
        if x in seen and seen[x] != y:
            raise PolyInconsistency(f"input {x} maps to both {seen[x]} and {y}")
        seen[x] = y
    items = sorted(seen.items())
    for i, (a, pa) in enumerate(items):
        for b, pb in items[i + 1:]:
            if (pa - pb) % (a - b):
                return False
    return True


class Query(enum.Enum):
    RED = "RED"
    GREEN = "GREEN"
    BLUE = "BLUE"


_RGB_MAPS = {
    Query.RED: (1, 18, 18, -1),
    Query.GREEN: (17, 6, -6, 17),
    Query.BLUE: (-10, -15, 15, -10),
}


@dataclass(frozen=True)
class RgbState:
    a: int
    b: int

    def __post_init__(self):
        if not (0 <= self.a < RGB_MODULUS and 0 <= self.b < RGB_MODULUS):
            raise ValueError(f"state coordinates must lie in [0, {RGB_MODULUS})")


RGB_START = RgbState(20, 20)


def rgb_step(s: RgbState, query: Query | str) -> RgbState:
    # Both coordinates update together; reducing mod 324 is the reset rule.
    q = Query(query) if isinstance(query, str) else query
    p, r, t, u = _RGB_MAPS[q]
    return RgbState((p * s.a + r * s.b) % RGB_MODULUS, (t * s.a + u * s.b) % RGB_MODULUS)


def rgb_invariant(s: RgbState) -> int:
    return (s.a * s.a + s.b * s.b) % RGB_MODULUS


def rgb_reachable(start: RgbState = RGB_START) -> set[RgbState]:
    """Breadth-first closure of ``start`` under all three queries."""
    seen = {start}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        for q in Query:
            nxt = rgb_step(s, q)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def modpow(base: int, exp: int, modulus: int) -> int:
    """Left-to-right square-and-multiply."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if exp < 0:
        raise ValueError("negative exponent")
    result = 1 % modulus
    base %= modulus
    for bit in bin(exp)[2:] if exp else "":
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result
