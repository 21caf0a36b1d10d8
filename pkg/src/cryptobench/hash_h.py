"""The iterated hash h_i = m_i xor f(h_{i-1} xor m_i) and attacks on it.

The attacker only knows a store of pairs (x, f(x)). Every construction
below evaluates f at store points only, so the result can be checked with
the store alone. Writing g_i = h_{i-1} xor m_i, the digest telescopes to
the XOR of g_i xor f(g_i) over all blocks, which makes second preimages a
linear-algebra problem over the vectors y = x xor f(x).
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from cryptobench.bits import BitString
from cryptobench.f2linalg import F2Matrix, nullspace, solve

Q3_TEXT = "A random matrix is likely decent"
Q3_MESSAGE_HEX = "412072616e646f6d206d6174726978206973206c696b656c7920646563656e74"
F_OF_ZERO_HEX = "ff1282609f458d732888e2736fd1b98cc36f809b1c116e77015b8d7d4d8996ae"
Q3_PREIMAGE_HEX = "00" * 32 + F_OF_ZERO_HEX + Q3_MESSAGE_HEX


class UnknownPoint(KeyError):
    """f was needed at an input outside the pair store."""


class AttackFailure(RuntimeError):
    pass


class SecretFunction:
    """Seeded pseudorandom map on n-bit integers (keyed BLAKE2b)."""

    def __init__(self, n: int, seed: int | bytes):
        if n < 8 or n % 8 or n > 512:
            raise ValueError("n must be a multiple of 8 in [8, 512]")
        self.n = n
        key = seed if isinstance(seed, bytes) else str(seed).encode()
        self._key = hashlib.blake2b(key, digest_size=32).digest()

    def __call__(self, x: int) -> int:
        if not 0 <= x < 1 << self.n:
            raise ValueError("input out of range")
        d = hashlib.blake2b(x.to_bytes(self.n // 8, "big"), key=self._key, digest_size=self.n // 8)
        return int.from_bytes(d.digest(), "big")


class TableFunction:
    """f given by a value table; index = input."""

    def __init__(self, n: int, values: Sequence[int]):
        self.n = n
        self.values = tuple(values)
        if any(not 0 <= v < 1 << n for v in self.values):
            raise ValueError(f"table values must be {n}-bit integers")

    def __call__(self, x: int) -> int:
        if not 0 <= x < len(self.values):
            raise UnknownPoint(x)
        return self.values[x]


@dataclass(frozen=True)
class HashParams:
    n: int
    f: Callable[[int], int]

    def __post_init__(self):
        if self.n < 8 or self.n % 8:
            raise ValueError("block size must be a multiple of 8, at least 8")


def _blocks(n: int, m: BitString) -> list[int]:
    if m.length == 0 or m.length % n:
        raise ValueError(f"message must be a positive multiple of {n} bits, got {m.length}")
    return [b.value for b in m.blocks(n)]


def chain(f: Callable[[int], int], blocks: Sequence[int], state: int = 0) -> int:
    for b in blocks:
        state = b ^ f(state ^ b)
    return state


def hash_h(p: HashParams, m: BitString) -> BitString:
    return BitString(chain(p.f, _blocks(p.n, m)), p.n)


@dataclass(frozen=True)
class HashTrace:
    inputs: tuple[int, ...]   # g_j = h_{j-1} xor m_j
    states: tuple[int, ...]   # h_j


def hash_trace(p: HashParams, m: BitString) -> HashTrace:
    h = 0
    gs, hs = [], []
    for b in _blocks(p.n, m):
        g = h ^ b
        h = b ^ p.f(g)
        gs.append(g)
        hs.append(h)
    return HashTrace(tuple(gs), tuple(hs))


# --- the adversary's knowledge ---------------------------------------------


@dataclass(frozen=True)
class PairStore:
    n: int
    pairs: tuple[tuple[int, int], ...]
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for x, y in self.pairs:
            if x in lookup:
                raise ValueError(f"duplicate input {x:#x} in pair store")
            if not (0 <= x < 1 << self.n and 0 <= y < 1 << self.n):
                raise ValueError("pair does not fit the block size")
            lookup[x] = y
        object.__setattr__(self, "_lookup", lookup)

    def __len__(self) -> int:
        return len(self.pairs)

    def f(self, x: int) -> int:
        try:
            return self._lookup[x]
        except KeyError:
            raise UnknownPoint(x) from None

    @classmethod
    def sample(cls, f: Callable[[int], int], n: int, rng: random.Random, count: int | None = None) -> PairStore:
        """``count`` (default 10n) pairs at distinct random inputs."""
        count = 10 * n if count is None else count
        xs: dict[int, None] = {}
        while len(xs) < count:
            xs.setdefault(rng.getrandbits(n))
        return cls(n, tuple((x, f(x)) for x in xs))


def load_f_table(path: str | Path, n: int = 256) -> TableFunction:
    """Text file with one integer per line: line i holds f(i)."""
    values = [int(line) for line in Path(path).read_text().split()]
    if not values:
        raise ValueError("empty f table")
    return TableFunction(n, values)


def store_from_table(table: TableFunction) -> PairStore:
    return PairStore(table.n, tuple(enumerate(table.values)))


def _join(n: int, blocks: Sequence[int]) -> BitString:
    return BitString.concat(BitString(b, n) for b in blocks)


# --- attacks ---------------------------------------------------------------


def find_collision(store: PairStore) -> tuple[BitString, BitString]:
    """x||f(x) and y||f(y) both hash to zero."""
    if len(store) < 2:
        raise ValueError("need at least two pairs")
    (x, fx), (y, fy) = store.pairs[:2]
    m1, m2 = [x, fx], [y, fy]
    if chain(store.f, m1) != 0 or chain(store.f, m2) != 0:
        raise AssertionError("collision failed to verify")
    return _join(store.n, m1), _join(store.n, m2)


def second_preimage_prepend(store: PairStore, m: BitString, pair_index: int = 0) -> BitString:
    """x||f(x)||m, which returns the chain to the all-zero start state."""
    n = store.n
    blocks = _blocks(n, m)
    x, fx = store.pairs[pair_index]
    if chain(store.f, [x, fx]) != 0:
        raise AssertionError("prefix does not reset the state")
    return _join(n, [x, fx, *blocks])


def second_preimage_append(store: PairStore, m: BitString, digest: BitString, pair_index: int = 0) -> BitString:
    """m || H xor x || H xor f(x), which returns the chain to H."""
    n = store.n
    if digest.length != n:
        raise ValueError("digest has the wrong length")
    blocks = _blocks(n, m)
    x, fx = store.pairs[pair_index]
    h = digest.value
    tail = [h ^ x, h ^ fx]
    if chain(store.f, tail, h) != h:
        raise AssertionError("suffix does not return to the digest")
    return _join(n, [*blocks, *tail])


def blocks_from_inputs(store: PairStore, inputs: Sequence[int]) -> list[int]:
    """Message blocks whose chaining inputs g_j are exactly ``inputs``."""
    h = 0
    out = []
    for g in inputs:
        out.append(g ^ h)
        h ^= g ^ store.f(g)
    return out


def second_preimage_linear(store: PairStore, m: BitString, digest: BitString) -> BitString:
    """Write the digest as a XOR of y_i = x_i xor f(x_i) and rebuild blocks from the x_i.

    Raises AttackFailure when the digest lies outside the span of the y_i.
    """
    n = store.n
    if digest.length != n:
        raise ValueError("digest has the wrong length")
    original = _blocks(n, m)
    ys = [BitString(x ^ fx, n) for x, fx in store.pairs]
    a = F2Matrix.from_columns(ys)
    z = solve(a, digest)
    if z is None:
        raise AttackFailure("digest is outside the span of the stored y vectors")
    kernel = nullspace(a)
    # the empty combination is not a message; and m' must differ from m
    attempts = [z] + [z ^ k for k in kernel]
    for sel in attempts:
        chosen = [i for i in range(len(ys)) if sel[i]]
        if not chosen:
            continue
        for shift in range(len(chosen)):
            order = chosen[shift:] + chosen[:shift]
            blocks = blocks_from_inputs(store, [store.pairs[i][0] for i in order])
            if blocks == original:
                continue
            if chain(store.f, blocks) != digest.value:
                raise AssertionError("linear second preimage failed to verify")
            return _join(n, blocks)
    raise AttackFailure("every combination reproduced the original message")


def q3_second_preimage(f_zero: int) -> BitString:
    """0 || f(0) || m for the 256-bit text message."""
    store = PairStore(256, ((0, f_zero),))
    return second_preimage_prepend(store, BitString.from_text(Q3_TEXT))
