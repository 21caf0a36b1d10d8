"""CBC with chained IVs and the two-query CPA distinguishers.

The block cipher is any keyed permutation on n-bit integers. The default
is a lazily sampled uniform random permutation, seeded from (key, seed),
so distinct sessions are independent and every run is reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Protocol

from cryptobench.bits import BitString

DEFAULT_BLOCK_BITS = 16


class KeyedPermutation(Protocol):
    block_bits: int

    def encrypt(self, x: int) -> int: ...

    def decrypt(self, y: int) -> int: ...


class LazyRandomPermutation:
    """Uniform random permutation of {0..2^n - 1}, sampled on first use.

    Forward and inverse points are drawn from the unused part of the range,
    which yields exactly a uniform permutation however the queries interleave.
    """

    def __init__(self, block_bits: int, key: int, seed: int = 0):
        self.block_bits = block_bits
        self._size = 1 << block_bits
        self._rng = random.Random(f"prp:{block_bits}:{seed}:{key}")
        self._fwd: dict[int, int] = {}
        self._inv: dict[int, int] = {}

    def _fresh(self, taken: dict[int, int]) -> int:
        if len(taken) == self._size:
            raise RuntimeError("permutation exhausted")
        while True:
            v = self._rng.randrange(self._size)
            if v not in taken:
                return v

    def encrypt(self, x: int) -> int:
        y = self._fwd.get(x)
        if y is None:
            y = self._fresh(self._inv)
            self._fwd[x] = y
            self._inv[y] = x
        return y

    def decrypt(self, y: int) -> int:
        x = self._inv.get(y)
        if x is None:
            x = self._fresh(self._fwd)
            self._fwd[x] = y
            self._inv[y] = x
        return x


def cbc_encrypt(cipher: KeyedPermutation, iv: int, blocks: list[int]) -> list[int]:
    out = []
    prev = iv
    for p in blocks:
        prev = cipher.encrypt(p ^ prev)
        out.append(prev)
    return out


def cbc_decrypt(cipher: KeyedPermutation, iv: int, blocks: list[int]) -> list[int]:
    out = []
    prev = iv
    for c in blocks:
        out.append(cipher.decrypt(c) ^ prev)
        prev = c
    return out


@dataclass
class GameTranscript:
    queries: list[tuple[BitString, BitString, BitString]] = field(default_factory=list)
    guess: int | None = None
    win: bool | None = None


class CbcOracle:
    """Alice's side of the game: a key, the hidden bit and the chained IV."""

    def __init__(self, key: int, hidden_bit: int, iv: int, cipher: KeyedPermutation):
        if hidden_bit not in (0, 1):
            raise ValueError("hidden bit must be 0 or 1")
        self.n = cipher.block_bits
        self.key = key
        self.hidden_bit = hidden_bit
        self.next_iv = iv
        self.cipher = cipher
        self.transcript = GameTranscript()

    @classmethod
    def random(cls, rng: random.Random, block_bits: int = DEFAULT_BLOCK_BITS, seed: int = 0) -> CbcOracle:
        key = rng.getrandbits(block_bits)
        bit = rng.getrandbits(1)
        iv = rng.getrandbits(block_bits)
        return cls(key, bit, iv, LazyRandomPermutation(block_bits, key, seed))

    def _encrypt(self, m: BitString) -> BitString:
        iv = self.next_iv
        blocks = [b.value for b in m.blocks(self.n)] if m.length else []
        cts = cbc_encrypt(self.cipher, iv, blocks)
        if cts:
            self.next_iv = cts[-1]
        return BitString.concat(BitString(c, self.n) for c in [iv, *cts])

    def encrypt(self, m0: BitString, m1: BitString) -> BitString:
        """Encrypt m_{hidden bit}; the reply is IV || ciphertext blocks."""
        if m0.length != m1.length:
            raise ValueError("query messages must have equal length")
        if m0.length == 0 or m0.length % self.n:
            raise ValueError(f"query length must be a positive multiple of {self.n}")
        c = self._encrypt(m1 if self.hidden_bit else m0)
        self.transcript.queries.append((m0, m1, c))
        return c

    def decrypt(self, c: BitString) -> BitString:
        """Test hook: invert a reply with the key."""
        blocks = [b.value for b in c.blocks(self.n)]
        pts = cbc_decrypt(self.cipher, blocks[0], blocks[1:])
        return BitString.concat(BitString(p, self.n) for p in pts)

    def finish(self, guess: int) -> bool:
        self.transcript.guess = guess
        self.transcript.win = guess == self.hidden_bit
        return self.transcript.win


def _split(c: BitString, n: int) -> list[int]:
    return [b.value for b in c.blocks(n)]


def adversary_one(o: CbcOracle) -> int:
    n = o.n
    ones = (1 << n) - 1
    iv, ek_iv = _split(o.encrypt(BitString.zeros(n), BitString.zeros(n)), n)
    m20 = BitString(iv ^ ek_iv, n)
    m21 = BitString(iv ^ ek_iv ^ ones, n)
    _, c = _split(o.encrypt(m20, m21), n)
    return 0 if c == ek_iv else 1


def adversary_two(o: CbcOracle) -> int:
    n = o.n
    iv, c = _split(o.encrypt(BitString.zeros(n), BitString.ones(n)), n)
    m2 = BitString(iv ^ c, n)
    _, ek_iv = _split(o.encrypt(m2, m2), n)
    return 0 if c == ek_iv else 1


def coin_flip(o: CbcOracle, rng: random.Random | None = None) -> int:
    return (rng or random).getrandbits(1)


STRATEGIES: dict[str, Callable[..., int]] = {
    "one": adversary_one,
    "two": adversary_two,
    "random": coin_flip,
}


def estimate_advantage(strategy: str | Callable[[CbcOracle], int], trials: int, seed: int = 0,
                       block_bits: int = DEFAULT_BLOCK_BITS) -> Fraction:
    """|wins / trials - 1/2| over independent sessions."""
    if trials < 1:
        raise ValueError("need at least one trial")
    fn = STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    rng = random.Random(seed)
    wins = 0
    for t in range(trials):
        o = CbcOracle.random(rng, block_bits, seed=(seed << 32) | t)
        guess = fn(o, rng) if fn is coin_flip else fn(o)
        wins += o.finish(guess)
    return abs(Fraction(wins, trials) - Fraction(1, 2))
