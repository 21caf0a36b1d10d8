"""Bob's modified Miller-Rabin test, the classical strong-pseudoprime test,
and exhaustive accept-set censuses over all bases.

Step labels follow the modified algorithm: ``"2"`` (a^m == 1), ``"3b"``
(n divides a + a^2 + 1), ``"4a"`` (n divides a + 1) and ``"5"`` (composite).
The classical test reports ``"23"`` for its merged first step.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from cryptobench.puzzles import modpow

CENSUS_LIMIT = 10**6


class Result(enum.Enum):
    PROBABLY_PRIME = "PROBABLY PRIME"
    COMPOSITE = "COMPOSITE"


@dataclass(frozen=True)
class Decomposition:
    n: int
    k: int
    l: int
    m: int

    def __post_init__(self):
        if (1 << self.k) * 3**self.l * self.m + 1 != self.n:
            raise ValueError("n - 1 != 2^k 3^l m")
        if self.m % 2 == 0 or self.m % 3 == 0 or self.k < 1:
            raise ValueError("residual must be coprime to 6 and k >= 1")


@dataclass(frozen=True)
class Verdict:
    value: Result
    stage: str
    iteration: int | None = None
    multiplications: int = 0

    def __post_init__(self):
        if (self.stage == "5") != (self.value is Result.COMPOSITE):
            raise ValueError("stage 5 is reserved for COMPOSITE")

    @property
    def probably_prime(self) -> bool:
        return self.value is Result.PROBABLY_PRIME


def decompose(n: int) -> Decomposition:
    if n < 5 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 5, got {n}")
    m = n - 1
    k = l = 0
    while m % 2 == 0:
        m //= 2
        k += 1
    while m % 3 == 0:
        m //= 3
        l += 1
    return Decomposition(n, k, l, m)


def _check_base(n: int, a: int) -> None:
    if not 2 <= a <= n - 2:
        raise ValueError(f"base must lie in [2, {n - 2}], got {a}")


class _Counter:
    """modpow wrapper tallying modular multiplications (square-and-multiply)."""

    def __init__(self):
        self.count = 0

    def pow(self, a: int, e: int, n: int) -> int:
        if e > 0:
            self.count += e.bit_length() - 1 + bin(e).count("1") - 1
        return modpow(a, e, n)

    def mul(self, x: int, y: int, n: int) -> int:
        self.count += 1
        return x * y % n


def bob_test(n: int, a: int, trace: list | None = None) -> Verdict:
    """The modified test, step for step.

    ``trace`` (if given) receives ``(step, a, b)`` tuples as the run proceeds.
    """
    dec = decompose(n)
    _check_base(n, a)
    ops = _Counter()
    rec = trace.append if trace is not None else (lambda item: None)

    a = ops.pow(a, dec.m, n)
    rec(("2", a, None))
    if a == 1:
        return Verdict(Result.PROBABLY_PRIME, "2", None, ops.count)
    for i in range(dec.l):
        b = ops.mul(a, a, n)
        rec(("3a", a, b))
        # a, b are reduced, so a + b + 1 lies in [1, 2n - 1]
        if (a + b + 1) % n == 0:
            return Verdict(Result.PROBABLY_PRIME, "3b", i, ops.count)
        a = ops.mul(a, b, n)
        rec(("3c", a, b))
    for i in range(dec.k):
        if (a + 1) % n == 0:
            return Verdict(Result.PROBABLY_PRIME, "4a", i, ops.count)
        a = ops.mul(a, a, n)
        rec(("4b", a, None))
    return Verdict(Result.COMPOSITE, "5", None, ops.count)


def standard_mr(n: int, a: int) -> Verdict:
    """Classical strong-pseudoprime test with odd part t = 3^l m."""
    dec = decompose(n)
    _check_base(n, a)
    ops = _Counter()
    a = ops.pow(a, 3**dec.l * dec.m, n)
    if a == 1:
        return Verdict(Result.PROBABLY_PRIME, "23", None, ops.count)
    for i in range(dec.k):
        if a == n - 1:
            return Verdict(Result.PROBABLY_PRIME, "4a", i, ops.count)
        a = ops.mul(a, a, n)
    return Verdict(Result.COMPOSITE, "5", None, ops.count)


TESTERS: dict[str, Callable[[int, int], Verdict]] = {"bob": bob_test, "standard": standard_mr}


# --- vectorised census -----------------------------------------------------


def _vpow(base: np.ndarray, exp: int, n: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % n
    while exp:
        if exp & 1:
            result = result * b % n
        b = b * b % n
        exp >>= 1
    return result


def _bob_accepts(n: int) -> np.ndarray:
    dec = decompose(n)
    a = np.arange(2, n - 1, dtype=np.int64)
    a = _vpow(a, dec.m, n)
    accepted = a == 1
    for _ in range(dec.l):
        b = a * a % n
        accepted |= (a + b + 1) % n == 0
        a = a * b % n
    for _ in range(dec.k):
        accepted |= (a + 1) % n == 0
        a = a * a % n
    return accepted


def _standard_accepts(n: int) -> np.ndarray:
    dec = decompose(n)
    a = np.arange(2, n - 1, dtype=np.int64)
    a = _vpow(a, 3**dec.l * dec.m, n)
    accepted = a == 1
    for _ in range(dec.k):
        accepted |= a == n - 1
        a = a * a % n
    return accepted


_ACCEPTS = {"bob": _bob_accepts, "standard": _standard_accepts}


def accept_census(n: int, tester: Literal["bob", "standard"] = "bob") -> set[int]:
    """{a in [2, n-2] : tester(n, a) is PROBABLY PRIME}, by exhaustive sweep.

    The sweep runs over all bases at once in int64, which bounds n well above
    the census limit (products stay below n^2 < 2^63).
    """
    if tester not in _ACCEPTS:
        raise ValueError(f"unknown tester {tester!r}")
    if n >= CENSUS_LIMIT:
        raise ValueError(f"census bound exceeded: n must be < {CENSUS_LIMIT}")
    decompose(n)
    hits = np.flatnonzero(_ACCEPTS[tester](n)) + 2
    return set(hits.tolist())


def is_probable_prime(n: int, bases: tuple[int, ...] = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)) -> bool:
    """Deterministic for n < 3.3e24 with the default bases."""
    if n < 2:
        return False
    for p in bases:
        if n % p == 0:
            return n == p
    if n < 5:
        return True
    return all(standard_mr(n, a).probably_prime for a in bases if a <= n - 2)


@dataclass(frozen=True)
class CensusRow:
    n: int
    bob: int
    standard: int
    equal: bool

    @property
    def liar_fraction(self) -> float:
        return self.bob / (self.n - 3)


def _census_row(n: int) -> CensusRow:
    b = accept_census(n, "bob")
    s = accept_census(n, "standard")
    return CensusRow(n, len(b), len(s), b == s)


def census_sweep(lo: int, hi: int, composites_only: bool = True, threads: int = 1) -> list[CensusRow]:
    """Compare both censuses for every odd n in [lo, hi)."""
    ns = [n for n in range(max(lo, 5) | 1, hi, 2) if not (composites_only and is_probable_prime(n))]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_census_row, ns, chunksize=64))
    return [_census_row(n) for n in ns]
