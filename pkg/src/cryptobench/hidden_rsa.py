"""RSA behind an oracle that hides both n and e, and recovery of them.

For a candidate exponent e_hat with 2^e_hat >= Encr(2), the number
2^e_hat - Encr(2) is a multiple of n when the guess is right. Folding in
gcds with x^e_hat - Encr(x) for a few sampled x pins it down to n, while a
wrong guess collapses towards 1.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from cryptobench.primality import is_probable_prime
from cryptobench.puzzles import modpow

MESSAGE_BOUND = 10**70
FAVOURITE_EXPONENTS = (3, 5, 17, 257, 65537)
FACTOR_BOUND = 1 << 80
TRIAL_LIMIT = 10**6

CHALLENGE_Y = 71511896681324833458361392885184344933333159830863878600189212073777582178173
CHALLENGE_N = 76200708443433250012501342992033571586971760218934756930058661627867825188509
CHALLENGE_E = 65537
CHALLENGE_P = 232086664036792751646261018215123451301
CHALLENGE_Q = 328328681700354546732404725320581286809
CHALLENGE_D = 58041460011714671214337771652949080061981291861469879231637604933853779098273
CHALLENGE_PLAIN = 202010181600


class RecoveryError(RuntimeError):
    pass


@dataclass(frozen=True)
class RsaInstance:
    p: int
    q: int
    e: int
    n: int = 0
    d: int = 0

    def __post_init__(self):
        if self.p == self.q or self.p % 2 == 0 or self.q % 2 == 0:
            raise ValueError("p and q must be distinct odd primes")
        phi = (self.p - 1) * (self.q - 1)
        if math.gcd(self.e, self.p - 1) != 1 or math.gcd(self.e, self.q - 1) != 1:
            raise ValueError("e must be coprime with p-1 and q-1")
        if self.n and self.n != self.p * self.q:
            raise ValueError("n != p*q")
        object.__setattr__(self, "n", self.p * self.q)
        d = pow(self.e, -1, phi)
        if self.d and self.d != d:
            raise ValueError("d is not the inverse of e mod (p-1)(q-1)")
        object.__setattr__(self, "d", d)


def oracle_encrypt(inst: RsaInstance, x: int) -> int:
    if not 0 <= x < MESSAGE_BOUND:
        raise ValueError("message must be a non-negative integer with at most 70 digits")
    return modpow(x, inst.e, inst.n)


def random_prime(bits: int, rng: random.Random, coprime_to: int = 1) -> int:
    while True:
        p = rng.getrandbits(bits) | (3 << (bits - 2)) | 1
        if math.gcd(coprime_to, p - 1) == 1 and is_probable_prime(p):
            return p


def generate_instance(bits: int, e: int, rng: random.Random) -> RsaInstance:
    half = bits // 2
    p = random_prime(half, rng, e)
    while True:
        q = random_prime(bits - half, rng, e)
        if q != p:
            return RsaInstance(min(p, q), max(p, q), e)


# --- recovering (e, n) -----------------------------------------------------


class CachedOracle:
    """Memoises replies and counts the distinct queries made."""

    def __init__(self, query: Callable[[int], int]):
        self._query = query
        self.replies: dict[int, int] = {}

    def __call__(self, x: int) -> int:
        if x not in self.replies:
            self.replies[x] = self._query(x)
        return self.replies[x]

    @property
    def queries(self) -> int:
        return len(self.replies)


@dataclass
class AttackState:
    e_hat: int
    n_hat: int
    samples: list[tuple[int, int]] = field(default_factory=list)
    history: list[int] = field(default_factory=list)

    def absorb(self, x: int, y: int) -> None:
        # n_hat == 0 means no modulus yet: reduce by nothing
        r = modpow(x, self.e_hat, self.n_hat) if self.n_hat else x**self.e_hat
        self.n_hat = math.gcd(self.n_hat, abs(r - y))
        self.samples.append((x, y))
        self.history.append(self.n_hat)


def candidate_exponents(max_e: int) -> Iterator[int]:
    for e in FAVOURITE_EXPONENTS:
        if e <= max_e:
            yield e
    for e in range(3, max_e + 1, 2):
        if e not in FAVOURITE_EXPONENTS:
            yield e


def screen(e_hat: int, oracle: Callable[[int], int], xs: Iterable[int]) -> AttackState | None:
    """Refine the modulus estimate for one exponent; None if it collapses."""
    c2 = oracle(2)
    if 2**e_hat < c2:
        return None
    state = AttackState(e_hat, 2**e_hat - c2)
    state.history.append(state.n_hat)
    floor = c2
    for x in xs:
        y = oracle(x)
        floor = max(floor, y)
        state.absorb(x, y)
        if state.n_hat and state.n_hat <= floor:
            return None
    if state.n_hat <= floor:
        return None
    return state


def recover_public(query: Callable[[int], int], max_e: int = 65537, rng: random.Random | None = None,
                   samples: int = 5, probes: int = 3) -> tuple[int, int]:
    """Find (e, n) with x^e mod n == query(x), scanning candidate exponents."""
    rng = rng or random.Random(0)
    oracle = query if isinstance(query, CachedOracle) else CachedOracle(query)
    xs = [rng.randrange(3, MESSAGE_BOUND) for _ in range(samples)]
    for e_hat in candidate_exponents(max_e):
        state = screen(e_hat, oracle, xs)
        if state is None:
            continue
        if _verify(state, oracle, rng, probes):
            return state.e_hat, state.n_hat
    raise RecoveryError(f"no exponent up to {max_e} explains the oracle")


def _verify(state: AttackState, oracle: Callable[[int], int], rng: random.Random, probes: int,
            max_rounds: int = 64) -> bool:
    """Accept after ``probes`` consecutive agreeing probes.

    A disagreeing probe is folded into the estimate, which strips a leftover
    cofactor of n when the exponent is right.
    """
    agreed = 0
    for _ in range(max_rounds):
        x = rng.randrange(3, MESSAGE_BOUND)
        y = oracle(x)
        if modpow(x, state.e_hat, state.n_hat) == y:
            agreed += 1
            if agreed == probes:
                return True
            continue
        agreed = 0
        state.absorb(x, y)
        if state.n_hat <= max(v for _, v in state.samples):
            return False
    return False


# --- factoring and decryption ----------------------------------------------


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\0\0"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i, v in enumerate(sieve) if v]


_TRIAL_PRIMES: list[int] = []


def pollard_brent(n: int, rng: random.Random) -> int:
    """A non-trivial factor of the composite odd n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_semiprime(n: int, rng: random.Random | None = None) -> tuple[int, int]:
    if n > FACTOR_BOUND:
        raise ValueError(f"n has {n.bit_length()} bits, beyond the 80-bit rho bound; "
                         "use a sieve such as msieve or cado-nfs")
    if n < 4 or is_probable_prime(n):
        raise ValueError(f"{n} is not composite")
    if not _TRIAL_PRIMES:
        _TRIAL_PRIMES.extend(_small_primes(TRIAL_LIMIT))
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            return _ordered(p, n // p)
    p = 2 if n % 2 == 0 else pollard_brent(n, rng or random.Random(n))
    return _ordered(p, n // p)


def _ordered(p: int, q: int) -> tuple[int, int]:
    if not (is_probable_prime(p) and is_probable_prime(q)):
        raise ValueError(f"{p * q} is not a product of two primes")
    return min(p, q), max(p, q)


def decrypt(key: RsaInstance | tuple[int, int, int, int], y: int) -> int:
    if isinstance(key, RsaInstance):
        n, e, p, q = key.n, key.e, key.p, key.q
    else:
        n, e, p, q = key
    phi = (p - 1) * (q - 1)
    if math.gcd(e, phi) != 1:
        raise ValueError("e is not invertible mod (p-1)(q-1)")
    return modpow(y, pow(e, -1, phi), n)


@dataclass(frozen=True)
class AttackOutcome:
    e: int
    n: int
    p: int
    q: int
    plaintext: int
    queries: int


def attack(query: Callable[[int], int], ciphertext: int, max_e: int = 65537,
           rng: random.Random | None = None) -> AttackOutcome:
    """Recover (e, n), factor n and decrypt ``ciphertext``."""
    rng = rng or random.Random(0)
    oracle = CachedOracle(query)
    e, n = recover_public(oracle, max_e, rng)
    p, q = factor_semiprime(n, rng)
    return AttackOutcome(e, n, p, q, decrypt((n, e, p, q), ciphertext), oracle.queries)


def challenge_constant_checks() -> dict[str, bool]:
    phi = (CHALLENGE_P - 1) * (CHALLENGE_Q - 1)
    return {
        "p*q == n": CHALLENGE_P * CHALLENGE_Q == CHALLENGE_N,
        "e*d == 1 mod phi": CHALLENGE_E * CHALLENGE_D % phi == 1,
        "y^d mod n": decrypt((CHALLENGE_N, CHALLENGE_E, CHALLENGE_P, CHALLENGE_Q), CHALLENGE_Y) == CHALLENGE_PLAIN,
        "d == e^-1 mod phi": pow(CHALLENGE_E, -1, phi) == CHALLENGE_D,
    }
