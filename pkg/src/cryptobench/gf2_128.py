"""Binary fields GF(2^k), polynomials over them, and root finding.

A field element is an int whose bit i is the coefficient of x^i. GCM
writes blocks the other way round: the most significant bit of the first
byte is the x^0 coefficient. ``block_to_elem`` and ``elem_to_block`` map
between the two layouts. GF(2^8) is built from the same class so that root
finding can be checked against exhaustive search.
"""

from __future__ import annotations

import random
import re
from typing import Sequence

GCM_MODULUS = (1 << 128) | 0x87  # x^128 + x^7 + x^2 + x + 1
AES_MODULUS = 0x11B  # x^8 + x^4 + x^3 + x + 1

Poly = list  # coefficient list, lowest degree first, no trailing zeros


_SLOTS = bytes.maketrans(b"01", b"\x00\x01")
_LOW_BIT = bytes(48 + (i & 1) for i in range(256))


def _spread_byte(b: int) -> bytes:
    r = 0
    for i in range(8):
        if b >> i & 1:
            r |= 1 << (2 * i)
    return r.to_bytes(2, "big")


_SQUARE_BYTES = [_spread_byte(b) for b in range(256)]


def clmul_reference(a: int, b: int) -> int:
    """Shift-and-add carryless product."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


class BinaryField:
    """GF(2^k) modulo ``modulus``; small fields multiply through log tables."""

    TABLE_LIMIT = 12

    def __init__(self, k: int, modulus: int):
        if modulus.bit_length() != k + 1:
            raise ValueError("modulus must have degree k")
        self.k = k
        self.modulus = modulus
        self.mask = (1 << k) - 1
        self.order = 1 << k
        self._taps = [i for i in range(k) if modulus >> i & 1]
        self._nbytes = (k + 7) // 8
        self._log: list[int] | None = None
        self._exp: list[int] | None = None
        if k <= self.TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"BinaryField(2^{self.k})"

    def _build_tables(self) -> None:
        n = self.order - 1
        for g in range(2, self.order):
            exp = [1] * (2 * n)
            x = 1
            for i in range(1, n):
                x = self.mul_slow(x, g)
                if x == 1:
                    break
                exp[i] = x
            else:
                for i in range(n, 2 * n):
                    exp[i] = exp[i - n]
                log = [0] * self.order
                for i in range(n):
                    log[exp[i]] = i
                self._exp, self._log = exp, log
                return
        raise ValueError("modulus is not irreducible")

    def reduce(self, r: int) -> int:
        k = self.k
        while r >> k:
            hi = r >> k
            r &= self.mask
            for t in self._taps:
                r ^= hi << t
        return r

    def mul_slow(self, a: int, b: int) -> int:
        return self.reduce(clmul_reference(a, b))

    def mul(self, a: int, b: int) -> int:
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        # one byte per bit: column sums stay below 256, so the low bit of
        # each product byte is the carryless coefficient
        width = 8 * self._nbytes
        sa = int.from_bytes(format(a, f"0{width}b").encode().translate(_SLOTS), "big")
        sb = int.from_bytes(format(b, f"0{width}b").encode().translate(_SLOTS), "big")
        prod = (sa * sb).to_bytes(2 * width, "big").translate(_LOW_BIT)
        return self.reduce(int(prod, 2))

    def square(self, a: int) -> int:
        if self._log is not None:
            return self.mul(a, a)
        spread = b"".join([_SQUARE_BYTES[c] for c in a.to_bytes(self._nbytes, "big")])
        return self.reduce(int.from_bytes(spread, "big"))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            e >>= 1
            if e:
                a = self.square(a)
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def trace(self, a: int) -> int:
        t = 0
        for _ in range(self.k):
            t ^= a
            a = self.square(a)
        return t

    def random(self, rng: random.Random) -> int:
        return rng.getrandbits(self.k)


GF128 = BinaryField(128, GCM_MODULUS)
GF256 = BinaryField(8, AES_MODULUS)


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    return GF128.mul(a, b)


def inv(a: int) -> int:
    return GF128.inv(a)


def gpow(a: int, e: int) -> int:
    return GF128.pow(a, e)


# --- GCM block layout ------------------------------------------------------


def _reverse128(v: int) -> int:
    return int(format(v, "0128b")[::-1], 2)


def block_to_elem(block: bytes) -> int:
    if len(block) != 16:
        raise ValueError("a block is 16 bytes")
    return _reverse128(int.from_bytes(block, "big"))


def elem_to_block(e: int) -> bytes:
    return _reverse128(e).to_bytes(16, "big")


def to_hex(e: int) -> str:
    return elem_to_block(e).hex()


def from_hex(h: str) -> int:
    h = h.strip().lower().removeprefix("0x")
    if len(h) != 32:
        raise ValueError("expected 32 hex characters")
    return block_to_elem(bytes.fromhex(h))


def gcm_mult_reference(x: int, y: int) -> int:
    """Bit-serial multiply on raw 128-bit block integers, as the GCM standard spells it."""
    r = 0xE1 << 120
    z, v = 0, y
    for i in range(128):
        if (x >> (127 - i)) & 1:
            z ^= v
        v = (v >> 1) ^ r if v & 1 else v >> 1
    return z


# --- sparse sums of generator powers ---------------------------------------


def to_sparse(e: int, var: str = "a") -> str:
    if e == 0:
        return "0"
    terms = []
    for i in reversed(range(e.bit_length())):
        if e >> i & 1:
            terms.append("1" if i == 0 else var if i == 1 else f"{var}^{i}")
    return " + ".join(terms)


_TERM = re.compile(r"^(?:1|([a-zA-Z])(?:\^\{?(\d+)\}?)?)$")


def parse_sparse(text: str) -> int:
    """Inverse of ``to_sparse``; also accepts TeX braces and line breaks."""
    text = text.replace("$", "").replace("\\", "")
    text = re.sub(r"\s+", "", text)
    if text in ("", "0"):
        return 0
    e = 0
    for term in text.split("+"):
        if not term:
            continue
        mt = _TERM.match(term)
        if not mt:
            raise ValueError(f"cannot parse term {term!r}")
        power = 0 if term == "1" else int(mt.group(2)) if mt.group(2) else 1
        if power >= 128:
            raise ValueError(f"power {power} outside the field")
        e ^= 1 << power
    return e


# --- polynomials over a binary field ---------------------------------------


class PolyRing:
    def __init__(self, field: BinaryField):
        self.F = field

    @staticmethod
    def norm(p: Sequence[int]) -> Poly:
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    @staticmethod
    def degree(p: Poly) -> int:
        return len(p) - 1

    def add(self, p: Poly, q: Poly) -> Poly:
        if len(p) < len(q):
            p, q = q, p
        out = list(p)
        for i, c in enumerate(q):
            out[i] ^= c
        return self.norm(out)

    def mul(self, p: Poly, q: Poly) -> Poly:
        if not p or not q:
            return []
        out = [0] * (len(p) + len(q) - 1)
        m = self.F.mul
        for i, a in enumerate(p):
            if a:
                for j, b in enumerate(q):
                    if b:
                        out[i + j] ^= m(a, b)
        return self.norm(out)

    def scale(self, p: Poly, c: int) -> Poly:
        return self.norm([self.F.mul(a, c) for a in p])

    def monic(self, p: Poly) -> Poly:
        if not p:
            return []
        return self.scale(p, self.F.inv(p[-1]))

    def divmod(self, p: Poly, q: Poly) -> tuple[Poly, Poly]:
        q = self.norm(q)
        if not q:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.norm(p))
        dq = len(q) - 1
        if len(r) <= dq:
            return [], r
        lead_inv = self.F.inv(q[-1])
        quo = [0] * (len(r) - dq)
        m = self.F.mul
        for i in range(len(r) - 1, dq - 1, -1):
            c = r[i]
            if not c:
                continue
            c = m(c, lead_inv)
            quo[i - dq] = c
            for j, b in enumerate(q):
                if b:
                    r[i - dq + j] ^= m(c, b)
        return self.norm(quo), self.norm(r[:dq])

    def mod(self, p: Poly, q: Poly) -> Poly:
        return self.divmod(p, q)[1]

    def gcd(self, p: Poly, q: Poly) -> Poly:
        p, q = self.norm(p), self.norm(q)
        while q:
            p, q = q, self.mod(p, q)
        return self.monic(p)

    def eval(self, p: Poly, h: int) -> int:
        acc = 0
        m = self.F.mul
        for c in reversed(p):
            acc = m(acc, h) ^ c
        return acc

    def from_roots(self, roots: Sequence[int]) -> Poly:
        p = [1]
        for r in roots:
            p = self.mul(p, [r, 1])
        return p

    def square_mod(self, p: Poly, g: Poly) -> Poly:
        # squaring is additive in characteristic 2: (sum c_i x^i)^2 = sum c_i^2 x^(2i)
        sq = [0] * (2 * len(p) - 1) if p else []
        for i, c in enumerate(p):
            sq[2 * i] = self.F.square(c)
        return self.mod(sq, g)

    def frobenius_x(self, g: Poly) -> Poly:
        """x^(2^k) mod g by k successive squarings."""
        t = self.mod([0, 1], g)
        for _ in range(self.F.k):
            t = self.square_mod(t, g)
        return t

    def _trace_map(self, beta: int, g: Poly) -> Poly:
        # Tr(beta x) = sum_j (beta x)^(2^j) mod g
        t = self.mod([0, beta], g)
        acc = list(t)
        for _ in range(self.F.k - 1):
            t = self.square_mod(t, g)
            acc = self.add(acc, t)
        return acc

    def find_roots(self, g: Poly, rng: random.Random | None = None) -> set[int]:
        """All roots of g in the field (distinct-linear-factor part, then trace splitting)."""
        g = self.norm(g)
        if len(g) < 2:
            raise ValueError("need a polynomial of degree at least 1")
        rng = rng or random.Random(0)
        g = self.monic(g)
        # x^(2^k) - x vanishes on the whole field
        split = self.gcd(g, self.add(self.frobenius_x(g), [0, 1]))
        roots: set[int] = set()
        self._split(split, rng, roots)
        return roots

    def _split(self, g: Poly, rng: random.Random, out: set[int]) -> None:
        d = len(g) - 1
        if d <= 0:
            return
        if d == 1:
            out.add(g[0])  # monic x + c has root c
            return
        while True:
            h = self.gcd(g, self._trace_map(self.F.random(rng) or 1, g))
            if 0 < len(h) - 1 < d:
                break
        self._split(h, rng, out)
        self._split(self.divmod(g, h)[0], rng, out)


RING128 = PolyRing(GF128)
RING256 = PolyRing(GF256)


def poly_eval(g: Poly, h: int) -> int:
    return RING128.eval(g, h)


def poly_gcd(g1: Poly, g2: Poly) -> Poly:
    return RING128.gcd(g1, g2)


def find_roots(g: Poly, rng: random.Random | None = None) -> set[int]:
    return RING128.find_roots(g, rng)


def brute_force_roots(ring: PolyRing, g: Poly) -> set[int]:
    return {x for x in range(ring.F.order) if ring.eval(g, x) == 0}
