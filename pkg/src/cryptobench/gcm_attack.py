"""AES-GCM records, keystream reuse and the nonce-reuse ("forbidden") attack.

The tag of a record with AAD blocks A_1..A_m and ciphertext blocks
C_1..C_n is

    tag = E_k(CB_0) + sum_{i=1}^{N} T_i H^(N+1-i),   N = m + n + 1,

where T is A || C || (len(A) || len(C)), zero-padded per part, and H =
E_k(0^128). Two records under one IV share E_k(CB_0), so the XOR of their
equations is a polynomial in H with known coefficients. When part of the
AAD is secret but sits at the same power in every record, it cancels in
the difference as well. The attack code only sees records, never the key.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from cryptobench.gf2_128 import RING128, GF128, block_to_elem, elem_to_block, parse_sparse

HEADER_LEN = 8
IV_LEN = 12
TAG_LEN = 16
SECRET_LEN = 8
BLOCK = 16

AAD_NONE = "none"
AAD_HEADER_IV = "header_iv"
AAD_SECRET_SUFFIX = "secret_suffix"
AAD_MODES = (AAD_NONE, AAD_HEADER_IV, AAD_SECRET_SUFFIX)

TASK2_H = parse_sparse(
    "a^126 + a^125 + a^122 + a^120 + a^119 + a^116 + a^114 + a^111 + a^110 + a^107 + a^99 + a^96"
    " + a^95 + a^94 + a^93 + a^92 + a^90 + a^89 + a^87 + a^85 + a^84 + a^83 + a^82 + a^81 + a^80"
    " + a^78 + a^76 + a^73 + a^67 + a^66 + a^62 + a^61 + a^60 + a^59 + a^56 + a^53 + a^52 + a^49"
    " + a^47 + a^45 + a^40 + a^39 + a^38 + a^37 + a^36 + a^35 + a^34 + a^33 + a^29 + a^28 + a^24"
    " + a^22 + a^21 + a^19 + a^18 + a^17 + a^16 + a^14 + a^11 + a^10 + a^9 + a^6 + a^4 + a^2"
)
TASK3_H = parse_sparse(
    "a^123 + a^122 + a^112 + a^110 + a^107 + a^102 + a^100 + a^99 + a^97 + a^96 + a^95 + a^92"
    " + a^90 + a^87 + a^85 + a^83 + a^82 + a^81 + a^78 + a^77 + a^74 + a^73 + a^71 + a^70 + a^65"
    " + a^63 + a^62 + a^60 + a^59 + a^58 + a^57 + a^54 + a^53 + a^50 + a^49 + a^47 + a^45 + a^43"
    " + a^42 + a^41 + a^37 + a^36 + a^32 + a^30 + a^28 + a^23 + a^13 + a^12 + a^10 + a^7 + a^5"
    " + a^3 + 1"
)
TASK1_CRIB = "Hello, Bob! How's everything?"
TASK1_EXPECTED_5 = "Lincoln Park, 10:15."


class AuthenticationError(ValueError):
    pass


class AttackError(RuntimeError):
    def __init__(self, message: str, candidates: Iterable[int] = ()):
        super().__init__(message)
        self.candidates = set(candidates)


class AesBlockCipher:
    """AES single-block permutation; the key length picks AES-128/192/256."""

    def __init__(self, key: bytes):
        if len(key) not in (16, 24, 32):
            raise ValueError("AES key must be 16, 24 or 32 bytes")
        self._enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()

    def encrypt(self, block: bytes) -> bytes:
        return self._enc.update(block)


@dataclass(frozen=True)
class GcmRecord:
    header: bytes
    iv: bytes
    payload: bytes
    tag: bytes

    def __post_init__(self):
        if len(self.header) != HEADER_LEN or len(self.iv) != IV_LEN or len(self.tag) != TAG_LEN:
            raise ValueError("header, IV and tag must be 8, 12 and 16 bytes")

    def to_bytes(self) -> bytes:
        return self.header + self.iv + self.payload + self.tag

    @classmethod
    def from_bytes(cls, data: bytes) -> GcmRecord:
        if len(data) < HEADER_LEN + IV_LEN + TAG_LEN:
            raise ValueError(f"record of {len(data)} bytes is shorter than 36")
        return cls(data[:8], data[8:20], data[20:-16], data[-16:])

    def blocks(self) -> int:
        return -(-len(self.payload) // BLOCK)


def aad_for(header: bytes, iv: bytes, mode: str, secret: bytes = b"") -> bytes:
    if mode == AAD_NONE:
        return b""
    if mode == AAD_HEADER_IV:
        return header + iv
    if mode == AAD_SECRET_SUFFIX:
        if len(secret) != SECRET_LEN:
            raise ValueError("the secret AAD suffix is 8 bytes")
        return header + iv + secret
    raise ValueError(f"unknown AAD mode {mode!r}")


def _pad_blocks(data: bytes) -> list[int]:
    return [block_to_elem(data[i:i + BLOCK].ljust(BLOCK, b"\0")) for i in range(0, len(data), BLOCK)]


def tag_blocks(aad: bytes, ciphertext: bytes) -> list[int]:
    """T_1..T_N as field elements, the length block last."""
    lengths = (8 * len(aad)).to_bytes(8, "big") + (8 * len(ciphertext)).to_bytes(8, "big")
    return _pad_blocks(aad) + _pad_blocks(ciphertext) + [block_to_elem(lengths)]


def ghash(h: int, blocks: Sequence[int]) -> int:
    # Horner: ((T_1 H + T_2) H + ...) H gives T_i H^(N+1-i)
    acc = 0
    for t in blocks:
        acc = GF128.mul(acc ^ t, h)
    return acc


def _inc32(block: bytes) -> bytes:
    ctr = (int.from_bytes(block[12:], "big") + 1) & 0xFFFFFFFF
    return block[:12] + ctr.to_bytes(4, "big")


def _keystream(cipher: AesBlockCipher, cb0: bytes, length: int) -> bytes:
    out = bytearray()
    cb = cb0
    while len(out) < length:
        cb = _inc32(cb)
        out += cipher.encrypt(cb)
    return bytes(out[:length])


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def _cb0(iv: bytes) -> bytes:
    if len(iv) != IV_LEN:
        raise ValueError("IV must be 12 bytes")
    return iv + b"\0\0\0\1"


def _tag(cipher: AesBlockCipher, iv: bytes, aad: bytes, ciphertext: bytes) -> bytes:
    h = block_to_elem(cipher.encrypt(bytes(BLOCK)))
    ek0 = block_to_elem(cipher.encrypt(_cb0(iv)))
    return elem_to_block(ek0 ^ ghash(h, tag_blocks(aad, ciphertext)))


def gcm_seal(key: bytes, header: bytes, iv: bytes, plaintext: bytes, aad: bytes | None = None) -> GcmRecord:
    """Encrypt and authenticate; AAD defaults to header || iv."""
    cipher = AesBlockCipher(key)
    aad = header + iv if aad is None else aad
    ct = _xor(plaintext, _keystream(cipher, _cb0(iv), len(plaintext)))
    return GcmRecord(header, iv, ct, _tag(cipher, iv, aad, ct))


def gcm_open(key: bytes, record: GcmRecord, aad: bytes | None = None) -> bytes:
    cipher = AesBlockCipher(key)
    aad = record.header + record.iv if aad is None else aad
    if _tag(cipher, record.iv, aad, record.payload) != record.tag:
        raise AuthenticationError("tag mismatch")
    return _xor(record.payload, _keystream(cipher, _cb0(record.iv), len(record.payload)))


# --- the attacker's view ---------------------------------------------------


@dataclass(frozen=True)
class TagEquation:
    """tag = mask + sum_p coeffs[p] H^p for p >= 1; coeffs[0] is unused.

    ``mask`` is E_k(CB_0), plus the secret AAD term when part of the AAD is
    unknown (that part is taken as zero in ``coeffs``).
    """
    coeffs: tuple[int, ...]
    tag: int
    unknown_power: int | None = None

    def known_sum(self, h: int) -> int:
        return RING128.eval(list(self.coeffs), h)


def known_aad(record: GcmRecord, mode: str) -> bytes:
    if mode == AAD_SECRET_SUFFIX:
        return aad_for(record.header, record.iv, mode, bytes(SECRET_LEN))
    return aad_for(record.header, record.iv, mode)


def tag_equation(record: GcmRecord, mode: str = AAD_HEADER_IV) -> TagEquation:
    aad = known_aad(record, mode)
    ts = tag_blocks(aad, record.payload)
    n = len(ts)
    coeffs = [0] * (n + 1)
    for i, t in enumerate(ts, start=1):
        coeffs[n + 1 - i] = t
    unknown = None
    if mode == AAD_SECRET_SUFFIX:
        # the secret bytes sit in the last AAD block
        unknown = n + 1 - len(_pad_blocks(aad))
    return TagEquation(tuple(coeffs), block_to_elem(record.tag), unknown)


def difference_poly(e1: TagEquation, e2: TagEquation) -> list[int]:
    size = max(len(e1.coeffs), len(e2.coeffs))
    c1 = list(e1.coeffs) + [0] * (size - len(e1.coeffs))
    c2 = list(e2.coeffs) + [0] * (size - len(e2.coeffs))
    g = [a ^ b for a, b in zip(c1, c2)]
    g[0] = e1.tag ^ e2.tag
    return RING128.norm(g)


def _check_same_iv(records: Sequence[GcmRecord]) -> None:
    if len({r.iv for r in records}) != 1:
        raise ValueError("records do not share an IV")
    if len(set(records)) != len(records):
        raise ValueError("identical records carry no information")


def _check_secret_alignment(records: Sequence[GcmRecord]) -> None:
    if len({r.header for r in records}) != 1:
        raise ValueError("secret AAD cancels only for equal headers")
    if len({len(r.payload) for r in records}) != 1:
        raise ValueError("secret AAD cancels only for equal ciphertext lengths")


def recover_h_from_pair(r1: GcmRecord, r2: GcmRecord, aad_mode: str = AAD_HEADER_IV,
                        rng: random.Random | None = None) -> set[tuple[int, int]]:
    """Candidates (H, mask) from two same-IV records; mask is E_k(CB_0) (see TagEquation)."""
    _check_same_iv([r1, r2])
    if aad_mode == AAD_SECRET_SUFFIX:
        _check_secret_alignment([r1, r2])
    e1, e2 = tag_equation(r1, aad_mode), tag_equation(r2, aad_mode)
    g = difference_poly(e1, e2)
    if len(g) < 2:
        if not g:
            raise AttackError("the two tag equations coincide")
        return set()
    return {(h, e1.tag ^ e1.known_sum(h)) for h in RING128.find_roots(g, rng)}


def recover_h_from_triple(r1: GcmRecord, r2: GcmRecord, r3: GcmRecord,
                          aad_mode: str = AAD_SECRET_SUFFIX, rng: random.Random | None = None) -> int:
    """The common root of the r1-r2 and r1-r3 difference polynomials."""
    recs = [r1, r2, r3]
    _check_same_iv(recs)
    _check_secret_alignment(recs)
    eqs = [tag_equation(r, aad_mode) for r in recs]
    g12 = difference_poly(eqs[0], eqs[1])
    g13 = difference_poly(eqs[0], eqs[2])
    common = RING128.gcd(g12, g13)
    roots = RING128.find_roots(common, rng) if len(common) >= 2 else set()
    if len(roots) != 1:
        raise AttackError(f"{len(roots)} common roots instead of one", roots)
    return next(iter(roots))


def mask_for(record: GcmRecord, h: int, aad_mode: str = AAD_HEADER_IV) -> int:
    eq = tag_equation(record, aad_mode)
    return eq.tag ^ eq.known_sum(h)


def forge(record: GcmRecord, new_payload: bytes, h: int, ek_cb0: int,
          aad_mode: str = AAD_HEADER_IV) -> GcmRecord:
    """Same header and IV, new ciphertext, tag recomputed from (H, mask)."""
    if aad_mode == AAD_SECRET_SUFFIX and -(-len(new_payload) // BLOCK) != record.blocks():
        raise ValueError("with a secret AAD part the block count must stay the same")
    candidate = GcmRecord(record.header, record.iv, new_payload, bytes(TAG_LEN))
    eq = tag_equation(candidate, aad_mode)
    return GcmRecord(record.header, record.iv, new_payload, elem_to_block(ek_cb0 ^ eq.known_sum(h)))


# --- keystream reuse and payload edits -------------------------------------


def keystream_reuse_decrypt(known: GcmRecord, known_plain: bytes, target: GcmRecord) -> bytes:
    if known.iv != target.iv:
        raise ValueError("records use different IVs")
    return _xor(_xor(target.payload, known.payload), known_plain)


def payload_xor(r1: GcmRecord, r2: GcmRecord) -> bytes:
    """C1 xor C2 over the shorter length; equals P1 xor P2 under a shared IV."""
    return _xor(r1.payload, r2.payload)


def flip_bit(payload: bytes, bit: int) -> bytes:
    out = bytearray(payload)
    out[bit // 8] ^= 0x80 >> (bit % 8)
    return bytes(out)


def splice(base: bytes, donor: bytes, start: int, stop: int) -> bytes:
    if not 0 <= start <= stop <= min(len(base), len(donor)):
        raise ValueError("splice range outside the payloads")
    return base[:start] + donor[start:stop] + base[stop:]


# --- record files ----------------------------------------------------------


def read_record(path: str | Path) -> GcmRecord:
    return GcmRecord.from_bytes(Path(path).read_bytes())


def write_record(path: str | Path, record: GcmRecord) -> None:
    Path(path).write_bytes(record.to_bytes())


def load_task_dir(path: str | Path) -> dict[int, GcmRecord]:
    """Records named <k>.message, keyed by k."""
    out = {}
    for p in Path(path).iterdir():
        if p.suffix == ".message" and p.stem.isdigit():
            out[int(p.stem)] = read_record(p)
    if not out:
        raise FileNotFoundError(f"no <k>.message files in {path}")
    return dict(sorted(out.items()))


def same_iv_groups(records: dict[int, GcmRecord]) -> list[list[int]]:
    groups: dict[bytes, list[int]] = {}
    for k, r in records.items():
        groups.setdefault(r.iv, []).append(k)
    return [g for g in groups.values() if len(g) > 1]
