"""Acceptance criteria, each at its stated tolerance and time budget.

Run with ``pytest tests/test_acceptance.py -rA``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction

import pytest

from cryptobench import (cbc_cpa, f2linalg, gcm_attack as ga, gf2_128 as gf, hash_h as hh, hidden_rsa as hr,
                         jpeg_codec as jc, orthomorph as om, primality, puzzles, stairsbox as sb)
from cryptobench.bits import BitString
from cryptobench.f2linalg import F2Matrix, rank

crit = pytest.mark.criterion


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


# --- 1, 2: primality ------------------------------------------------------


@crit(1, "primality: bob_test accepts every prime with every base")
def test_c1_primes_always_accepted():
    with Budget(60):
        exceptions = []
        for n in range(5, 10**4, 2):
            if primality.is_probable_prime(n):
                census = primality.accept_census(n, "bob")
                if len(census) != n - 3:
                    exceptions.append(n)
    assert exceptions == []


@pytest.fixture(scope="module")
def census_rows():
    start = time.perf_counter()
    rows = primality.census_sweep(3, 10**4, composites_only=True)
    return rows, time.perf_counter() - start


@crit(2, "primality: modified and standard censuses coincide, liar fraction < 1/4")
def test_c2_censuses_identical(census_rows):
    rows, elapsed = census_rows
    assert elapsed < 120
    assert rows and all(r.n % 2 and not primality.is_probable_prime(r.n) for r in rows)
    unequal = [r.n for r in rows if not r.equal]
    assert unequal == []


@crit(2, "primality: modified and standard censuses coincide, liar fraction < 1/4")
def test_c2_liar_fraction(census_rows):
    rows, elapsed = census_rows
    assert elapsed < 120
    assert all(r.liar_fraction < Fraction(1, 4) for r in rows if r.n > 9)


# --- 3: CPA game ------------------------------------------------------------


@crit(3, "CBC CPA game: both adversaries reach advantage 1/2")
def test_c3_cpa_advantage():
    with Budget(10):
        one = cbc_cpa.estimate_advantage("one", 10**4, seed=1)
        two = cbc_cpa.estimate_advantage("two", 10**4, seed=2)
        base = cbc_cpa.estimate_advantage("random", 10**4, seed=3)
    assert one == two == Fraction(1, 2)
    assert abs(base) < 0.02


# --- 4: Stairs-Box ----------------------------------------------------------


def _random_invertible(rng):
    while True:
        m = F2Matrix(tuple(rng.getrandbits(6) for _ in range(6)), 6)
        if rank(m) == 6:
            return m


@crit(4, "Stairs-Box: candidate set, recomposition and 100 random round trips")
def test_c4_stairsbox():
    with Budget(60):
        reference = sb.SBox64(sb.REFERENCE_SBOX)
        decs = sb.recover(reference)
        assert sb.x_candidates(decs) == {(a, b) for a in (1, 33) for b in (1, 17, 33, 49)}
        assert all(sb.compose(d.A, d.X, d.B) == reference for d in decs)
        rng = random.Random(4)
        for _ in range(100):
            A, B = _random_invertible(rng), _random_invertible(rng)
            X = sb.AffineModMap(2 * rng.randrange(32) + 1, rng.randrange(64))
            s = sb.compose(A, X, B)
            found = sb.recover(s, limit=1)
            assert found and sb.compose(found[0].A, found[0].X, found[0].B) == s


# --- 5: hidden RSA ----------------------------------------------------------


@crit(5, "hidden RSA: reference constants and 20 self-generated attacks")
def test_c5_hidden_rsa():
    with Budget(60):
        assert hr.CHALLENGE_P * hr.CHALLENGE_Q == hr.CHALLENGE_N
        assert hr.CHALLENGE_E * hr.CHALLENGE_D % ((hr.CHALLENGE_P - 1) * (hr.CHALLENGE_Q - 1)) == 1
        assert pow(hr.CHALLENGE_Y, hr.CHALLENGE_D, hr.CHALLENGE_N) == 202010181600
        rng = random.Random(5)
        for i in range(20):
            e = (3, 65537)[i % 2]
            inst = hr.generate_instance(64, e, rng)
            msg = rng.randrange(2, inst.n)
            out = hr.attack(lambda x: hr.oracle_encrypt(inst, x), hr.oracle_encrypt(inst, msg), rng=rng)
            assert (out.e, out.n, {out.p, out.q}) == (e, inst.n, {inst.p, inst.q})
            assert out.plaintext == msg


# --- 6: orthomorphisms ------------------------------------------------------


@crit(6, "orthomorphisms: exhaustive m=4 sweep, sampled m=5 agreement")
def test_c6_exhaustive_m4():
    with Budget(15 * 60):
        res = om.exhaustive_sweep(4, collect=False)
    assert res.brute_count == 256
    assert res.predicate_count == 256
    assert res.disagreements == 0


@crit(6, "orthomorphisms: exhaustive m=4 sweep, sampled m=5 agreement")
def test_c6_sampled_m5():
    with Budget(30):
        bad, pos = om.sampled_agreement(5, 10**5, random.Random(6))
    assert bad == 0 and pos > 0


# --- 7: JPEG codec ----------------------------------------------------------

JPEG = "JPEG codec: worked bits, 47, round trips, prefix-freeness"


@crit(7, JPEG)
def test_c7_jpeg_codec():
    assert jc.encode_matrix(jc.worked_matrix()).to_str() == jc.WORKED_BITS
    assert len(jc.WORKED_BITS) == 91
    assert jc.expgolomb_encode(47).to_str() == "1111110101111"
    rng = random.Random(7)
    for _ in range(10**4):
        vec = [0] * 64
        for pos in rng.sample(range(64), rng.randint(0, 63)):
            vec[pos] = rng.choice([-1, 1]) * rng.randint(1, 1000)
        m = jc.QuantMatrix.from_flat(vec)
        assert jc.decode_matrix(jc.encode_matrix(m)) == m
    words = sorted(jc.expgolomb_encode(v).to_str() for v in range(-2**16, 2**16 + 1))
    assert not any(b.startswith(a) for a, b in zip(words, words[1:]))


@crit(7, JPEG)
def test_c7_official_corpus(data_file):
    assert jc.corpus_stats(data_file("jpeg_corpus")).total_bits == 6694303


# --- 8: hash attacks --------------------------------------------------------

HASH = "hash attacks: pair resets, 10^3 verified second preimages per mode"


@crit(8, HASH)
@pytest.mark.parametrize("n", [16, 32, 256])
def test_c8_pairs_hash_to_zero(n):
    f = hh.SecretFunction(n, f"pairs-{n}")
    p = hh.HashParams(n, f)
    store = hh.PairStore.sample(f, n, random.Random(n), count=100)
    for x, fx in store.pairs:
        assert hh.hash_h(p, BitString(x, n) + BitString(fx, n)) == BitString.zeros(n)


@crit(8, HASH)
@pytest.mark.parametrize("mode", ["prepend", "append", "linear"])
def test_c8_second_preimages(mode):
    rng = random.Random(f"c8-{mode}")
    failures = 0
    for i in range(10**3):
        f = hh.SecretFunction(16, f"{mode}-{i}")
        p = hh.HashParams(16, f)
        store = hh.PairStore.sample(f, 16, rng)
        k = rng.randint(1, 6)
        m = BitString(rng.getrandbits(16 * k), 16 * k)
        d = hh.hash_h(p, m)
        if mode == "prepend":
            out = hh.second_preimage_prepend(store, m, rng.randrange(len(store)))
        elif mode == "append":
            out = hh.second_preimage_append(store, m, d, rng.randrange(len(store)))
        else:
            out = hh.second_preimage_linear(store, m, d)
        failures += out == m or hh.hash_h(p, out) != d
    assert failures == 0


@crit(8, HASH)
def test_c8_official_f_table(data_file):
    table = hh.load_f_table(data_file("f_table"))
    assert hh.q3_second_preimage(table(0)).to_hex() == hh.Q3_PREIMAGE_HEX


# --- 9: GF(2^128) -----------------------------------------------------------


@crit(9, "GF(2^128): oracle products, GF(2^8) root cross-check, Frobenius")
def test_c9_field():
    rng = random.Random(9)

    def raw(e):
        return int.from_bytes(gf.elem_to_block(e), "big")

    for _ in range(10**3):
        x, y = rng.getrandbits(128), rng.getrandbits(128)
        assert raw(gf.mul(x, y)) == gf.gcm_mult_reference(raw(x), raw(y))
    ring = gf.RING256
    for _ in range(10**3):
        d = rng.randint(1, 25)
        g = [rng.randrange(256) for _ in range(d)] + [rng.randrange(1, 256)]
        assert ring.find_roots(g, rng) == gf.brute_force_roots(ring, g)
    for _ in range(10**3):
        h = rng.getrandbits(128)
        t = h
        for _ in range(128):
            t = gf.GF128.square(t)
        assert t == h


# --- 10: GCM forbidden attack -----------------------------------------------

GCM = "GCM: pair and triple H recovery, forgeries accepted, 50/50"


@crit(10, GCM)
def test_c10_gcm_end_to_end():
    rng = random.Random(10)
    ok = 0
    with Budget(60):
        for _ in range(50):
            key, header, iv, secret = rng.randbytes(32), rng.randbytes(8), rng.randbytes(12), rng.randbytes(8)
            h = gf.block_to_elem(ga.AesBlockCipher(key).encrypt(bytes(16)))
            p1, p2 = rng.randbytes(rng.randint(1, 64)), rng.randbytes(rng.randint(1, 64))
            r1, r2 = ga.gcm_seal(key, header, iv, p1), ga.gcm_seal(key, header, iv, p2)
            cands = dict(ga.recover_h_from_pair(r1, r2, rng=rng))
            pair_ok = h in cands
            forged = ga.forge(r1, ga.flip_bit(r1.payload, 0), h, cands.get(h, 0))
            try:
                ga.gcm_open(key, forged)
                forge_ok = True
            except ga.AuthenticationError:
                forge_ok = False
            aad = ga.aad_for(header, iv, ga.AAD_SECRET_SUFFIX, secret)
            length = rng.randint(33, 64)
            trip = [ga.gcm_seal(key, header, iv, rng.randbytes(length), aad) for _ in range(3)]
            triple_ok = ga.recover_h_from_triple(*trip, rng=rng) == h
            mask = ga.mask_for(trip[0], h, ga.AAD_SECRET_SUFFIX)
            forged3 = ga.forge(trip[0], ga.flip_bit(trip[0].payload, 5), h, mask, ga.AAD_SECRET_SUFFIX)
            try:
                ga.gcm_open(key, forged3, aad)
                forge3_ok = True
            except ga.AuthenticationError:
                forge3_ok = False
            ok += pair_ok and forge_ok and triple_ok and forge3_ok
    assert ok == 50


@crit(10, GCM)
def test_c10_printed_h_roundtrip():
    for h in (ga.TASK2_H, ga.TASK3_H):
        assert gf.parse_sparse(gf.to_sparse(h)) == h
        assert gf.from_hex(gf.to_hex(h)) == h


@crit(10, GCM)
def test_c10_official_task1(data_file):
    recs = ga.load_task_dir(data_file("gcm_task1"))
    text = ga.keystream_reuse_decrypt(recs[0], ga.TASK1_CRIB.encode(), recs[5])
    assert text.decode("utf-8", errors="replace").startswith(ga.TASK1_EXPECTED_5)


@crit(10, GCM)
def test_c10_official_task2(data_file):
    recs = ga.load_task_dir(data_file("gcm_task2"))
    roots = set()
    for group in ga.same_iv_groups(recs):
        roots |= {h for h, _ in ga.recover_h_from_pair(recs[group[0]], recs[group[1]])}
    assert ga.TASK2_H in roots


@crit(10, GCM)
def test_c10_official_task3(data_file):
    recs = ga.load_task_dir(data_file("gcm_task3"))
    group = next(g for g in ga.same_iv_groups(recs) if len(g) >= 3)
    assert ga.recover_h_from_triple(*(recs[k] for k in group[:3])) == ga.TASK3_H


# --- 11: bases --------------------------------------------------------------


@crit(11, "bases: constructed families for all r <= 32, the small example")
def test_c11_bases():
    params = [(s, d) for s in range(2, 33) for d in range(2, s + 1) if f2linalg.product_dimension(s, d) <= 32]
    assert (5, 5) in params and (7, 2) in params
    for s, d in params:
        fam = f2linalg.construct_basis_family(s, d)
        assert fam.r == f2linalg.product_dimension(s, d) <= 32
        assert f2linalg.is_basis_family(fam), (s, d)
    fam = f2linalg.BasisFamily.from_strings(2, ["1100", "0110"])
    assert f2linalg.is_basis_family(fam)
    assert {v.to_str() for v in f2linalg.componentwise_products(fam)} == {"1111", "1100", "0110", "0100"}


# --- 12: puzzles ------------------------------------------------------------


@crit(12, "puzzles: 152, 4, parity verdicts, POLY, unreachable origin")
def test_c12_puzzles():
    assert puzzles.rgb_invariant(puzzles.RGB_START) == 152
    assert puzzles.winston_reachable(2020, 1984) is True
    assert puzzles.winston_reachable(2020, 2021) is False
    assert puzzles.poly_consistent([(20, 7), (15, 5)]) is False
    reach = puzzles.rgb_reachable()
    assert puzzles.RgbState(0, 0) not in reach
    assert puzzles.modpow(3, 40231, 5) == 4
