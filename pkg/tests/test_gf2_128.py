import random

import pytest
from hypothesis import given, settings, strategies as st

from cryptobench import gf2_128 as gf
from cryptobench.gcm_attack import TASK2_H, TASK3_H

elems = st.integers(0, 2**128 - 1)


def raw(e):
    return int.from_bytes(gf.elem_to_block(e), "big")


def test_identity_and_characteristic():
    rng = random.Random(0)
    for _ in range(50):
        h = rng.getrandbits(128)
        assert gf.mul(1, h) == h
        assert gf.add(h, h) == 0


def test_matches_bit_serial_oracle():
    rng = random.Random(1)
    for _ in range(1000):
        x, y = rng.getrandbits(128), rng.getrandbits(128)
        assert raw(gf.mul(x, y)) == gf.gcm_mult_reference(raw(x), raw(y))


def test_generator_layout():
    # a is x^1: in the block layout that is the second most significant bit
    assert gf.elem_to_block(2) == bytes([0x40]) + bytes(15)
    assert gf.block_to_elem(bytes([0x80]) + bytes(15)) == 1
    # x^127 * x = x^7 + x^2 + x + 1
    assert gf.mul(1 << 127, 2) == 0x87


@settings(max_examples=200, deadline=None)
@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert gf.mul(gf.mul(a, b), c) == gf.mul(a, gf.mul(b, c))
    assert gf.mul(a, b ^ c) == gf.mul(a, b) ^ gf.mul(a, c)
    assert gf.mul(a, b) == gf.mul(b, a)
    if a:
        assert gf.mul(a, gf.inv(a)) == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        gf.inv(0)


def test_frobenius_fixed_point():
    rng = random.Random(2)
    for _ in range(200):
        h = rng.getrandbits(128)
        t = h
        for _ in range(128):
            t = gf.GF128.square(t)
        assert t == h == gf.gpow(h, 1 << 128)


def test_square_and_pow_agree():
    rng = random.Random(3)
    for _ in range(100):
        h = rng.getrandbits(128)
        assert gf.GF128.square(h) == gf.mul(h, h) == gf.gpow(h, 2)
        assert gf.gpow(h, 5) == gf.mul(gf.mul(gf.mul(h, h), gf.mul(h, h)), h)


def test_trace_is_a_bit():
    rng = random.Random(4)
    values = {gf.GF128.trace(rng.getrandbits(128)) for _ in range(50)}
    assert values == {0, 1}


def test_poly_basics():
    R = gf.RING128
    assert gf.poly_eval([], 123) == 0
    g = [5, 7, 9]
    assert gf.poly_gcd(g, []) == R.monic(g)
    rng = random.Random(5)
    for _ in range(20):
        r, s, t = (rng.getrandbits(128) for _ in range(3))
        g1, g2 = R.from_roots([r, s]), R.from_roots([r, t])
        assert gf.poly_gcd(g1, g2) == [r, 1]
        q, rem = R.divmod(g1, [r, 1])
        assert rem == [] and q == [s, 1]


def test_roots_of_constructed_polys():
    rng = random.Random(6)
    for k in (1, 2, 5, 9):
        roots = {rng.getrandbits(128) for _ in range(k)}
        g = gf.RING128.from_roots(sorted(roots))
        assert gf.find_roots(g, random.Random(0)) == roots


def test_roots_with_multiplicity_and_noise():
    R = gf.RING128
    rng = random.Random(7)
    r, s = rng.getrandbits(128), rng.getrandbits(128)
    g = R.mul(R.from_roots([r, r, s]), [rng.getrandbits(128) | 1, 0, 1])  # times a random quadratic
    roots = gf.find_roots(g)
    assert {r, s} <= roots and len(roots) <= R.degree(g)
    assert all(gf.poly_eval(g, x) == 0 for x in roots)


def test_random_polys_returned_roots_are_roots():
    rng = random.Random(8)
    for _ in range(20):
        g = [rng.getrandbits(128) for _ in range(rng.randint(2, 8))] + [1]
        roots = gf.find_roots(g, rng)
        assert len(roots) < len(g)
        assert all(gf.poly_eval(g, x) == 0 for x in roots)


def test_subfield_twin_matches_exhaustive_search():
    rng = random.Random(9)
    R = gf.RING256
    for _ in range(300):
        d = rng.randint(1, 25)
        g = [rng.randrange(256) for _ in range(d)] + [rng.randrange(1, 256)]
        if rng.random() < 0.5:  # plant a few roots
            g = R.mul(g, R.from_roots([rng.randrange(256) for _ in range(rng.randint(1, 4))]))
        assert R.find_roots(g, rng) == gf.brute_force_roots(R, g)


def test_small_field_matches_aes_field():
    assert gf.GF256.mul(0x57, 0x83) == 0xC1
    assert gf.GF256.inv(0x53) == 0xCA
    assert gf.GF256.mul_slow(0x57, 0x13) == gf.GF256.mul(0x57, 0x13) == 0xFE


def test_find_roots_rejects_constants():
    with pytest.raises(ValueError):
        gf.find_roots([3])


@given(elems)
def test_sparse_and_hex_roundtrip(e):
    assert gf.parse_sparse(gf.to_sparse(e)) == e
    assert gf.from_hex(gf.to_hex(e)) == e


def test_sparse_formats():
    assert gf.to_sparse(0) == "0"
    assert gf.to_sparse(0b1011) == "a^3 + a + 1"
    assert gf.parse_sparse("$a^{3} +\n a + 1$") == 0b1011
    with pytest.raises(ValueError):
        gf.parse_sparse("a^128")
    with pytest.raises(ValueError):
        gf.parse_sparse("a^2 + b*c")


def test_printed_roots_roundtrip():
    for h in (TASK2_H, TASK3_H):
        assert gf.parse_sparse(gf.to_sparse(h)) == h
    assert TASK2_H.bit_length() == 127 and TASK2_H & 1 == 0
    assert TASK3_H.bit_length() == 124 and TASK3_H & 1 == 1
