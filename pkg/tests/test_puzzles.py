import random

import pytest
from hypothesis import given, strategies as st

from cryptobench.puzzles import (RGB_MODULUS, RGB_START, PolyInconsistency, Query, RgbState, modpow,
                                 poly_consistent, popcount, rgb_invariant, rgb_reachable, rgb_step,
                                 winston_reachable)

naturals = st.integers(0, 2**40)


def test_winston_examples():
    assert popcount(2020) == 7 and popcount(1984) == 5
    assert winston_reachable(2020, 1984)
    assert not winston_reachable(2020, 2021)


@given(naturals, naturals, naturals)
def test_winston_is_equivalence(x, y, z):
    assert winston_reachable(x, x)
    assert winston_reachable(x, y) == winston_reachable(y, x)
    if winston_reachable(x, y) and winston_reachable(y, z):
        assert winston_reachable(x, z)


@given(naturals, st.integers(0, 30), st.integers(0, 30))
def test_winston_moves_keep_parity(x, pos, gap):
    # inserting a 1 0..0 1 pattern adds two ones
    pattern = (1 << (gap + 1)) | 1
    lo = x & ((1 << pos) - 1)
    y = ((x >> pos) << (pos + gap + 2)) | (pattern << pos) | lo
    assert winston_reachable(x, y)


def test_poly_examples():
    assert not poly_consistent([(20, 7), (15, 5)])
    assert poly_consistent([(4, 9)])
    assert poly_consistent([(x, x * x + 3) for x in range(-3, 7)])
    with pytest.raises(PolyInconsistency):
        poly_consistent([(1, 2), (1, 3)])


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-500, 500)), max_size=8, unique_by=lambda t: t[0]),
       st.randoms())
def test_poly_monotone(pairs, rnd):
    if poly_consistent(pairs):
        sub = [p for p in pairs if rnd.random() < 0.5]
        assert poly_consistent(sub)


def test_rgb_examples():
    assert rgb_invariant(RGB_START) == 152
    assert rgb_invariant(RgbState(0, 0)) == 0
    assert rgb_invariant(RgbState(1, 18)) == 1
    for q in Query:
        assert rgb_step(RgbState(0, 0), q) == RgbState(0, 0)
    assert rgb_step(RgbState(1, 2), "RED") == RgbState(37, 16)


def test_rgb_invariant_preserved():
    rng = random.Random(5)
    for _ in range(10**5):
        s = RgbState(rng.randrange(RGB_MODULUS), rng.randrange(RGB_MODULUS))
        t = rgb_step(s, rng.choice(list(Query)))
        assert rgb_invariant(t) == rgb_invariant(s) == (t.a ** 2 + t.b ** 2) % RGB_MODULUS


def test_origin_unreachable():
    reach = rgb_reachable()
    assert RgbState(0, 0) not in reach
    assert all(rgb_invariant(s) == 152 for s in reach)


def test_state_range():
    with pytest.raises(ValueError):
        RgbState(324, 0)


def test_modpow_values():
    assert modpow(3, 40231, 5) == 2  # 40231 = 4*10057 + 3 and 27 = 2 mod 5
    acc = 1
    for _ in range(13):
        acc = acc * 7 % 11
    assert modpow(7, 13, 11) == acc
    assert modpow(9, 0, 1) == 0 and modpow(9, 0, 7) == 1


@given(st.integers(-10**30, 10**30), st.integers(0, 2**70), st.integers(1, 10**40))
def test_modpow_matches_builtin(b, e, m):
    assert modpow(b, e, m) == pow(b, e, m)
