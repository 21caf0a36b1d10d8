import pytest
from hypothesis import given, strategies as st

from cryptobench.primality import (Decomposition, Result, accept_census, bob_test, census_sweep, decompose,
                                   is_probable_prime, standard_mr)

odd = st.integers(2, 5 * 10**3).map(lambda x: 2 * x + 1)


def test_decompose_examples():
    assert decompose(13) == Decomposition(13, 2, 1, 1)
    assert decompose(65) == Decomposition(65, 6, 0, 1)
    assert decompose(91) == Decomposition(91, 1, 2, 5)
    for bad in (4, 3, 10):
        with pytest.raises(ValueError):
            decompose(bad)


@given(st.integers(2, 10**30).map(lambda x: 2 * x + 1))
def test_decompose_roundtrip(n):
    d = decompose(n)
    assert 2**d.k * 3**d.l * d.m + 1 == n and d.m % 6 in (1, 5)


def test_bob_examples():
    v = bob_test(65, 8)
    assert v.value is Result.PROBABLY_PRIME and v.stage == "4a" and v.iteration == 1
    assert all(bob_test(13, a).probably_prime for a in range(2, 12))
    with pytest.raises(ValueError):
        bob_test(13, 12)


def test_standard_examples():
    assert standard_mr(13, 5).probably_prime
    assert standard_mr(9, 2).value is Result.COMPOSITE
    assert standard_mr(2047, 2).probably_prime


def test_small_census_equal():
    assert accept_census(25, "bob") == accept_census(25, "standard")
    assert accept_census(9, "bob") == accept_census(9, "standard")


def test_census_on_primes_is_full():
    for p in (5, 7, 13, 97, 7919):
        full = set(range(2, p - 1))
        assert accept_census(p, "bob") == full == accept_census(p, "standard")


def test_census_matches_scalar_tests():
    for n in (91, 341, 561, 703, 1105):
        assert accept_census(n, "bob") == {a for a in range(2, n - 1) if bob_test(n, a).probably_prime}
        assert accept_census(n, "standard") == {a for a in range(2, n - 1) if standard_mr(n, a).probably_prime}


def test_census_bound():
    with pytest.raises(ValueError):
        accept_census(10**6 + 1)


def test_bob_accepts_subset_of_standard():
    # the stage-3 test n | a + b + 1 only recognises a^(3^i m) as a primitive cube root of 1
    for row in census_sweep(3, 2000):
        bob, std = accept_census(row.n, "bob"), accept_census(row.n, "standard")
        assert bob <= std


def test_smallest_strict_difference():
    # 22 is a strong liar for 91 (22^45 = -1) that the modified test misses
    assert standard_mr(91, 22).probably_prime
    assert not bob_test(91, 22).probably_prime
    assert accept_census(91, "standard") - accept_census(91, "bob") == {22, 29, 53, 79}


@given(odd, st.integers(0, 10**6))
def test_stage_matches_trace(n, seed):
    a = 2 + seed % (n - 3)
    trace = []
    v = bob_test(n, a, trace)
    assert (v.stage == "5") == (v.value is Result.COMPOSITE)
    d = decompose(n)
    assert len(trace) <= 1 + 2 * d.l + d.k
    assert trace[0] == ("2", pow(a, d.m, n), None)
    if v.stage in ("4a", "5"):
        # stage 3 leaves a = a0^(3^l m)
        done3 = [t for t in trace if t[0] == "3c"]
        if d.l:
            assert done3[-1][1] == pow(a, 3**d.l * d.m, n)


def test_primes_never_rejected_below_2000():
    for n in range(5, 2000, 2):
        if is_probable_prime(n):
            assert len(accept_census(n, "bob")) == n - 3
