import pytest
from hypothesis import given, strategies as st

from cryptobench.bits import BitString

bitstrings = st.integers(0, 300).flatmap(lambda n: st.builds(BitString, st.integers(0, (1 << n) - 1), st.just(n)))


def test_leftmost_bit_is_index_zero():
    b = BitString.from_str("1100")
    assert (b[0], b[1], b[2], b[3]) == (1, 1, 0, 0)
    assert b.value == 12


def test_text_packs_big_endian():
    assert BitString.from_text("A ").to_hex() == "4120"


def test_parse_oracle_notation():
    assert BitString.parse("b0101") == BitString(5, 4)
    assert BitString.parse("h41") == BitString(0x41, 8)
    with pytest.raises(ValueError):
        BitString.parse("0101")


def test_rejects_oversized_value():
    with pytest.raises(ValueError):
        BitString(4, 2)


@given(bitstrings, bitstrings)
def test_concat_length_additive(a, b):
    c = a + b
    assert c.length == a.length + b.length
    assert c.slice(0, a.length) == a and c.slice(a.length, c.length) == b


@given(bitstrings)
def test_str_roundtrip(a):
    assert BitString.from_str(a.to_str()) == a
    assert list(a) == [a[i] for i in range(a.length)]


@given(st.binary(max_size=40))
def test_bytes_roundtrip(data):
    assert BitString.from_bytes(data).to_bytes() == data
