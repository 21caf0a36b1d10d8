import random

import pytest
from hypothesis import given, settings, strategies as st

from cryptobench import hash_h as hh
from cryptobench.bits import BitString


def setup(n=16, seed=0):
    f = hh.SecretFunction(n, seed)
    return hh.HashParams(n, f), hh.PairStore.sample(f, n, random.Random(seed))


def random_message(rng, n, blocks):
    return BitString(rng.getrandbits(n * blocks), n * blocks)


def test_single_block_unrolls():
    p, store = setup()
    x, fx = store.pairs[0]
    assert hh.hash_h(p, BitString(x, 16)).value == x ^ fx


def test_pair_message_hashes_to_zero():
    p, store = setup(32)
    for x, fx in store.pairs[:20]:
        assert hh.hash_h(p, BitString(x, 32) + BitString(fx, 32)) == BitString.zeros(32)


def test_q3_message_hex():
    assert BitString.from_text(hh.Q3_TEXT).to_hex() == hh.Q3_MESSAGE_HEX
    assert hh.Q3_MESSAGE_HEX.startswith("412072616e646f6d") and hh.Q3_MESSAGE_HEX.endswith("6e74")


def test_q3_prepend_layout():
    m2 = hh.q3_second_preimage(int(hh.F_OF_ZERO_HEX, 16))
    assert m2.to_hex() == hh.Q3_PREIMAGE_HEX
    assert m2.length == 768


def test_misaligned_messages_rejected():
    p, _ = setup()
    with pytest.raises(ValueError):
        hh.hash_h(p, BitString.empty())
    with pytest.raises(ValueError):
        hh.hash_h(p, BitString.zeros(15))


def test_store_rejects_duplicates():
    with pytest.raises(ValueError):
        hh.PairStore(16, ((1, 2), (1, 3)))


def test_store_only_knows_its_points():
    _, store = setup()
    known = {x for x, _ in store.pairs}
    unknown = next(x for x in range(1 << 16) if x not in known)
    with pytest.raises(hh.UnknownPoint):
        store.f(unknown)
    assert len(store) == 160


def test_collision_n32():
    p, store = setup(32, 7)
    m1, m2 = hh.find_collision(store)
    assert m1 != m2
    assert hh.hash_h(p, m1) == hh.hash_h(p, m2) == BitString.zeros(32)
    with pytest.raises(ValueError):
        hh.find_collision(hh.PairStore(32, store.pairs[:1]))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_telescoping(seed, k):
    p, _ = setup(16, seed % 97)
    m = random_message(random.Random(seed), 16, k)
    tr = hh.hash_trace(p, m)
    acc = 0
    for g in tr.inputs:
        acc ^= g ^ p.f(g)
    assert acc == hh.hash_h(p, m).value == tr.states[-1]


def test_prepend_and_append():
    rng = random.Random(3)
    p, store = setup(16, 3)
    x, fx = store.pairs[5]
    single = BitString(x, 16)
    for m in [single] + [random_message(rng, 16, k) for k in (1, 3, 5)]:
        d = hh.hash_h(p, m)
        pre = hh.second_preimage_prepend(store, m)
        assert pre != m and hh.hash_h(p, pre) == d
        app = hh.second_preimage_append(store, m, d)
        assert app != m and hh.hash_h(p, app) == d


def test_linear_second_preimage():
    rng = random.Random(4)
    p, store = setup(16, 4)
    for _ in range(20):
        m = random_message(rng, 16, 4)
        d = hh.hash_h(p, m)
        m2 = hh.second_preimage_linear(store, m, d)
        assert m2 != m and hh.hash_h(p, m2) == d


def test_linear_zero_digest_uses_nonempty_kernel_vector():
    p, store = setup(16, 5)
    m = BitString(store.pairs[0][0], 16) + BitString(store.pairs[0][1], 16)
    m2 = hh.second_preimage_linear(store, m, BitString.zeros(16))
    assert m2.length > 0 and m2 != m and hh.hash_h(p, m2) == BitString.zeros(16)


def test_linear_outside_span():
    # every y equal: the span is {0, y}
    store = hh.PairStore(8, tuple((x, x ^ 1) for x in range(10)))
    with pytest.raises(hh.AttackFailure):
        hh.second_preimage_linear(store, BitString.zeros(8), BitString(0x80, 8))


def test_linear_success_rate_sample():
    rng = random.Random(6)
    ok = 0
    for i in range(100):
        p, store = setup(16, 1000 + i)
        m = random_message(rng, 16, 4)
        d = hh.hash_h(p, m)
        m2 = hh.second_preimage_linear(store, m, d)
        ok += m2 != m and hh.hash_h(p, m2) == d
    assert ok == 100


def test_table_function_roundtrip(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("\n".join(str(v) for v in range(5, 15)))
    t = hh.load_f_table(path, 8)
    assert t(0) == 5 and t(9) == 14
    with pytest.raises(hh.UnknownPoint):
        t(10)
    assert len(hh.store_from_table(t)) == 10
