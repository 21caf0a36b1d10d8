import random

import pytest
from hypothesis import given, settings, strategies as st

from cryptobench import orthomorph as om
from cryptobench.orthomorph import DihedralElement as D, ThetaParams

E = D(0, 0)
A = D(1, 0)
U = D(0, 1)
EXAMPLE = ThetaParams(4, r1=3, r2=3, q1=3, q2=3, b1=1, b2=0, c1=0, c2=1)

params4 = st.tuples(*[st.integers(0, 7)] * 8).map(lambda t: ThetaParams(4, *t))


def test_presentation():
    m = 4
    assert om.group_mul(U, A, m) == om.group_mul(om.group_inv(A, m), U, m) == D(7, 1)
    a8 = E
    for _ in range(8):
        a8 = om.group_mul(a8, A, m)
    assert a8 == E and om.group_mul(U, U, m) == E


@pytest.mark.parametrize("m", [4, 5])
def test_inverses_and_presentation_everywhere(m):
    for x in om.elements(m):
        assert om.group_mul(x, om.group_inv(x, m), m) == E
        assert om.group_mul(U, om.group_mul(x, U, m), m) == D(-x.i % om.order(m), x.j)


def test_associativity_sampled():
    rng = random.Random(1)
    els = om.elements(5)
    for _ in range(1000):
        x, y, z = (rng.choice(els) for _ in range(3))
        assert om.group_mul(om.group_mul(x, y, 5), z, 5) == om.group_mul(x, om.group_mul(y, z, 5), 5)


def test_theta_examples():
    assert om.theta_apply(EXAMPLE, A) == D(3, 0)
    ident = ThetaParams(4, 1, 1, 1, 1, 0, 0, 0, 0)
    assert all(om.theta_apply(ident, D(i, 0)) == D(i, 0) for i in range(4))


def test_identity_is_not_orthomorphism():
    # r1 = 1, c1 = 0 keeps the lower rotations fixed, so pi repeats e
    assert not om.is_orthomorphism_bruteforce(ThetaParams(4, 1, 1, 1, 1, 0, 0, 0, 0))


@settings(max_examples=300)
@given(params4)
def test_branch_cosets(p):
    half = om.order(4) // 2
    for x in om.elements(4):
        y = om.theta_apply(p, x)
        upper = x.i >= half
        assert y.j == (x.j ^ upper)


def test_worked_example():
    assert om.is_orthomorphism_bruteforce(EXAMPLE)
    assert om.theorem_predicate(EXAMPLE)
    assert om.condition_class(EXAMPLE) == 1


def test_r1_multiple_of_four_rejected():
    rng = random.Random(2)
    for _ in range(500):
        p = ThetaParams(4, rng.choice([0, 4]), *(rng.randrange(8) for _ in range(7)))
        assert not om.theorem_predicate(p)
        assert not om.is_orthomorphism_bruteforce(p)


def test_brute_force_bound():
    p = ThetaParams(11, *[0] * 8)
    with pytest.raises(ValueError):
        om.is_orthomorphism_bruteforce(p)


@settings(max_examples=2000)
@given(params4)
def test_predicate_matches_brute_force_sampled(p):
    assert om.theorem_predicate(p) == om.is_orthomorphism_bruteforce(p)


def test_exhaustive_m4():
    res = om.exhaustive_sweep(4)
    assert (res.brute_count, res.predicate_count, res.disagreements) == (256, 256, 0)
    assert all(om.is_orthomorphism_bruteforce(p) for p in res.orthomorphisms[:64])
    classes = [om.condition_class(p) for p in res.orthomorphisms]
    assert set(classes) == {1, 2}
    assert classes.count(1) + classes.count(2) == 256


def test_closed_form_solutions():
    sols = list(om.iter_predicate_solutions(4))
    assert len(sols) == len(set(sols)) == om.predicate_count(4) == 256
    assert set(sols) == set(om.exhaustive_sweep(4).orthomorphisms)
    assert om.predicate_count(5) == len(list(om.iter_predicate_solutions(5)))


def test_enumerate_modes():
    both = om.enumerate_orthomorphisms(4, "both")
    assert both["brute"] == both["predicate"] == 256
    assert om.enumerate_orthomorphisms(5, "predicate")["predicate"] == 4096


def test_sampled_m5_small():
    bad, pos = om.sampled_agreement(5, 3000, random.Random(3))
    assert bad == 0 and pos > 0


@pytest.mark.parametrize("d", [4, 5, 6])
def test_difference_set_closed_form(d):
    for h1 in range(1, 1 << (d - 1)):
        for h2 in range(1, 1 << (d - 1)):
            if h1 % 4 and h2 % 4:
                assert om.difference_set(h1, h2, d) == om.difference_set_closed_form(h1, h2, d)
    with pytest.raises(ValueError):
        om.difference_set_closed_form(4, 1, d)
