"""Orthomorphisms of the dihedral group D_{2^m} from a piecewise-affine family.

Elements are a^i u^j, with i taken mod 2^(m-1). A map theta of the family
acts affinely on i in each of four branches, chosen by j and by whether i
lies in the lower or upper half of the exponent range. Because each branch
depends on just one parameter pair, (r1, c1), (r2, c2), (q1, b1) or
(q2, b2), an exhaustive sweep tabulates the branch images once and combines
bit masks. This name covers both spellings of the family, DM_m and MD_m.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

MAX_BRUTE_M = 10


@dataclass(frozen=True)
class DihedralElement:
    i: int
    j: int


def order(m: int) -> int:
    return 1 << (m - 1)


def elements(m: int) -> list[DihedralElement]:
    return [DihedralElement(i, j) for j in (0, 1) for i in range(order(m))]


def code(x: DihedralElement, m: int) -> int:
    return x.j * order(m) + x.i


def group_mul(x: DihedralElement, y: DihedralElement, m: int) -> DihedralElement:
    # u a^k = a^-k u, so a^i u^j a^k u^l = a^(i +- k) u^(j + l)
    n = order(m)
    k = -y.i if x.j else y.i
    return DihedralElement((x.i + k) % n, x.j ^ y.j)


def group_inv(x: DihedralElement, m: int) -> DihedralElement:
    if x.j:
        return x
    return DihedralElement(-x.i % order(m), 0)


@dataclass(frozen=True)
class ThetaParams:
    m: int
    r1: int
    r2: int
    q1: int
    q2: int
    b1: int
    b2: int
    c1: int
    c2: int

    def __post_init__(self):
        if self.m < 4:
            raise ValueError("m must be at least 4")
        n = order(self.m)
        for name in ("r1", "r2", "q1", "q2", "b1", "b2", "c1", "c2"):
            if not 0 <= getattr(self, name) < n:
                raise ValueError(f"{name} must lie in Z_{n}")

    def as_tuple(self) -> tuple[int, ...]:
        return (self.r1, self.r2, self.q1, self.q2, self.b1, self.b2, self.c1, self.c2)


def theta_apply(p: ThetaParams, x: DihedralElement) -> DihedralElement:
    n = order(p.m)
    upper = x.i >= n // 2
    if not x.j:
        if upper:
            return DihedralElement((p.r2 * x.i + p.c2) % n, 1)
        return DihedralElement((p.r1 * x.i + p.c1) % n, 0)
    if upper:
        return DihedralElement((p.q2 * x.i + p.b2) % n, 0)
    return DihedralElement((p.q1 * x.i + p.b1) % n, 1)


def pi_apply(p: ThetaParams, x: DihedralElement) -> DihedralElement:
    return group_mul(group_inv(x, p.m), theta_apply(p, x), p.m)


def is_orthomorphism_bruteforce(p: ThetaParams) -> bool:
    if p.m > MAX_BRUTE_M:
        raise ValueError(f"m = {p.m} is too large to enumerate")
    size = 2 * order(p.m)
    els = elements(p.m)
    if len({code(theta_apply(p, x), p.m) for x in els}) != size:
        return False
    return len({code(pi_apply(p, x), p.m) for x in els}) == size


def theorem_predicate(p: ThetaParams) -> bool:
    n = order(p.m)
    if p.r1 % 4 == 3 and p.r2 % 4 == 3:
        return (p.r1 == p.q2 and p.r2 == p.q1 and p.c1 == p.b2 and p.c2 == p.b1
                and (p.c1 + p.c2) % 2 == 1)
    if p.r1 % 4 == 2 and p.r2 % 4 == 2:
        return (p.r1 == p.q1 and p.r2 == p.q2
                and (p.q1 - 1 - p.b1 - p.c1) % n == 0 and (p.q2 - 1 - p.b2 - p.c2) % n == 0
                and (p.b1 + p.c2) % 2 == 1 and (p.b2 + p.c1) % 2 == 1)
    return False


def condition_class(p: ThetaParams) -> int:
    """1 or 2 for the matching condition of the characterisation, else 0."""
    if not theorem_predicate(p):
        return 0
    return 1 if p.r1 % 4 == 3 else 2


# --- vectorised exhaustive sweep -------------------------------------------


def _branch_masks(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Image bit masks of theta and pi for every (slope, offset) in each branch.

    Returns two arrays of shape (4, n*n) indexed by branch, then slope*n + offset.
    Branch order: (r1, c1), (r2, c2), (q1, b1), (q2, b2).
    """
    n = order(m)
    half = n // 2
    lower = np.arange(half)
    upper = np.arange(half, n)
    slope, off = np.divmod(np.arange(n * n), n)
    th = np.zeros((4, n * n), dtype=np.uint64)
    pi = np.zeros((4, n * n), dtype=np.uint64)
    one = np.uint64(1)

    def accumulate(out, idx, codes):
        # a branch with colliding images leaves a hole, so the final OR falls short
        for c in codes.T:
            out[idx] |= one << c.astype(np.uint64)

    # a^i, lower half: theta = a^(r1 i + c1), pi = a^((r1-1) i + c1)
    t = (slope[:, None] * lower + off[:, None]) % n
    accumulate(th, 0, t)
    accumulate(pi, 0, (t - lower) % n)
    # a^i, upper half: theta = a^(r2 i + c2) u, pi = a^((r2-1) i + c2) u
    t = (slope[:, None] * upper + off[:, None]) % n
    accumulate(th, 1, t + n)
    accumulate(pi, 1, (t - upper) % n + n)
    # a^i u, lower half: theta = a^(q1 i + b1) u, pi = a^(i - q1 i - b1)
    t = (slope[:, None] * lower + off[:, None]) % n
    accumulate(th, 2, t + n)
    accumulate(pi, 2, (lower - t) % n)
    # a^i u, upper half: theta = a^(q2 i + b2), pi = a^(i - q2 i - b2) u
    t = (slope[:, None] * upper + off[:, None]) % n
    accumulate(th, 3, t)
    accumulate(pi, 3, (upper - t) % n + n)
    return th, pi


def _predicate_grid(m: int, r1, c1, r2, c2, q1, b1, q2, b2) -> np.ndarray:
    n = order(m)
    cond1 = ((r1 % 4 == 3) & (r2 % 4 == 3) & (r1 == q2) & (r2 == q1) & (c1 == b2) & (c2 == b1)
             & ((c1 + c2) % 2 == 1))
    cond2 = ((r1 % 4 == 2) & (r2 % 4 == 2) & (r1 == q1) & (r2 == q2)
             & ((q1 - 1 - b1 - c1) % n == 0) & ((q2 - 1 - b2 - c2) % n == 0)
             & ((b1 + c2) % 2 == 1) & ((b2 + c1) % 2 == 1))
    return cond1 | cond2


@dataclass
class SweepResult:
    m: int
    brute_count: int
    predicate_count: int
    disagreements: int
    orthomorphisms: list[ThetaParams]


def exhaustive_sweep(m: int = 4, collect: bool = True) -> SweepResult:
    """Brute force and predicate over every parameter tuple of D_{2^m} (m = 4 by default)."""
    n = order(m)
    full = np.uint64((1 << (2 * n)) - 1) if 2 * n < 64 else np.uint64(2**64 - 1)
    if 2 * n > 64:
        raise ValueError("sweep supports 2^m <= 64")
    th, pi = _branch_masks(m)
    k = n * n
    idx = np.arange(k)
    # pair branches (r1,c1)x(r2,c2) on one axis and (q1,b1)x(q2,b2) on the other
    left_th = (th[0][:, None] | th[1][None, :]).ravel()
    left_pi = (pi[0][:, None] | pi[1][None, :]).ravel()
    right_th = (th[2][:, None] | th[3][None, :]).ravel()
    right_pi = (pi[2][:, None] | pi[3][None, :]).ravel()
    lr1, lc1 = np.divmod(np.repeat(idx, k), n)
    lr2, lc2 = np.divmod(np.tile(idx, k), n)
    brute = pred = dis = 0
    found: list[ThetaParams] = []
    chunk = max(1, (1 << 22) // (k * k))
    for start in range(0, k * k, chunk):
        sl = slice(start, start + chunk)
        ok = ((left_th[sl, None] | right_th[None, :]) == full) & ((left_pi[sl, None] | right_pi[None, :]) == full)
        r1, c1, r2, c2 = (v[sl, None] for v in (lr1, lc1, lr2, lc2))
        q1, b1, q2, b2 = (v[None, :] for v in (lr1, lc1, lr2, lc2))
        pr = _predicate_grid(m, r1, c1, r2, c2, q1, b1, q2, b2)
        brute += int(ok.sum())
        pred += int(pr.sum())
        dis += int((ok != pr).sum())
        if collect:
            for a, b in zip(*np.nonzero(ok)):
                li, ri = start + a, b
                found.append(ThetaParams(m, int(lr1[li]), int(lr2[li]), int(lr1[ri]), int(lr2[ri]),
                                         int(lc1[ri]), int(lc2[ri]), int(lc1[li]), int(lc2[li])))
    return SweepResult(m, brute, pred, dis, found)


# --- enumeration and sampling ----------------------------------------------


def iter_predicate_solutions(m: int) -> Iterator[ThetaParams]:
    """Every parameter tuple satisfying the characterisation, built directly."""
    n = order(m)
    r3 = range(3, n, 4)
    r2s = range(2, n, 4)
    for r1, r2 in itertools.product(r3, r3):
        for c1, c2 in itertools.product(range(n), range(n)):
            if (c1 + c2) % 2:
                yield ThetaParams(m, r1, r2, r2, r1, c2, c1, c1, c2)
    for r1, r2 in itertools.product(r2s, r2s):
        for c1, c2 in itertools.product(range(n), range(n)):
            b1, b2 = (r1 - 1 - c1) % n, (r2 - 1 - c2) % n
            if (b1 + c2) % 2 and (b2 + c1) % 2:
                yield ThetaParams(m, r1, r2, r1, r2, b1, b2, c1, c2)


def predicate_count(m: int) -> int:
    # both classes: (n/4)^2 slope pairs times n^2/2 offset pairs
    n = order(m)
    return 2 * (n // 4) ** 2 * n * n // 2


def enumerate_orthomorphisms(m: int, mode: str = "both") -> dict:
    if m == 4 and mode in ("brute", "both"):
        res = exhaustive_sweep(m)
        return {"m": m, "brute": res.brute_count, "predicate": res.predicate_count,
                "disagreements": res.disagreements, "members": res.orthomorphisms}
    members = list(iter_predicate_solutions(m)) if m <= 6 else None
    return {"m": m, "predicate": predicate_count(m), "members": members}


def random_params(m: int, rng: random.Random) -> ThetaParams:
    n = order(m)
    return ThetaParams(m, *(rng.randrange(n) for _ in range(8)))


def sampled_agreement(m: int, samples: int, rng: random.Random, planted: float = 0.05) -> tuple[int, int]:
    """(disagreements, positives) over random tuples, a fraction drawn near solutions.

    Uniform tuples are almost never orthomorphisms for m >= 5, so a share of
    the draws start from a solution with one coordinate re-randomised.
    """
    sols = list(iter_predicate_solutions(m))
    n = order(m)
    bad = pos = 0
    for _ in range(samples):
        if rng.random() < planted:
            base = rng.choice(sols).as_tuple()
            vals = list(base)
            if rng.random() < 0.5:
                vals[rng.randrange(8)] = rng.randrange(n)
            p = ThetaParams(m, *vals)
        else:
            p = random_params(m, rng)
        b = is_orthomorphism_bruteforce(p)
        pos += b
        bad += b != theorem_predicate(p)
    return bad, pos


# --- the difference-set lemma ----------------------------------------------


def difference_set(h1: int, h2: int, d: int) -> set[int]:
    """{h1*j1 - h2*j2 mod 2^d : j1, j2 in Z_{2^(d-1)}}."""
    mod = 1 << d
    js = range(1 << (d - 1))
    return {(h1 * a - h2 * b) % mod for a in js for b in js}


def difference_set_closed_form(h1: int, h2: int, d: int) -> set[int]:
    """Closed form for h1, h2 in Z_{2^(d-1)} not divisible by 4.

    Both odd: everything except 2^(d-1) when h1 == h2, everything except h2
    when h2 == 2^d - h1 (impossible for h2 < 2^(d-1)), everything otherwise.
    Both 2 mod 4: the even residues. One of each parity: everything.
    """
    mod = 1 << d
    if h1 % 4 == 0 or h2 % 4 == 0:
        raise ValueError("h1 and h2 must not be divisible by 4")
    everything = set(range(mod))
    if h1 % 2 and h2 % 2:
        if h1 == h2:
            return everything - {mod // 2}
        if h2 == mod - h1:
            return everything - {h2}
        return everything
    if h1 % 2 == 0 and h2 % 2 == 0:
        return set(range(0, mod, 2))
    return everything
