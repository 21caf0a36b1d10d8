"""Decomposing a 6-bit permutation as S = A o X o B.

A and B are invertible linear maps of GF(2)^6 and X(x) = a*x + b mod 64.
Numbers map to vectors most-significant-bit first (2 <-> 000010).

Recovery fixes X and lifts A and B one bit at a time. Write t = A^-1 S(x)
and u = B x. Because X is affine mod 64, bit i of t is u_i xor a function
of the lower bits of u. So once mu (row i of B) is guessed, lam (row i of
A^-1) is forced: lam . S must equal a known truth table. Each candidate X
is screened first by subspaces that linear maps carry onto each other:
masks c with deg(c . F) <= d, directions along which all those components
have constant derivatives, masks vanishing at F(0), and the sizes of their
pairwise intersections, for F = S and S^-1. During lifting every new
combination of rows must land in matching subspaces on both sides. Every
consistent branch is explored, so the leaves are exactly the
decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from cryptobench.bits import BitString
from cryptobench.f2linalg import F2Matrix, inverse, rank

SIZE = 64
BITS = 6

REFERENCE_SBOX = (
    13, 18, 20, 55, 23, 24, 34, 1, 62, 49, 11, 40, 36, 59, 61, 30,
    33, 46, 56, 27, 41, 52, 14, 45, 0, 29, 39, 4, 8, 7, 17, 50,
    2, 54, 12, 47, 35, 44, 58, 25, 10, 5, 19, 48, 43, 31, 37, 6,
    21, 26, 32, 3, 15, 16, 22, 53, 38, 57, 63, 28, 60, 51, 9, 42,
)

_PARITY = [bin(i).count("1") & 1 for i in range(SIZE)]


@dataclass(frozen=True)
class SBox64:
    table: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.table) != list(range(SIZE)):
            raise ValueError("table is not a permutation of 0..63")

    @classmethod
    def parse(cls, text: str) -> SBox64:
        return cls(tuple(int(v) for v in text.replace(",", " ").split()))

    def __call__(self, x: int) -> int:
        return self.table[x]

    def inverse(self) -> SBox64:
        inv = [0] * SIZE
        for x, y in enumerate(self.table):
            inv[y] = x
        return SBox64(tuple(inv))


@dataclass(frozen=True)
class AffineModMap:
    a: int
    b: int

    def __post_init__(self):
        if not (0 < self.a < SIZE and self.a % 2 == 1 and 0 <= self.b < SIZE):
            raise ValueError("need odd a in [1, 63] and b in [0, 63]")

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) % SIZE

    def __str__(self) -> str:
        return f"{self.a}*x+{self.b} mod 64"


@dataclass(frozen=True)
class Decomposition:
    A: F2Matrix
    X: AffineModMap
    B: F2Matrix


def num_to_vec(x: int) -> BitString:
    if not 0 <= x < SIZE:
        raise ValueError(f"{x} is outside [0, 63]")
    return BitString(x, BITS)


def vec_to_num(v: BitString) -> int:
    if v.length != BITS:
        raise ValueError("expected a 6-bit vector")
    return v.value


def apply_linear(m: F2Matrix, x: int) -> int:
    # rows share the MSB-first layout of the argument
    y = 0
    for r in m.rows:
        y = (y << 1) | _PARITY[r & x]
    return y


def _check_invertible(m: F2Matrix, name: str) -> None:
    if m.nrows != BITS or m.cols != BITS or rank(m) != BITS:
        raise ValueError(f"{name} must be an invertible 6x6 matrix")


def compose(A: F2Matrix, X: AffineModMap, B: F2Matrix) -> SBox64:
    _check_invertible(A, "A")
    _check_invertible(B, "B")
    return SBox64(tuple(apply_linear(A, X(apply_linear(B, x))) for x in range(SIZE)))


# --- algebraic normal form -------------------------------------------------


def anf(truth: Sequence[int]) -> list[int]:
    """Moebius transform of a truth table indexed by the input integer."""
    coeffs = list(truth)
    n = len(coeffs)
    step = 1
    while step < n:
        for i in range(n):
            if i & step:
                coeffs[i] ^= coeffs[i ^ step]
        step <<= 1
    return coeffs


def degree(truth: Sequence[int]) -> int:
    coeffs = anf(truth)
    return max((_PARITY_WEIGHT[i] for i, c in enumerate(coeffs) if c), default=-1)


_PARITY_WEIGHT = [bin(i).count("1") for i in range(SIZE)]


def component(s: SBox64, mask: int) -> list[int]:
    return [_PARITY[mask & y] for y in s.table]


def anf_degrees(s: SBox64) -> dict[int, int]:
    """Algebraic degree of mask . S(x) for each of the 63 nonzero output masks."""
    return {mask: degree(component(s, mask)) for mask in range(1, SIZE)}


def staircase_profile(s: SBox64) -> list[int]:
    """Smallest degree sequence over bases of output masks (greedy is optimal here)."""
    degs = anf_degrees(s)
    basis: list[int] = []
    profile = []
    for mask in sorted(degs, key=lambda m: (degs[m], m)):
        v = _reduce(basis, mask)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            profile.append(degs[mask])
            if len(profile) == BITS:
                break
    return profile


STAIRCASE = (1, 2, 3, 4, 5, 5)


def has_staircase(s: SBox64) -> bool:
    """Some basis of output masks has degrees at most 1, 2, 3, 4, 5, 5."""
    return all(d <= bound for d, bound in zip(staircase_profile(s), STAIRCASE))


def _reduce(basis: list[int], v: int) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def _extend(basis: list[int], v: int) -> list[int] | None:
    v = _reduce(basis, v)
    if not v:
        return None
    return sorted([*basis, v], reverse=True)


# --- recovery --------------------------------------------------------------


def fit_affine(table: Sequence[int]) -> AffineModMap | None:
    """The unique x -> a*x + b mod 64 (a odd) matching ``table``, if any."""
    b = table[0]
    a = (table[1] - b) % SIZE
    if a % 2 == 0:
        return None
    if all(table[x] == (a * x + b) % SIZE for x in range(SIZE)):
        return AffineModMap(a, b)
    return None


def _matrix(masks: Sequence[int]) -> F2Matrix:
    # masks[k] is the form producing the bit of weight 2^k
    return F2Matrix(tuple(reversed(masks)), BITS)


def _truth_int(values: Sequence[int]) -> int:
    # bit x of the result is values[x]
    v = 0
    for x in reversed(range(SIZE)):
        v = (v << 1) | values[x]
    return v


# truth table (as a 64-bit int) of each linear form mu . x
_LINEAR_TRUTH = [_truth_int([_PARITY[mu & x] for x in range(SIZE)]) for mu in range(SIZE)]


# --- linear-equivalence invariants ------------------------------------------
#
# For a permutation F let O_d(F) be the output masks c with deg(c . F) <= d
# and I_d(F) the input differences along which every c . F, c in O_d(F), has
# a constant derivative. If S = A o X o B then A^T maps O_d(S) onto O_d(X)
# and B maps I_d(S) onto I_d(X). In the lifting the rows of A^-1 and B are
# guessed one at a time, so every combination of the rows guessed so far can
# be tested against the matching subspace of X. This is what keeps nearly
# linear X (a = 1 mod 8, b = 0 mod 16) from exploding.

_NP_PARITY = np.array(_PARITY, dtype=np.uint8)
_RANGE = np.arange(SIZE)
_XOR = _RANGE[:, None] ^ _RANGE[None, :]
_FORM_PARITY = _NP_PARITY[_RANGE[:, None] & _RANGE[None, :]]  # [form, vector]
_WEIGHT = np.array(_PARITY_WEIGHT)
_DEGREES = range(1, BITS)


def _bitset(mask: np.ndarray) -> int:
    return sum(1 << int(i) for i in np.flatnonzero(mask))


def _component_table(table: Sequence[int]) -> np.ndarray:
    return _NP_PARITY[_RANGE[:, None] & np.asarray(table)[None, :]]


def _component_degrees(comps: np.ndarray) -> np.ndarray:
    coeffs = comps.copy()
    for k in range(BITS):
        step = 1 << k
        view = coeffs.reshape(SIZE, SIZE // (2 * step), 2, step)
        view[:, :, 1, :] ^= view[:, :, 0, :]
    return np.where(coeffs.astype(bool), _WEIGHT[None, :], -1).max(axis=1)


@dataclass(frozen=True)
class _Invariants:
    low_degree: tuple[int, ...]      # bitsets of O_d over masks, d = 1..5, then masks vanishing at F(0)
    structures: tuple[int, ...]      # bitsets of the annihilators of I_d over forms

    def dims(self) -> tuple[int, ...]:
        return tuple(bin(v).count("1") for v in self.low_degree + self.structures)


def _low_degree(table: Sequence[int]) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    comps = _component_table(table)
    degs = _component_degrees(comps)
    sets = [_bitset(degs <= d) for d in _DEGREES]
    # masks c with c . F(0) = 0; A^T carries them to the masks vanishing at b
    sets.append(_bitset(_FORM_PARITY[:, table[0]] == 0))
    return comps, degs, tuple(sets)


def _structures(comps: np.ndarray, degs: np.ndarray) -> tuple[int, ...]:
    deriv = comps[:, _XOR] ^ comps[:, None, :]          # [c, delta, x]
    constant = deriv.min(axis=2) == deriv.max(axis=2)   # [c, delta]
    ann = []
    for d in _DEGREES:
        structure = constant[degs <= d].all(axis=0)
        ann.append(_bitset(~_FORM_PARITY[:, structure].any(axis=1)))
    return tuple(ann)


def _invariants(table: Sequence[int]) -> _Invariants:
    comps, degs, low = _low_degree(table)
    return _Invariants(low, _structures(comps, degs))


def _affine_table(a: int, b: int) -> tuple[int, ...]:
    return tuple((a * x + b) % SIZE for x in range(SIZE))


_LOW_CACHE: dict[tuple[int, int], tuple] = {}
_FULL_CACHE: dict[tuple[int, int], _Invariants] = {}


def _affine_low(a: int, b: int) -> tuple:
    key = (a, b)
    if key not in _LOW_CACHE:
        _LOW_CACHE[key] = _low_degree(_affine_table(a, b))
    return _LOW_CACHE[key]


def _affine_invariants(a: int, b: int) -> _Invariants:
    key = (a, b)
    if key not in _FULL_CACHE:
        comps, degs, low = _affine_low(a, b)
        _FULL_CACHE[key] = _Invariants(low, _structures(comps, degs))
    return _FULL_CACHE[key]


def _popcounts(sets: Sequence[int]) -> tuple[int, ...]:
    return tuple(bin(v).count("1") for v in sets)


def _joint_dims(sets: Sequence[int]) -> tuple[int, ...]:
    # sizes of pairwise intersections; linear maps preserve them as well
    return tuple(bin(p & q).count("1") for i, p in enumerate(sets) for q in sets[i:])


def _sides(fwd: _Invariants, inv: _Invariants) -> tuple[list[int], list[int]]:
    """Subspaces seen by the rows of B and by the rows of A^-1."""
    return list(fwd.structures + inv.low_degree), list(fwd.low_degree + inv.structures)


def _affine_inverse(a: int, b: int) -> tuple[int, int]:
    ai = pow(a, -1, SIZE)
    return ai, (-ai * b) % SIZE


def _signatures(pairs: Sequence[tuple[int, int]]) -> tuple[list[int], list[int]]:
    """Per value, one bit per (S-side, X-side) subspace pair."""
    left = [sum(((p >> v) & 1) << k for k, (p, _) in enumerate(pairs)) for v in range(SIZE)]
    right = [sum(((q >> f) & 1) << k for k, (_, q) in enumerate(pairs)) for f in range(SIZE)]
    return left, right


# --- recovery --------------------------------------------------------------


def iter_decompositions(s: SBox64) -> Iterator[Decomposition]:
    inv = s.inverse()
    s_fwd, s_inv = _invariants(s.table), _invariants(inv.table)
    low_dims = (_popcounts(s_fwd.low_degree), _popcounts(s_inv.low_degree))
    s_mu, s_lam = _sides(s_fwd, s_inv)
    joint = (_joint_dims(s_mu), _joint_dims(s_lam))
    comp_lookup = {_truth_int(component(s, lam)): lam for lam in range(1, SIZE)}
    for a in range(1, SIZE, 2):
        for b in range(SIZE):
            ai, bi = _affine_inverse(a, b)
            # cheap degree screen before the derivative-based invariants
            if (_popcounts(_affine_low(a, b)[2]), _popcounts(_affine_low(ai, bi)[2])) != low_dims:
                continue
            x_mu, x_lam = _sides(_affine_invariants(a, b), _affine_invariants(ai, bi))
            if (_joint_dims(x_mu), _joint_dims(x_lam)) != joint:
                continue
            mu_sig = _signatures(list(zip(s_mu, x_mu)))
            lam_sig = _signatures(list(zip(s_lam, x_lam)))
            for dec in _lift(comp_lookup, a, b, mu_sig, lam_sig):
                # final identification: the conjugated table must be affine mod 64
                Ainv = inverse(dec.A)
                Binv = inverse(dec.B)
                table = [apply_linear(Ainv, s(apply_linear(Binv, x))) for x in range(SIZE)]
                if fit_affine(table) != dec.X or compose(dec.A, dec.X, dec.B) != s:
                    raise AssertionError("inconsistent decomposition")
                yield dec


def _consistent(combos: list[int], new: int, sig: tuple[list[int], list[int]], level: int) -> list[int] | None:
    # combos[f] is the combination of earlier rows selected by f; extend by the new row
    left, right = sig
    top = 1 << level
    out = []
    for f, c in enumerate(combos):
        v = c ^ new
        if not v or left[v] != right[f | top]:
            return None
        out.append(v)
    return out


def _lift(comp_lookup: dict[int, int], a: int, b: int, mu_sig, lam_sig) -> Iterator[Decomposition]:
    def rec(i, lams, mus, u, lam_combos, mu_combos):
        if i == BITS:
            yield Decomposition(inverse(_matrix(lams)), AffineModMap(a, b), _matrix(mus))
            return
        # bit i of a*u + b, with u known below bit i; u_i itself enters as mu . x
        plane = _truth_int([((a * ux + b) >> i) & 1 for ux in u])
        for mu in range(1, SIZE):
            lam = comp_lookup.get(plane ^ _LINEAR_TRUTH[mu])
            if lam is None:
                continue
            new_mu = _consistent(mu_combos, mu, mu_sig, i)
            if new_mu is None:
                continue
            new_lam = _consistent(lam_combos, lam, lam_sig, i)
            if new_lam is None:
                continue
            nu = [ux | (_PARITY[mu & x] << i) for x, ux in enumerate(u)]
            yield from rec(i + 1, [*lams, lam], [*mus, mu], nu, lam_combos + new_lam, mu_combos + new_mu)

    yield from rec(0, [], [], [0] * SIZE, [0], [0])


def recover(s: SBox64, limit: int | None = None) -> list[Decomposition]:
    """All decompositions of ``s`` (at most ``limit`` of them when given)."""
    out = []
    for dec in iter_decompositions(s):
        out.append(dec)
        if limit is not None and len(out) >= limit:
            break
    return out


def x_candidates(decs: Sequence[Decomposition]) -> set[tuple[int, int]]:
    return {(d.X.a, d.X.b) for d in decs}


def modular_dependence_holds(table: Sequence[int]) -> bool:
    """T(x) mod 2^i depends only on x mod 2^i, for every i in 1..6."""
    for i in range(1, BITS + 1):
        mask = (1 << i) - 1
        seen: dict[int, int] = {}
        for x, y in enumerate(table):
            if seen.setdefault(x & mask, y & mask) != y & mask:
                return False
    return True


def format_matrix(m: F2Matrix) -> str:
    return "\n".join(m.row(i).to_str() for i in range(m.nrows))
