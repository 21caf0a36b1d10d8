"""Dense linear algebra over GF(2) on int-packed rows, plus product bases.

A row is an int whose most significant of ``cols`` bits is column 0, the same
layout as :class:`BitString`, so a printed row reads as its binary value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from cryptobench.bits import BitString


@dataclass(frozen=True)
class F2Matrix:
    rows: tuple[int, ...]
    cols: int

    def __post_init__(self):
        limit = 1 << self.cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.cols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(tuple(1 << (n - 1 - i) for i in range(n)), n)

    @classmethod
    def from_bitstrings(cls, rows: Sequence[BitString], ncols: int | None = None) -> F2Matrix:
        if ncols is None:
            ncols = rows[0].length if rows else 0
        if any(r.length != ncols for r in rows):
            raise ValueError("rows of unequal length")
        return cls(tuple(r.value for r in rows), ncols)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> F2Matrix:
        ncols = len(rows[0]) if rows else 0
        return cls.from_bitstrings([BitString.from_bits(r) for r in rows], ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[BitString]) -> F2Matrix:
        if not columns:
            raise ValueError("need at least one column")
        nrows = columns[0].length
        ncols = len(columns)
        rows = [0] * nrows
        for j, c in enumerate(columns):
            if c.length != nrows:
                raise ValueError("columns of unequal length")
            shift = ncols - 1 - j
            v = c.value
            for i in range(nrows):
                if (v >> (nrows - 1 - i)) & 1:
                    rows[i] |= 1 << shift
        return cls(tuple(rows), ncols)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> (self.cols - 1 - j)) & 1

    def row(self, i: int) -> BitString:
        return BitString(self.rows[i], self.cols)

    def transpose(self) -> F2Matrix:
        return F2Matrix.from_columns([self.row(i) for i in range(self.nrows)])

    def permute_columns(self, perm: Sequence[int]) -> F2Matrix:
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        out = []
        for r in self.rows:
            v = 0
            for src in perm:
                v = (v << 1) | ((r >> (self.cols - 1 - src)) & 1)
            out.append(v)
        return F2Matrix(tuple(out), self.cols)

    def mul_vec(self, z: BitString) -> BitString:
        if z.length != self.cols:
            raise ValueError("dimension mismatch")
        return BitString.from_bits(bin(r & z.value).count("1") & 1 for r in self.rows)

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        if self.cols != other.nrows:
            raise ValueError("dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            for k in range(self.cols):
                if (r >> (self.cols - 1 - k)) & 1:
                    acc ^= other.rows[k]
            out.append(acc)
        return F2Matrix(tuple(out), other.cols)

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def __str__(self) -> str:
        return "\n".join(self.row(i).to_str() for i in range(self.nrows))


def _eliminate(rows: list[int], width: int, pivot_bits: int) -> list[tuple[int, int]]:
    """Reduced row echelon form in place; search pivots among the top ``pivot_bits`` bits.

    Returns (row index, pivot column) pairs, pivots taken leftmost first.
    """
    pivots = []
    ri = 0
    for col in range(pivot_bits):
        bit = 1 << (width - 1 - col)
        sel = next((k for k in range(ri, len(rows)) if rows[k] & bit), None)
        if sel is None:
            continue
        rows[ri], rows[sel] = rows[sel], rows[ri]
        p = rows[ri]
        for k in range(len(rows)):
            if k != ri and rows[k] & bit:
                rows[k] ^= p
        pivots.append((ri, col))
        ri += 1
        if ri == len(rows):
            break
    return pivots


def rank(m: F2Matrix) -> int:
    return len(_eliminate(list(m.rows), m.cols, m.cols))


def inverse(m: F2Matrix) -> F2Matrix:
    n = m.cols
    if m.nrows != n:
        raise ValueError("matrix is not square")
    aug = [(r << n) | (1 << (n - 1 - i)) for i, r in enumerate(m.rows)]
    if len(_eliminate(aug, 2 * n, n)) != n:
        raise ValueError("matrix is singular")
    mask = (1 << n) - 1
    return F2Matrix(tuple(r & mask for r in aug), n)


def solve(m: F2Matrix, rhs: BitString) -> BitString | None:
    """One solution of ``m · z = rhs`` or None when inconsistent.

    Pivots are the leftmost available columns; free variables are set to 0.
    """
    if rhs.length != m.nrows:
        raise ValueError(f"rhs has length {rhs.length}, matrix has {m.nrows} rows")
    width = m.cols + 1
    aug = [(r << 1) | rhs[i] for i, r in enumerate(m.rows)]
    pivots = _eliminate(aug, width, m.cols)
    for k in range(len(pivots), len(aug)):
        if aug[k] & 1:
            return None
    z = 0
    for ri, col in pivots:
        if aug[ri] & 1:
            z |= 1 << (m.cols - 1 - col)
    return BitString(z, m.cols)


def nullspace(m: F2Matrix) -> list[BitString]:
    """Basis of {z : m · z = 0}, one vector per free column (ascending)."""
    rows = list(m.rows)
    pivots = _eliminate(rows, m.cols, m.cols)
    pivot_cols = {col: ri for ri, col in pivots}
    basis = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        z = 1 << (m.cols - 1 - free)
        fbit = 1 << (m.cols - 1 - free)
        for col, ri in pivot_cols.items():
            if rows[ri] & fbit:
                z |= 1 << (m.cols - 1 - col)
        basis.append(BitString(z, m.cols))
    return basis


# --- product bases ---------------------------------------------------------


def product_dimension(s: int, d: int) -> int:
    return sum(math.comb(s, i) for i in range(d + 1))


def subsets_upto(s: int, d: int) -> list[tuple[int, ...]]:
    """Index subsets of size 0..d; size ascending, lexicographic within a size."""
    return [c for k in range(d + 1) for c in itertools.combinations(range(s), k)]


@dataclass(frozen=True)
class BasisFamily:
    s: int
    d: int
    generators: tuple[BitString, ...]

    def __post_init__(self):
        _check_params(self.s, self.d)
        if len(self.generators) != self.s:
            raise ValueError(f"expected {self.s} generators, got {len(self.generators)}")
        r = self.r
        if any(g.length != r for g in self.generators):
            raise ValueError(f"every generator must have length r = {r}")

    @property
    def r(self) -> int:
        return product_dimension(self.s, self.d)

    @classmethod
    def from_strings(cls, d: int, gens: Iterable[str]) -> BasisFamily:
        g = tuple(BitString.from_str(x) for x in gens)
        return cls(len(g), d, g)


def _check_params(s: int, d: int) -> None:
    if not (1 < d <= s):
        raise ValueError(f"need s >= d > 1, got s={s}, d={d}")


def componentwise_products(fam: BasisFamily) -> list[BitString]:
    r = fam.r
    ones = (1 << r) - 1
    out = []
    for subset in subsets_upto(fam.s, fam.d):
        v = ones
        for i in subset:
            v &= fam.generators[i].value
        out.append(BitString(v, r))
    return out


def product_matrix(fam: BasisFamily) -> F2Matrix:
    return F2Matrix.from_bitstrings(componentwise_products(fam), fam.r)


def is_basis_family(fam: BasisFamily) -> bool:
    return rank(product_matrix(fam)) == fam.r


def construct_basis_family(s: int, d: int) -> BasisFamily:
    """A family whose products of up to d members form a basis of GF(2)^r.

    For s == d the generators are the value vectors of the coordinate
    functions x_1..x_d over all 2^d inputs (x_1 most significant). For
    s > d, column T of the product matrix (T a subset of size <= d) has ones
    exactly at the rows indexed by subsets of T; that matrix is unitriangular
    and generator i is the row of the singleton {i}.
    """
    _check_params(s, d)
    if s == d:
        r = 1 << d
        gens = []
        for i in range(d):
            v = 0
            for x in range(r):
                v = (v << 1) | ((x >> (d - 1 - i)) & 1)
            gens.append(BitString(v, r))
        return BasisFamily(s, d, tuple(gens))
    cols = subsets_upto(s, d)
    r = len(cols)
    gens = []
    for i in range(s):
        v = 0
        for t in cols:
            v = (v << 1) | (i in t)
        gens.append(BitString(v, r))
    return BasisFamily(s, d, tuple(gens))


def column_candidates(d: int) -> list[BitString]:
    """For s == d, every vector admissible as a column of the product matrix.

    Coordinate 0 is 1, coordinates 1..d are free, and the coordinate of a
    larger subset is the product of its singleton coordinates.
    """
    rows = subsets_upto(d, d)
    out = []
    for x in range(1 << d):
        bits = [1 if all((x >> (d - 1 - i)) & 1 for i in subset) else 0 for subset in rows]
        out.append(BitString.from_bits(bits))
    return out


def basis_count_equal_case(d: int) -> int:
    """Number of bases for s == d: columns are the 2^d candidates up to order."""
    return math.factorial(len(column_candidates(d)))
