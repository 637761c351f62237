"""Exact integer linear algebra: determinant, rank and primitive kernel vectors.

Everything runs on Python integers (or Fractions during back-substitution),
so results are exact for entries of any size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(map(int, r)) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i * self.cols + j] for j in col_idx] for i in row_idx],
            cols=len(col_idx),
        )

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise DimensionError("vector length does not match column count")
        return [sum(a * b for a, b in zip(self.row(i), vec)) for i in range(self.rows)]


@dataclass(frozen=True)
class KernelVector:
    """Primitive integer kernel vector, first nonzero coordinate positive."""

    coords: tuple[int, ...]


def _as_rows(m) -> list[list[int]]:
    if isinstance(m, IntMatrix):
        return m.to_rows()
    return [list(map(int, r)) for r in m]


def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (rank, sign of row swaps)."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = 1
    rank = 0
    sign = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if rows[i][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
            sign = -sign
        p = rows[rank][col]
        prow = rows[rank]
        for i in range(rank + 1, nrows):
            ri = rows[i]
            a = ri[col]
            for jj in range(col + 1, ncols):
                ri[jj] = (p * ri[jj] - a * prow[jj]) // prev
            ri[col] = 0
        prev = p
        rank += 1
    return rank, sign


def determinant(m) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    rows = _as_rows(m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return 1
    rank, sign = _bareiss(rows)
    if rank < n:
        return 0
    return sign * rows[n - 1][n - 1]


def rank(m) -> int:
    """Exact rank over Q."""
    rows = _as_rows(m)
    if not rows or not rows[0]:
        return 0
    r, _ = _bareiss(rows)
    return r


def rank_mod_p(m, p: int) -> int:
    """Rank over F_p (used as an independent cross-check)."""
    rows = [[v % p for v in r] for r in _as_rows(m)]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                a = rows[i][col]
                rows[i] = [(vi - a * vr) % p for vi, vr in zip(rows[i], rows[r])]
        r += 1
    return r


def _rref(rows: list[list[int]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [[Fraction(v) for v in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                a = mat[i][col]
                mat[i] = [vi - a * vr for vi, vr in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def kernel_vector(m) -> KernelVector | None:
    """A primitive integer vector c with m.c = 0, or None when m has full column rank.

    The first free column (in column order) is set to 1, the others to 0, so
    the answer is reproducible.
    """
    if isinstance(m, IntMatrix):
        rows, ncols = m.to_rows(), m.cols
    else:
        rows = _as_rows(m)
        ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return None
    mat, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    if not free:
        return None
    f0 = free[0]
    vec = [Fraction(0)] * ncols
    vec[f0] = Fraction(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -mat[i][f0]
    den = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return KernelVector(tuple(ints))
