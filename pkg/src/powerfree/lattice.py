"""Two-dimensional lattice machinery for one slice: the map T, Gauss reduction,
lambda-coordinates, and the census of slices by the size of L1.

All arithmetic is exact (Fractions / ints). The implied constants are fixed
here: L_i = 4 / |g_i|, and S is the sup-norm unit square.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

Vec = tuple[Fraction, Fraction]
L_CONST = 4


def _dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


def _round_half_up(q: Fraction) -> int:
    return math.floor(q + Fraction(1, 2))


@dataclass(frozen=True)
class GaussResult:
    g1: Vec
    g2: Vec
    transform: tuple[tuple[int, int], tuple[int, int]]  # rows: g_i = t_i1 v1 + t_i2 v2


def gauss_reduce(v1: Sequence, v2: Sequence) -> GaussResult:
    """Lagrange-Gauss reduction of a basis of a rank-2 lattice in Q^2.

    Returns g1, g2 with |g1| <= |g2| and |<g1, g2>| <= |g1|^2 / 2, plus the
    unimodular transform taking (v1, v2) to (g1, g2). Equal-length outputs are
    ordered lexicographically.
    """
    u = (Fraction(v1[0]), Fraction(v1[1]))
    v = (Fraction(v2[0]), Fraction(v2[1]))
    if u[0] * v[1] - u[1] * v[0] == 0:
        raise DomainError("degenerate lattice: input vectors are dependent")
    cu, cv = (1, 0), (0, 1)
    if _dot(u, u) > _dot(v, v):
        u, v, cu, cv = v, u, cv, cu
    while True:
        mu = _round_half_up(_dot(u, v) / _dot(u, u))
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        cv = (cv[0] - mu * cu[0], cv[1] - mu * cu[1])
        if _dot(v, v) < _dot(u, u):
            u, v, cu, cv = v, u, cv, cu
        else:
            break
    if _dot(u, u) == _dot(v, v) and v < u:
        u, v, cu, cv = v, u, cv, cu
    return GaussResult(u, v, (cu, cv))


@dataclass(frozen=True)
class ReducedBasis:
    g1: Vec
    g2: Vec
    h1: tuple[int, int]  # T h_i = g_i
    h2: tuple[int, int]
    L1_sq: Fraction  # L_i^2 = 16 / |g_i|^2
    L2_sq: Fraction

    @property
    def L1(self) -> float:
        return math.sqrt(self.L1_sq)

    @property
    def L2(self) -> float:
        return math.sqrt(self.L2_sq)

    @property
    def norm1_sq(self) -> Fraction:
        return _dot(self.g1, self.g1)

    @property
    def norm2_sq(self) -> Fraction:
        return _dot(self.g2, self.g2)


@dataclass(frozen=True)
class SliceLattice:
    """Image of Z^2 under T(x1, x2) = (K x1/(2N) - m0 x2/(2B), x2/(2B))."""

    K: int
    N: int
    B: int
    m0: int
    basis: ReducedBasis = field(compare=False)

    @property
    def det(self) -> Fraction:
        return Fraction(self.K, 4 * self.N * self.B)

    def T(self, x: Sequence[int]) -> Vec:
        return (
            Fraction(self.K * x[0], 2 * self.N) - Fraction(self.m0 * x[1], 2 * self.B),
            Fraction(x[1], 2 * self.B),
        )

    def T_inverse(self, a: Sequence) -> tuple[Fraction, Fraction]:
        x2 = 2 * self.B * Fraction(a[1])
        x1 = Fraction(2 * self.N, self.K) * (Fraction(a[0]) + Fraction(self.m0, 2 * self.B) * x2)
        return x1, x2

    def scaled_form(self, x: Sequence[int]) -> int:
        """(2NB)^2 |T x|^2 as an integer."""
        x1, x2 = x
        return (self.K * self.B * x1 - self.N * self.m0 * x2) ** 2 + (self.N * x2) ** 2


def slice_lattice(K: int, N: int, B: int, m0: int) -> SliceLattice:
    if min(K, N, B) < 1 or m0 < 0:
        raise DomainError("slice lattice parameters must be positive")
    col1 = (Fraction(K, 2 * N), Fraction(0))
    col2 = (Fraction(-m0, 2 * B), Fraction(1, 2 * B))
    red = gauss_reduce(col1, col2)
    h1, h2 = red.transform
    rb = ReducedBasis(
        red.g1,
        red.g2,
        h1,
        h2,
        Fraction(L_CONST**2) / _dot(red.g1, red.g1),
        Fraction(L_CONST**2) / _dot(red.g2, red.g2),
    )
    return SliceLattice(K, N, B, m0, rb)


def lambda_coordinates(rb: ReducedBasis, point: Sequence[int]) -> tuple[int, int]:
    """Integers (l1, l2) with l1 h1 + l2 h2 = point."""
    (a, c), (b, d) = rb.h1, rb.h2  # columns h1 = (a, c), h2 = (b, d)
    det = a * d - b * c
    if det not in (1, -1):
        raise AssertionError("h1, h2 do not form a basis of Z^2")
    x, y = point
    return (d * x - b * y) * det, (a * y - c * x) * det


def shortest_vector_search(lat: SliceLattice) -> int:
    """Minimum of the scaled form (2NB)^2 |T x|^2 over nonzero x in Z^2, by exhaustion.

    The radius is |g1| itself, so the search decides whether anything beats g1.
    """
    R = lat.scaled_form(lat.basis.h1)
    N, B, K, m0 = lat.N, lat.B, lat.K, lat.m0
    best = R
    x2max = math.isqrt(R) // N
    KB = K * B
    for x2 in range(-x2max, x2max + 1):
        rest = R - (N * x2) ** 2
        if rest < 0:
            continue
        s = math.isqrt(rest)
        centre = N * m0 * x2
        lo = -((s - centre) // KB)  # ceil((centre - s) / KB)
        hi = (centre + s) // KB
        for x1 in range(lo, hi + 1):
            if x1 == 0 and x2 == 0:
                continue
            q = (KB * x1 - centre) ** 2 + (N * x2) ** 2
            if q < best:
                best = q
    return best


@dataclass
class MembershipReport:
    checked: int
    violations: list[tuple[tuple[int, int], str]]

    @property
    def ok(self) -> bool:
        return not self.violations


def membership_bound_check(lat: SliceLattice, points: Iterable[Sequence[int]]) -> MembershipReport:
    """Every point must map into the unit square and have |lambda_i| <= L_i."""
    rb = lat.basis
    bad = []
    n = 0
    for pt in points:
        n += 1
        pt = (int(pt[0]), int(pt[1]))
        a1, a2 = lat.T(pt)
        if max(abs(a1), abs(a2)) > 1:
            bad.append((pt, "T(x) outside the square S"))
            continue
        l1, l2 = lambda_coordinates(rb, pt)
        if l1 * l1 > rb.L1_sq or l2 * l2 > rb.L2_sq:
            bad.append((pt, f"lambda = ({l1}, {l2}) exceeds (L1, L2)"))
    return MembershipReport(n, bad)


@dataclass
class CensusBucket:
    L: Fraction  # bucket (L, 2L]
    m0_count: int

    def comparison(self, N: int, B: int) -> Fraction:
        return (1 + N / self.L) * B / self.L


@dataclass
class CensusReport:
    K: int
    N: int
    B: int
    m0_values: list[int]
    buckets: list[CensusBucket]
    min_lc_ratio: Fraction  # min over m0 of L1^2 / (NB/(16K))
    bk_over_n: Fraction
    x2_zero_hits: list[int]  # m0 whose shortest vector has x2 = 0

    @property
    def lc_ok(self) -> bool:
        return self.min_lc_ratio >= 1

    @property
    def x2_exclusion_applies(self) -> bool:
        # x2 = 0 cannot give the shortest vector once (BK/N)^2 > 4/3
        return self.bk_over_n**2 > Fraction(4, 3)

    def rows(self) -> list[tuple[Fraction, int, Fraction, Fraction]]:
        out = []
        for bk in self.buckets:
            comp = bk.comparison(self.N, self.B)
            out.append((bk.L, bk.m0_count, comp, bk.m0_count / comp))
        return out


def dyadic_bucket(L_sq: Fraction) -> Fraction:
    """The power of two L with L < sqrt(L_sq) <= 2L."""
    e = math.floor(math.log2(L_sq) / 2) if L_sq > 0 else 0
    L = Fraction(2) ** e
    while L * L >= L_sq:
        L /= 2
    while 4 * L * L < L_sq:
        L *= 2
    return L


def census_by_L1(
    K: int,
    N: int,
    B: int,
    m0_values: Iterable[int] | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> CensusReport:
    """Dyadic histogram of L1(m0).

    By default every m0 in [K/4, 4K] is visited (K <= 10^5); an explicit list
    (e.g. the occupied slices) or a seeded sample can be given instead.
    """
    if m0_values is None:
        full = range(-(-K // 4), 4 * K + 1)
        if sample is not None and sample < len(full):
            m0_values = sorted(random.Random(seed).sample(full, sample))
        else:
            if K > 10**5:
                raise DomainError("K above 10^5: pass m0 values or a sample size")
            m0_values = list(full)
    m0_values = sorted(set(int(m) for m in m0_values))
    counts: dict[Fraction, int] = {}
    min_ratio = None
    x2_zero = []
    target = Fraction(N * B, 16 * K)
    for m0 in m0_values:
        lat = slice_lattice(K, N, B, m0)
        rb = lat.basis
        L = dyadic_bucket(rb.L1_sq)
        counts[L] = counts.get(L, 0) + 1
        ratio = rb.L1_sq / target
        min_ratio = ratio if min_ratio is None else min(min_ratio, ratio)
        if rb.h1[1] == 0:
            x2_zero.append(m0)
    buckets = [CensusBucket(L, c) for L, c in sorted(counts.items())]
    return CensusReport(
        K,
        N,
        B,
        m0_values,
        buckets,
        min_ratio if min_ratio is not None else Fraction(0),
        Fraction(B * K, N),
        x2_zero,
    )
