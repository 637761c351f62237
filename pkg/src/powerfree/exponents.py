"""Exponent calculus for the admissibility of (d, k), in exact rationals.

rho(t) = (j/4d)(1 + (d - kt)/j + t)^2 is the slice exponent kappa at
B = N^t (without the small eta), q(t) = rho(t) + 1 - t, and
Q(t) = (-2 + 1/d)(1 + t - rho(t))/2 + t is the exponent of the lattice term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, UnsupportedRange


def _check(d: int, k: int) -> int:
    j = d - k
    if j < 1 or k < 1:
        raise DomainError(f"need 1 <= k <= d - 1, got d={d}, k={k}")
    return j


def rho_t(d: int, k: int, t) -> Fraction:
    j = _check(d, k)
    t = Fraction(t)
    S = 1 + (d - k * t) / j + t
    return Fraction(j, 4 * d) * S * S


def q_t(d: int, k: int, t) -> Fraction:
    return rho_t(d, k, t) + 1 - Fraction(t)


def Q_t(d: int, k: int, t) -> Fraction:
    t = Fraction(t)
    return (-2 + Fraction(1, d)) * (1 + t - rho_t(d, k, t)) / 2 + t


@dataclass(frozen=True)
class ExponentProfile:
    d: int
    k: int
    t: Fraction
    rho_t: Fraction
    q_t: Fraction
    Q_t: Fraction
    kappa: Fraction  # rho(t) + eta

    @property
    def j(self) -> int:
        return self.d - self.k

    @property
    def v(self) -> Fraction:
        return Fraction(self.k, self.d)


def profile(d: int, k: int, t, eta=0) -> ExponentProfile:
    t = Fraction(t)
    if not 1 <= t <= Fraction(d, k):
        raise DomainError(f"t = {t} outside [1, d/k]")
    r = rho_t(d, k, t)
    return ExponentProfile(d, k, t, r, q_t(d, k, t), Q_t(d, k, t), r + Fraction(eta))


def t_grid(d: int, k: int, interior: int = 50) -> list[Fraction]:
    """1, d/k and `interior` equally spaced points strictly between."""
    top = Fraction(d, k)
    step = (top - 1) / (interior + 1)
    return [1 + i * step for i in range(interior + 2)]


@dataclass(frozen=True)
class Admissibility:
    d: int
    k: int
    admissible: bool
    sup_rho: Fraction
    sup_Q: Fraction
    rho_endpoints: tuple[Fraction, Fraction]
    Q_endpoints: tuple[Fraction, Fraction]

    @property
    def certificate_consistent(self) -> bool:
        return self.admissible == (self.sup_rho < 1 and self.sup_Q < 0)


def admissible(d: int, k: int, interior: int = 50) -> Admissibility:
    """9k >= 5d + 3, with grid sups of rho and Q as a certificate.

    k <= d/2 lies outside the analysis and raises UnsupportedRange.
    """
    _check(d, k)
    if k < 2:
        raise DomainError("k must be at least 2")
    if 2 * k <= d:
        raise UnsupportedRange(f"k = {k} <= d/2 = {Fraction(d, 2)}: outside the analysed range")
    grid = t_grid(d, k, interior)
    rhos = [rho_t(d, k, t) for t in grid]
    Qs = [Q_t(d, k, t) for t in grid]
    return Admissibility(
        d,
        k,
        9 * k >= 5 * d + 3,
        max(rhos),
        max(Qs),
        (rhos[0], rhos[-1]),
        (Qs[0], Qs[-1]),
    )


@dataclass(frozen=True)
class ThresholdCheck:
    d: int
    by_j: frozenset[int]
    by_k: frozenset[int]
    by_9k: frozenset[int]
    k_threshold: Fraction  # (10d^2 - d) / (18d - 9)

    @property
    def coincide(self) -> bool:
        return self.by_j == self.by_k == self.by_9k


def equivalent_threshold_check(d: int) -> ThresholdCheck:
    """Compare three descriptions of the admissible k in 1..d-1."""
    if d < 3:
        raise DomainError("d must be at least 3")
    jbound = Fraction(4 * d, 9) * Fraction(2 * d - 2, 2 * d - 1)
    kbound = Fraction(10 * d * d - d, 18 * d - 9)
    ks = range(1, d)
    return ThresholdCheck(
        d,
        frozenset(k for k in ks if d - k < jbound),
        frozenset(k for k in ks if k > kbound),
        frozenset(k for k in ks if 9 * k >= 5 * d + 3),
        kbound,
    )


def min_k_ricci(d: int) -> int:
    return d


def min_k_erdos(d: int) -> int:
    return d - 1 if d >= 3 else d


def min_k_nair(d: int) -> int:
    # k >= (sqrt 2 - 1/2) d  <=>  (2k + d)^2 >= 8 d^2
    k = 1
    while (2 * k + d) ** 2 < 8 * d * d:
        k += 1
    return k


def min_k_linear(num: int, const: int, den: int, d: int) -> int:
    """Least k with den * k >= num * d + const."""
    return -(-(num * d + const) // den)


RESULTS = {
    "ricci": min_k_ricci,
    "erdos": min_k_erdos,
    "nair": min_k_nair,
    "hb_3d+2": lambda d: min_k_linear(3, 2, 4, d),
    "salberger_3d+1": lambda d: min_k_linear(3, 1, 4, d),
    "this_5d+3": lambda d: min_k_linear(5, 3, 9, d),
}


@dataclass
class HistoryTable:
    d_max: int
    rows: list[dict[str, int]]  # per d: {"d": d, result: minimal k}
    first_d_minus_2: dict[str, int | None]


def history_table(d_max: int) -> HistoryTable:
    if d_max < 3:
        raise DomainError("d_max must be at least 3")
    rows = []
    first: dict[str, int | None] = {name: None for name in RESULTS}
    for d in range(3, d_max + 1):
        row = {"d": d}
        for name, fn in RESULTS.items():
            kmin = fn(d)
            row[name] = kmin
            if first[name] is None and d >= 4 and d - 2 >= kmin:
                first[name] = d
        rows.append(row)
    return HistoryTable(d_max, rows, first)


def rho_at_top(v) -> Fraction:
    """rho(d/k) written through v = k/d: (1 + v)(1 - v^2) / (4 v^2)."""
    v = Fraction(v)
    return (1 + v) * (1 - v * v) / (4 * v * v)


def nair_first_d_minus_2() -> int:
    """Least d >= 4 with d - 2 >= (sqrt 2 - 1/2) d, i.e. (3d - 4)^2 >= 8 d^2."""
    d = 4
    while (3 * d - 4) ** 2 < 8 * d * d:
        d += 1
    return d
