"""Rigorous enclosures of the Euler products C(f,k) and C'(f,k).

Partial products over p <= P are exact rationals. For p > P every prime is
unramified (P is forced past the primes of d*c), roots are simple, and
rho_f(p^k) = rho_f(p) <= d, so the tail product is at least
1 - d * sum_{n > P} n^-k >= 1 - d / ((k-1) P^(k-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factorize, primes_upto
from .errors import DomainError
from .poly import Binomial
from .roots import _lift


@dataclass(frozen=True)
class DensityInterval:
    lo: Fraction
    hi: Fraction
    truncation_prime: int
    tail_bound: Fraction
    vanishing_prime: int | None = None  # a prime whose local factor is 0

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def congruence_failure(self) -> bool:
        return self.vanishing_prime is not None

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi


def _ramified_bound(f: Binomial) -> int:
    return max(factorize(f.d * f.c))


def _prod(values: list[int]) -> int:
    # balanced product tree keeps the big multiplications even-sized
    while len(values) > 1:
        values = [
            values[i] * values[i + 1] if i + 1 < len(values) else values[i]
            for i in range(0, len(values), 2)
        ]
    return values[0] if values else 1


def _enclosure(f: Binomial, k: int, P: int, coprime: bool) -> DensityInterval:
    if k < 2:
        raise DomainError("k must be at least 2")
    if P < 2:
        # no factor multiplied in: only the trivial enclosure is certain
        return DensityInterval(Fraction(0), Fraction(1), P, Fraction(1))
    if P < _ramified_bound(f):
        raise DomainError(
            f"truncation {P} must reach the largest prime dividing d*c ({_ramified_bound(f)})"
        )
    nums, dens = [], []
    for p in primes_upto(P):
        p = int(p)
        roots = _lift(f.d, f.c, p, k)
        pk = p**k
        if coprime:
            r = sum(1 for n in roots if n % p)
            den = pk - pk // p
        else:
            r = len(roots)
            den = pk
        if r == den:
            return DensityInterval(Fraction(0), Fraction(0), P, Fraction(0), vanishing_prime=p)
        if r:
            nums.append(den - r)
            dens.append(den)
    partial = Fraction(_prod(nums), _prod(dens))
    tail = Fraction(f.d, (k - 1) * P ** (k - 1))
    if coprime:
        tail *= 1 + Fraction(2, P)
    lo = partial * (1 - tail) if tail < 1 else Fraction(0)
    return DensityInterval(lo, partial, P, tail)


@lru_cache(maxsize=64)
def constant_C(f: Binomial, k: int, P: int) -> DensityInterval:
    """Enclosure of prod_p (1 - rho_f(p^k) / p^k)."""
    return _enclosure(f, k, P, coprime=False)


@lru_cache(maxsize=64)
def constant_Cprime(f: Binomial, k: int, P: int) -> DensityInterval:
    """Enclosure of prod_p (1 - rho'_f(p^k) / phi(p^k))."""
    return _enclosure(f, k, P, coprime=True)


def to_decimal(q: Fraction, digits: int = 12) -> str:
    """Exact rounding of a rational to a fixed number of decimals."""
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = q * 10**digits
    n = math.floor(scaled)
    if scaled - n >= Fraction(1, 2):
        n += 1
    whole, frac = divmod(n, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"
