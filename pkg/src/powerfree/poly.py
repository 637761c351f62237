"""The binomial f(X) = X^d + c and the local hypotheses of the two counting problems."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .arith import factorize, is_kth_power
from .errors import DomainError

# Residue enumeration is used for p^k up to this size; beyond it, Hensel counts.
ENUMERATION_LIMIT = 10**7


def is_irreducible_binomial(d: int, c: int) -> bool:
    """Capelli's criterion for X^d - a with a = -c."""
    a = -c
    if a == 0:
        return d == 1
    for p in factorize(d):
        if p == 2:
            if a > 0 and is_kth_power(a, 2):
                return False
        elif is_kth_power(a, p):
            return False
    if d % 4 == 0 and a < 0 and (-a) % 4 == 0 and is_kth_power(-a // 4, 4):
        return False
    return True


@dataclass(frozen=True)
class Binomial:
    d: int
    c: int

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"degree must be at least 2, got {self.d}")
        if self.c == 0:
            raise DomainError("constant term must be nonzero")
        if not is_irreducible_binomial(self.d, self.c):
            raise DomainError(f"{self} is reducible over Q")

    def __str__(self) -> str:
        sign = "+" if self.c > 0 else "-"
        return f"x^{self.d}{sign}{abs(self.c)}"

    def __call__(self, n: int) -> int:
        return n**self.d + self.c

    def derivative(self, n: int) -> int:
        return self.d * n ** (self.d - 1)

    def values(self, lo: int, hi: int) -> np.ndarray:
        """f(n) for lo <= n < hi; int64 when safe, otherwise an object array."""
        top = max(abs(lo), abs(hi)) ** self.d + abs(self.c)
        ns = np.arange(lo, hi, dtype=np.int64)
        if top < 2**62:
            return ns**self.d + self.c
        return np.array([int(n) ** self.d + self.c for n in range(lo, hi)], dtype=object)

    @classmethod
    def parse(cls, text: str) -> "Binomial":
        """Parse 'x^d+c' / 'X^5 - 7' style input."""
        s = text.replace(" ", "").lower()
        m = re.fullmatch(r"x\^(\d+)([+-]\d+)", s)
        if not m:
            raise DomainError(f"cannot parse polynomial {text!r}; expected x^d+c")
        return cls(int(m.group(1)), int(m.group(2)))


def eval(f: Binomial, n: int) -> int:  # noqa: A001 - mirrors the operation name
    return f(n)


def is_irreducible(f: Binomial) -> bool:
    return is_irreducible_binomial(f.d, f.c)


@dataclass(frozen=True)
class ProblemInstance:
    f: Binomial
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"k must be at least 2, got {self.k}")

    @property
    def d(self) -> int:
        return self.f.d

    @property
    def j(self) -> int:
        j = self.f.d - self.k
        if j < 1:
            raise DomainError(f"j = d - k = {j}; the determinant method needs k <= d - 1")
        return j


def _residue_values(f: Binomial, m: int) -> np.ndarray:
    """f(n) mod m for every n in [0, m), without overflow (m <= ENUMERATION_LIMIT)."""
    ns = np.arange(m, dtype=np.int64)
    acc = np.ones(m, dtype=np.int64)
    for _ in range(f.d):
        acc = (acc * ns) % m
    return (acc + f.c % m) % m


def _check_prime(p: int) -> None:
    if p < 2 or factorize(p) != {p: 1}:
        raise DomainError(f"{p} is not prime")


def congruence_ok(f: Binomial, k: int, p: int) -> bool:
    """True iff some n has p^k not dividing f(n), i.e. rho_f(p^k) < p^k."""
    _check_prime(p)
    q = p**k
    if q <= ENUMERATION_LIMIT:
        return bool(np.any(_residue_values(f, q) != 0))
    from .roots import lift_roots

    return len(lift_roots(f, p, k).roots) < q


def congruence_ok_coprime(f: Binomial, k: int, p: int) -> bool:
    """True iff some n coprime to p has p^k not dividing f(n)."""
    _check_prime(p)
    q = p**k
    if q <= ENUMERATION_LIMIT:
        vals = _residue_values(f, q)
        coprime = np.arange(q) % p != 0
        return bool(np.any(vals[coprime] != 0))
    from .roots import lift_roots

    coprime_roots = sum(1 for r in lift_roots(f, p, k).roots if r % p)
    return coprime_roots < q - q // p
