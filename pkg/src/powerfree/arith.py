"""Elementary arithmetic helpers: prime sieves, factorization, CRT, integer roots.

Factorization and primality are delegated to sympy (trial division, Pollard rho,
p-1 and BPSW); everything here is exact integer arithmetic.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from sympy import factorint as _factorint
from sympy import isprime as _isprime
from sympy import integer_nthroot
from sympy.ntheory import pollard_pm1 as _pollard_pm1
from sympy.ntheory import pollard_rho as _pollard_rho

from .errors import CapacityError, DomainError

# Composites above this size are not fed to Pollard rho.
MAX_FACTOR_BITS = 110
# Work spent trying to split a cofactor above that size before giving up.
PEEL_STEPS = 10**5


def primes_upto(n: int) -> np.ndarray:
    """All primes p <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def prime_flags(lo: int, hi: int) -> np.ndarray:
    """Boolean array marking primes in [lo, hi) by a segmented sieve."""
    lo = max(lo, 0)
    if hi <= lo:
        return np.zeros(0, dtype=bool)
    flags = np.ones(hi - lo, dtype=bool)
    for n in range(lo, min(hi, 2)):
        flags[n - lo] = False
    for p in primes_upto(math.isqrt(hi - 1)):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        flags[start - lo :: p] = False
    return flags


def prime_pi(x: int) -> int:
    """Number of primes <= x."""
    if x < 2:
        return 0
    return int(primes_upto(x).size)


def is_prime(n: int) -> bool:
    return bool(_isprime(n))


def _peel(cof: int) -> list[int]:
    """Split a composite cofactor with bounded rho / p-1 attempts; parts may stay composite."""
    parts, out = [cof], []
    while parts:
        m = parts.pop()
        if m == 1 or _isprime(m) or m.bit_length() <= MAX_FACTOR_BITS:
            out.append(m)
            continue
        root, exact = _perfect_power(m)
        if exact:
            e = 0
            while m > 1:
                m //= root
                e += 1
            parts.extend([root] * e)
            continue
        g = _pollard_rho(m, retries=2, max_steps=PEEL_STEPS) or _pollard_pm1(m, B=PEEL_STEPS)
        if g is None or g in (1, m):
            out.append(m)
        else:
            parts.extend([g, m // g])
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {p: e}; raises CapacityError on huge hard cofactors."""
    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor 0")
    if n == 1:
        return {}
    # cheap part first; the remaining cofactor is what rho would have to crack
    small = _factorint(n, limit=10**5)
    out: dict[int, int] = {}
    for p, e in small.items():
        p = int(p)
        if p <= 10**5 or _isprime(p):
            out[p] = out.get(p, 0) + int(e)
            continue
        for part in _peel(p):
            if part.bit_length() > MAX_FACTOR_BITS and not _isprime(part):
                raise CapacityError(f"cofactor {part} exceeds the factorization budget")
            for q, f in _factorint(part).items():
                out[int(q)] = out.get(int(q), 0) + int(f * e)
    return dict(sorted(out.items()))


def _perfect_power(n: int) -> tuple[int, bool]:
    for e in range(2, n.bit_length() + 1):
        r, exact = integer_nthroot(n, e)
        if exact:
            return int(r), True
        if r < 2:
            break
    return n, False


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise DomainError("iroot of a negative number")
    return int(integer_nthroot(n, k)[0])


def is_kth_power(n: int, k: int) -> bool:
    if n < 0:
        return k % 2 == 1 and is_kth_power(-n, k)
    return bool(integer_nthroot(n, k)[1])


def mobius(n: int) -> int:
    mu = 1
    for e in factorize(n).values():
        if e > 1:
            return 0
        mu = -mu
    return mu


def euler_phi_prime_power(p: int, e: int) -> int:
    return p ** (e - 1) * (p - 1) if e >= 1 else 1


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue mod m1*m2 congruent to r1 mod m1 and r2 mod m2 (coprime moduli)."""
    t = ((r2 - r1) * pow(m1, -1, m2)) % m2
    return r1 + m1 * t


def crt_combine(res1: Iterable[int], m1: int, res2: Iterable[int], m2: int) -> list[int]:
    """All residues mod m1*m2 from every pairing of res1 (mod m1) and res2 (mod m2)."""
    res2 = list(res2)
    if not res2:
        return []
    inv = pow(m1, -1, m2)
    out = []
    for r1 in res1:
        for r2 in res2:
            out.append(r1 + m1 * (((r2 - r1) * inv) % m2))
    out.sort()
    return out


def largest_prime_factor(n: int) -> int:
    fac = factorize(n)
    return max(fac) if fac else 1


def count_in_residue_class(x: int, r: int, m: int) -> int:
    """#{1 <= n <= x : n = r (mod m)} by floor arithmetic."""
    if x < 1:
        return 0
    return (x - r) // m - (-r) // m
