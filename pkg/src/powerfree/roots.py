"""Roots of f = X^d + c modulo primes, prime powers and composite moduli; rho_f and rho'_f."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import crt_combine, factorize, is_prime
from .errors import CapacityError, DomainError
from .poly import Binomial

MAX_PRIME = 10**7
_BRUTE_FORCE_BELOW = 200


@dataclass(frozen=True)
class RootSet:
    modulus: int
    roots: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class RhoValue:
    modulus: int
    count: int
    coprime_count: int


# --- root extraction in F_p^* ------------------------------------------------


def _prime_root(y: int, q: int, p: int) -> int:
    """One solution of x^q = y mod p for prime q | p - 1 and y a q-th power residue.

    Tonelli-Shanks generalised: take a first guess, then correct it inside the
    q-Sylow subgroup with a Pohlig-Hellman discrete log.
    """
    t, s = p - 1, 0
    while t % q == 0:
        t //= q
        s += 1
    x = pow(y, pow(q, -1, t), p) if t > 1 else 1
    err = pow(x, q, p) * pow(y, -1, p) % p  # lies in the Sylow subgroup
    if err == 1:
        return x
    z = 2
    while pow(z, (p - 1) // q, p) == 1:
        z += 1
    gen = pow(z, t, p)  # generator of the q-Sylow subgroup (order q^s)
    top = pow(gen, q ** (s - 1), p)
    table = {pow(top, i, p): i for i in range(q)}
    target = pow(err, -1, p)
    log = 0
    for i in range(s):
        h = target * pow(gen, -log, p) % p
        log += table[pow(h, q ** (s - 1 - i), p)] * q**i
    # target = gen^log with q | log, so (gen^(log/q))^q corrects the guess
    return x * pow(gen, log // q, p) % p


def _unity_root(g: int, p: int) -> int:
    """A primitive g-th root of unity mod p (g | p - 1)."""
    qs = factorize(g)
    h = 2
    while True:
        z = pow(h, (p - 1) // g, p)
        if all(pow(z, g // q, p) != 1 for q in qs):
            return z
        h += 1


def _one_root(y: int, g: int, p: int) -> int:
    """One solution of x^g = y mod p for g | p - 1 and y a g-th power residue."""
    if g == 1:
        return y
    q = min(factorize(g))
    rest = g // q
    z = _prime_root(y, q, p)
    if rest == 1:
        return z
    zeta = _unity_root(q, p)
    # some q-th root of y is itself a rest-th power
    for _ in range(q):
        if pow(z, (p - 1) // math.gcd(rest, p - 1), p) == 1:
            return _one_root(z, rest, p)
        z = z * zeta % p
    raise AssertionError("no compatible root found")


# --- public operations ------------------------------------------------------


def roots_mod_prime(f: Binomial, p: int) -> RootSet:
    """All n in [0, p) with p | f(n)."""
    if p > MAX_PRIME:
        raise CapacityError(f"prime {p} above {MAX_PRIME}")
    if p < 2:
        raise DomainError(f"{p} is not prime")
    return RootSet(p, _roots_mod_prime(f.d, f.c, p))


@lru_cache(maxsize=1 << 16)
def _roots_mod_prime(d: int, c: int, p: int) -> tuple[int, ...]:
    c %= p
    if p < _BRUTE_FORCE_BELOW or p <= 4 * d:
        return tuple(n for n in range(p) if (pow(n, d, p) + c) % p == 0)
    a = (-c) % p
    if a == 0:
        return (0,)
    # x^d = a has solutions iff a is a g-th power, g = gcd(d, p-1); with
    # d = g*e and e invertible mod (p-1)/g this reduces to x^g = a^(1/e).
    g = math.gcd(d, p - 1)
    if pow(a, (p - 1) // g, p) != 1:
        return ()
    y = pow(a, pow(d // g, -1, (p - 1) // g), p) if p - 1 > g else 1
    if g == 1:
        return (y,)
    x0 = _one_root(y, g, p)
    zeta = _unity_root(g, p)
    roots = []
    for _ in range(g):
        roots.append(x0)
        x0 = x0 * zeta % p
    return tuple(sorted(roots))


def roots_mod_prime_bruteforce(f: Binomial, p: int) -> RootSet:
    return RootSet(p, tuple(n for n in range(p) if f(n) % p == 0))


def lift_roots(f: Binomial, p: int, k: int) -> RootSet:
    """Roots of f modulo p^k by Hensel lifting.

    Simple roots lift uniquely; singular roots (p | f'(r)) are branched over all
    p candidates at each level.
    """
    if k < 1:
        raise DomainError("k must be positive")
    return RootSet(p**k, _lift(f.d, f.c, p, k))


@lru_cache(maxsize=1 << 16)
def _lift(d: int, c: int, p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return _roots_mod_prime(d, c, p)
    prev = _lift(d, c, p, k - 1)
    pk1 = p ** (k - 1)
    pk = pk1 * p
    out = []
    for r in prev:
        fr = pow(r, d, pk) + c
        dfr = d * pow(r, d - 1, p) % p
        if dfr:
            t = (-(fr // pk1) * pow(dfr, -1, p)) % p
            out.append(r + t * pk1)
        else:
            for t in range(p):
                n = r + t * pk1
                if (pow(n, d, pk) + c) % pk == 0:
                    out.append(n)
    return tuple(sorted(out))


def roots_mod(f: Binomial, m: int) -> RootSet:
    """Roots of f modulo an arbitrary positive m via factorization and CRT."""
    if m < 1:
        raise DomainError("modulus must be positive")
    residues, mod = [0], 1
    for p, e in sorted(factorize(m).items()):
        if p > MAX_PRIME:
            raise CapacityError(f"prime factor {p} of {m} above {MAX_PRIME}")
        local = _lift(f.d, f.c, p, e)
        residues = crt_combine(residues, mod, local, p**e)
        mod *= p**e
        if not residues:
            break
    return RootSet(m, tuple(sorted(r % m for r in residues)) if residues else ())


def rho(f: Binomial, m: int) -> RhoValue:
    """rho_f(m) and rho'_f(m) from the prime-power factorization of m."""
    if m < 1:
        raise DomainError("modulus must be positive")
    count = coprime = 1
    for p, e in factorize(m).items():
        if p > MAX_PRIME:
            raise CapacityError(f"prime factor {p} of {m} above {MAX_PRIME}")
        local = _lift(f.d, f.c, p, e)
        count *= len(local)
        coprime *= sum(1 for r in local if r % p)
    return RhoValue(m, count, coprime)


def rho_prime_power(f: Binomial, p: int, k: int) -> RhoValue:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    local = _lift(f.d, f.c, p, k)
    return RhoValue(p**k, len(local), sum(1 for r in local if r % p))
