import math
import random

import pytest
import sympy

from oracles import brute_roots
from powerfree.arith import primes_upto
from powerfree.errors import CapacityError, DomainError
from powerfree.poly import Binomial
from powerfree.roots import (
    MAX_PRIME,
    lift_roots,
    rho,
    rho_prime_power,
    roots_mod,
    roots_mod_prime,
    roots_mod_prime_bruteforce,
)

CORPUS = [Binomial(2, 1), Binomial(3, 2), Binomial(3, -2), Binomial(5, 3), Binomial(4, 3), Binomial(6, -7)]


def test_roots_mod_prime_examples():
    assert roots_mod_prime(Binomial(2, 1), 5).roots == (2, 3)
    assert roots_mod_prime(Binomial(2, 1), 3).roots == ()
    assert roots_mod_prime(Binomial(3, 2), 2).roots == (0,)


def test_lift_examples():
    assert lift_roots(Binomial(2, 1), 5, 2).roots == (7, 18)
    assert lift_roots(Binomial(3, 2), 2, 2).roots == ()
    assert lift_roots(Binomial(2, 1), 3, 5).roots == ()


def test_rho_examples():
    assert rho(Binomial(2, 1), 1).count == 1
    assert rho(Binomial(2, 1), 65).count == 4
    assert len(brute_roots(2, 1, 65)) == 4
    r = rho(Binomial(3, 2), 2)
    assert (r.count, r.coprime_count) == (1, 0)


def test_fast_root_finder_matches_brute_force():
    for f in CORPUS + [Binomial(12, 5), Binomial(9, -2)]:
        for p in primes_upto(3000):
            p = int(p)
            assert roots_mod_prime(f, p) == roots_mod_prime_bruteforce(f, p), (f, p)


def test_fast_root_finder_large_primes_verified():
    rng = random.Random(3)
    for f in CORPUS:
        for _ in range(40):
            p = sympy.nextprime(rng.randint(10**5, 10**7 - 10**3))
            rs = roots_mod_prime(f, p).roots
            assert len(rs) <= f.d and len(set(rs)) == len(rs)
            assert all((pow(r, f.d, p) + f.c) % p == 0 for r in rs)
            # the count must equal gcd(d, p-1) or 0 when p does not divide d*c
            if (f.d * f.c) % p:
                g = math.gcd(f.d, p - 1)
                assert len(rs) in (0, g)
                assert (len(rs) == g) == (pow(-f.c % p, (p - 1) // g, p) == 1)


def test_hensel_matches_brute_force_small():
    for f in CORPUS:
        for p in (2, 3, 5, 7, 11, 13):
            k = 1
            while p**k <= 5000:
                assert lift_roots(f, p, k).roots == brute_roots(f.d, f.c, p**k), (f, p, k)
                k += 1


def test_singular_branches():
    # p | c makes 0 a root, and f'(0) = 0 so the root is singular
    f = Binomial(2, 9)
    for k in range(1, 6):
        assert lift_roots(f, 3, k).roots == brute_roots(2, 9, 3**k)
    g = Binomial(3, 16)
    for k in range(1, 8):
        assert lift_roots(g, 2, k).roots == brute_roots(3, 16, 2**k)


def test_roots_mod_composite_matches_brute_force():
    rng = random.Random(8)
    for f in CORPUS:
        for _ in range(25):
            m = rng.randint(1, 4000)
            assert roots_mod(f, m).roots == brute_roots(f.d, f.c, m)


def test_multiplicativity():
    rng = random.Random(2)
    for f in CORPUS:
        done = 0
        while done < 40:
            m, n = rng.randint(1, 10**4), rng.randint(1, 10**4)
            if math.gcd(m, n) != 1:
                continue
            a, b, ab = rho(f, m), rho(f, n), rho(f, m * n)
            assert ab.count == a.count * b.count
            assert ab.coprime_count == a.coprime_count * b.coprime_count
            done += 1


def test_simple_root_stability_and_bound():
    for f in CORPUS:
        for p in primes_upto(400):
            p = int(p)
            r1 = rho_prime_power(f, p, 1).count
            assert r1 <= f.d
            if (f.d * f.c) % p:
                for k in (2, 3, 4):
                    assert rho_prime_power(f, p, k).count == r1


def test_capacity_and_domain_errors():
    f = Binomial(2, 1)
    with pytest.raises(CapacityError):
        roots_mod_prime(f, sympy.nextprime(MAX_PRIME))
    with pytest.raises(DomainError):
        rho(f, 0)
    with pytest.raises(DomainError):
        rho_prime_power(f, 4, 2)
