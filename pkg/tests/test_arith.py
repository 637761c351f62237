import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from powerfree.arith import (
    count_in_residue_class,
    crt_combine,
    factorize,
    iroot,
    is_kth_power,
    largest_prime_factor,
    mobius,
    prime_flags,
    prime_pi,
    primes_upto,
)
from powerfree.errors import CapacityError, DomainError


def test_sieves_match_sympy():
    assert primes_upto(1).size == 0
    assert primes_upto(100).tolist() == list(sympy.primerange(2, 101))
    assert prime_pi(10**6) == 78498
    for lo, hi in ((0, 50), (90, 200), (10**6, 10**6 + 500)):
        flags = prime_flags(lo, hi)
        assert [lo + i for i in range(hi - lo) if flags[i]] == list(sympy.primerange(lo, hi))


@settings(max_examples=200, deadline=None)
@given(st.integers(-(10**25), 10**25).filter(lambda n: n != 0))
def test_factorize_reconstructs(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac.items()) == abs(n)
    assert all(sympy.isprime(p) for p in fac)


def test_factorize_peels_medium_factor_from_large_cofactor():
    p, q = sympy.nextprime(10**6), sympy.nextprime(10**33)
    assert factorize(12 * p * q) == {2: 2, 3: 1, p: 1, q: 1}


def test_factorize_budget():
    p, q = sympy.nextprime(10**40), sympy.nextprime(10**41)
    with pytest.raises(CapacityError):
        factorize(p * q)
    with pytest.raises(DomainError):
        factorize(0)
    assert factorize(sympy.nextprime(10**60) ** 2) == {sympy.nextprime(10**60): 2}


def test_roots_and_powers():
    assert iroot(10**20, 2) == 10**10
    assert iroot(10**20 - 1, 2) == 10**10 - 1
    assert is_kth_power(-8, 3) and not is_kth_power(-4, 2)
    with pytest.raises(DomainError):
        iroot(-1, 2)


def test_mobius_and_lpf():
    for n in range(1, 500):
        assert mobius(n) == sympy.mobius(n)
    assert largest_prime_factor(1) == 1
    assert largest_prime_factor(2 * 3 * 97) == 97


def test_crt_combine():
    rng = random.Random(0)
    for _ in range(100):
        m1, m2 = rng.randint(1, 60), rng.randint(1, 60)
        if math.gcd(m1, m2) != 1:
            continue
        r1 = sorted(rng.sample(range(m1), min(m1, 3)))
        r2 = sorted(rng.sample(range(m2), min(m2, 3)))
        got = crt_combine(r1, m1, r2, m2)
        expect = sorted(n for n in range(m1 * m2) if n % m1 in r1 and n % m2 in r2)
        assert got == expect
    assert crt_combine([1], 3, [], 5) == []


def test_count_in_residue_class():
    for m in range(1, 20):
        for r in range(m):
            for x in (0, 1, 7, 50):
                assert count_in_residue_class(x, r, m) == sum(1 for n in range(1, x + 1) if n % m == r)
