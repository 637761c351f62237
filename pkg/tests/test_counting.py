import math
from fractions import Fraction

import pytest
import sympy

from oracles import brute_roots, kfree_by_factoring, naive_kfree_count
from powerfree.counting import (
    count_in_class,
    count_kfree_prime_args,
    count_kfree_values,
    decomposition_report,
    is_kfree,
    kfree_flags,
    mobius_terms,
    prime_count_in_class,
    sieve_identity_check,
)
from powerfree.errors import CapacityError, DomainError
from powerfree.poly import Binomial


def test_is_kfree_examples():
    assert not is_kfree(12, 2)
    assert is_kfree(101, 2)
    assert not is_kfree(50, 2)
    assert is_kfree(1, 2)
    assert is_kfree(2**2 * 3**2, 3)
    with pytest.raises(DomainError):
        is_kfree(0, 2)


def test_is_kfree_capacity_error_names_cofactor():
    p, q = sympy.nextprime(10**40), sympy.nextprime(10**41)
    with pytest.raises(CapacityError, match=str(p * q)):
        is_kfree(p * q, 2)


def test_count_examples():
    assert count_kfree_values(Binomial(2, 1), 2, 10).count == 9
    assert count_kfree_values(Binomial(2, 1), 2, 1).count == 1
    rep = count_kfree_prime_args(Binomial(2, 1), 2, 10)
    assert (rep.count, rep.prime_count) == (3, 4)
    assert count_kfree_prime_args(Binomial(2, 1), 2, 1).count == 0


def test_count_report_fields():
    rep = count_kfree_values(Binomial(2, 1), 2, 1000, trunc=1000)
    assert 0 <= rep.count <= rep.x
    assert rep.residual == rep.count - rep.main_term
    assert rep.density == Fraction(rep.count, 1000)


@pytest.mark.parametrize(
    "d,c,k,x",
    [(3, 2, 3, 10**4), (2, 1, 2, 3000), (3, 2, 2, 3000), (5, 3, 2, 1500), (4, 3, 2, 2000), (2, -3, 2, 2000)],
)
def test_sieve_matches_factorization_oracle(d, c, k, x):
    f = Binomial(d, c)
    flags = kfree_flags(f, k, x)
    for n in range(1, x + 1):
        assert bool(flags[n]) == kfree_by_factoring(n**d + c, k), n


def test_negative_values_and_small_segments():
    # x^2 - 3 is negative at n = 1 and the segment size forces many segments
    f = Binomial(2, -3)
    a = kfree_flags(f, 2, 5000, segment=97)
    b = kfree_flags(f, 2, 5000)
    assert (a == b).all()


def test_parallel_matches_serial():
    f = Binomial(3, 2)
    assert (kfree_flags(f, 2, 50000, workers=3, segment=7001) == kfree_flags(f, 2, 50000)).all()


def test_prime_args_match_oracle():
    f = Binomial(3, 2)
    assert count_kfree_prime_args(f, 2, 1000).count == naive_kfree_count(3, 2, 2, 1000, primes_only=True)


def test_count_monotone_in_x():
    f = Binomial(2, 1)
    counts = [count_kfree_values(f, 2, x, trunc=1000).count for x in range(1, 400, 13)]
    assert counts == sorted(counts)


def test_count_in_class_examples():
    f = Binomial(2, 1)
    assert count_in_class(f, 2, 5, 100) == 8
    assert count_in_class(f, 2, 3, 100) == 0
    assert count_in_class(f, 2, 1, 100) == 100


def test_count_in_class_matches_enumeration():
    for f in (Binomial(2, 1), Binomial(3, 2), Binomial(3, -2)):
        for b in range(1, 51):
            for x in (1, 37, 1000, 10**4):
                expect = sum(1 for n in range(1, x + 1) if (n**f.d + f.c) % b**2 == 0)
                assert count_in_class(f, 2, b, x) == expect


def test_prime_count_in_class():
    f = Binomial(2, 1)
    expect = sum(1 for p in sympy.primerange(2, 101) if (p * p + 1) % 25 == 0)
    assert prime_count_in_class(f, 2, 5, 100) == expect
    assert prime_count_in_class(f, 2, 1, 100) == 25
    # roots of x^3 + 4 mod 4 are 0 and 2: only the prime 2 itself can land there
    g = Binomial(3, 4)
    assert brute_roots(3, 4, 4) == (0, 2)
    assert prime_count_in_class(g, 2, 2, 1000) == 1
    assert prime_count_in_class(g, 2, 2, 1) == 0


def test_mobius_terms_cover_all_squarefree_moduli():
    f = Binomial(3, 2)
    x = 300
    terms = {t.b: t for t in mobius_terms(f, 2, x)}
    top = math.isqrt(x**3 + 2)
    for b in range(1, top + 1):
        mu = sympy.mobius(b)
        if mu == 0:
            continue
        n_bx = sum(1 for n in range(1, x + 1) if (n**3 + 2) % (b * b) == 0)
        if n_bx:
            assert terms[b].count == n_bx and terms[b].mu == mu
        else:
            assert b not in terms or terms[b].count == 0


@pytest.mark.parametrize("d,c,k,x", [(3, 2, 2, 10**3), (2, 1, 2, 10**3), (2, 1, 3, 10**3), (3, 2, 2, 1), (5, 3, 2, 500)])
def test_identity_exact(d, c, k, x):
    rep = sieve_identity_check(Binomial(d, c), k, x)
    assert rep.exact_total == rep.direct_count
    if x == 1:
        assert rep.direct_count == int(kfree_by_factoring(1 + c, k))


def test_decomposition_full_range():
    f = Binomial(2, 1)
    rep = decomposition_report(f, 2, 2000, xi=2000, trunc=1000)
    assert rep.range2_sum == rep.range3_sum == 0
    assert rep.range1_sum == rep.direct_count


def test_decomposition_x2_plus_1():
    rep = decomposition_report(Binomial(2, 1), 2, 10**4, xi=100, trunc=10**4)
    assert rep.matches
    assert rep.range1_sum + rep.range2_sum + rep.range3_sum == rep.exact_total
    assert rep.range2_bound >= abs(rep.range2_sum)
    assert rep.residual_ratio >= 0 and rep.middle_ratio >= 0


def test_range3_count_against_factorization():
    f = Binomial(3, 2)
    x = 10**4
    rep = decomposition_report(f, 2, x, trunc=1000)
    eta = Fraction(1, 10)

    def far(n):
        # product of primes whose square divides f(n): the largest squarefree b with b^2 | f(n)
        b = math.prod(p for p, e in sympy.factorint(n**3 + 2).items() if e >= 2)
        return b**10 > x**9  # b > x^(1 - eta)

    assert eta == rep.eta
    assert rep.range3_count == sum(1 for n in range(1, x + 1) if far(n))


def test_decomposition_argument_checks():
    with pytest.raises(DomainError):
        decomposition_report(Binomial(2, 1), 2, 100, xi=0)
    with pytest.raises(DomainError):
        decomposition_report(Binomial(2, 1), 2, 0)
