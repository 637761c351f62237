"""Exact counts of k-free values of f(n), at integers and at primes, and the Mobius sieve.

The direct counts use a segmented sieve by division: every prime p <= y is
divided out of f(n) along the residue classes of the roots of f mod p (the
prime's multiplicity decides p^k | f(n) outright). y is chosen with
y^(k+1) > max |f(n)|, so the leftover cofactor has at most k prime factors,
all above y; it carries a k-th power iff it *is* a k-th power. Larger
cofactors (only when y hits its cap) go to full factorization.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    count_in_residue_class,
    crt_combine,
    factorize,
    iroot,
    is_kth_power,
    prime_flags,
    primes_upto,
)
from .density import constant_C, constant_Cprime
from .errors import CapacityError, DomainError
from .poly import Binomial
from .roots import MAX_PRIME, _lift, _roots_mod_prime, roots_mod

SEGMENT = 1 << 17
SIEVE_CAP = 3 * 10**6
DEFAULT_TRUNC = 10**5


def is_kfree(m: int, k: int) -> bool:
    """True iff no prime p has p^k | m."""
    if m == 0:
        raise DomainError("0 is divisible by every k-th power")
    if k < 1:
        raise DomainError("k must be positive")
    return all(e < k for e in factorize(m).values())


def _max_abs_value(f: Binomial, x: int) -> int:
    return max(abs(f(1)), abs(f(x))) if x >= 1 else 0


@dataclass
class _Sieve:
    """Per-run sieving data shared by all segments."""

    f: Binomial
    k: int
    y: int
    small: list[tuple[int, tuple[int, ...]]]
    large_p: np.ndarray
    large_r: np.ndarray

    @classmethod
    def build(cls, f: Binomial, k: int, x: int, segment: int = SEGMENT) -> "_Sieve":
        maxf = _max_abs_value(f, x)
        y = min(iroot(maxf, k + 1) + 1, SIEVE_CAP)
        small, lp, lr = [], [], []
        for p in primes_upto(y):
            p = int(p)
            roots = _roots_mod_prime(f.d, f.c, p)
            if not roots:
                continue
            if p < segment:
                small.append((p, roots))
            else:
                lp.extend([p] * len(roots))
                lr.extend(roots)
        return cls(f, k, y, small, np.array(lp, dtype=np.int64), np.array(lr, dtype=np.int64))

    def _strike(self, vals, bad, idx, pr) -> None:
        # idx: positions with p | vals (distinct); pr: the prime(s)
        k = self.k
        for _ in range(k - 1):
            if idx.size == 0:
                return
            vals[idx] //= pr
            keep = vals[idx] % pr == 0
            idx = idx[keep]
            if not np.isscalar(pr):
                pr = pr[keep]
        bad[idx] = True
        vals[idx] = 1

    def segment(self, lo: int, hi: int) -> np.ndarray:
        """Boolean k-free flags for n in [lo, hi)."""
        f, k, y = self.f, self.k, self.y
        vals = f.values(lo, hi)
        vals = np.abs(vals) if vals.dtype != object else np.array([abs(v) for v in vals], dtype=object)
        bad = np.zeros(hi - lo, dtype=bool)
        for p, roots in self.small:
            for r in roots:
                start = (r - lo) % p
                if start < hi - lo:
                    self._strike(vals, bad, np.arange(start, hi - lo, p), p)
        if self.large_p.size:
            first = lo + (self.large_r - lo) % self.large_p
            hit = first < hi
            idx = first[hit] - lo
            pr = self.large_p[hit]
            if vals.dtype == object:
                pr = pr.astype(object)
            # two large primes may divide the same f(n): strike in rounds of distinct positions
            while idx.size:
                _, pos = np.unique(idx, return_index=True)
                self._strike(vals, bad, idx[pos], pr[pos])
                rest = np.ones(idx.size, dtype=bool)
                rest[pos] = False
                idx, pr = idx[rest], pr[rest]
        ycap = y**k
        ybig = y ** (k + 1)
        for i in np.flatnonzero(~bad):
            m = int(vals[i])
            if m <= ycap:
                continue
            if m < ybig:
                if is_kth_power(m, k):
                    bad[i] = True
            elif not is_kfree(m, k):
                bad[i] = True
        return ~bad


def _run_segment(args) -> np.ndarray:
    sieve, lo, hi = args
    return sieve.segment(lo, hi)


def kfree_flags(f: Binomial, k: int, x: int, workers: int = 1, segment: int = SEGMENT) -> np.ndarray:
    """flags[n] is True iff f(n) is k-free, for 0 <= n <= x (flags[0] unused, False)."""
    if k < 2:
        raise DomainError("k must be at least 2")
    out = np.zeros(max(x, 0) + 1, dtype=bool)
    if x < 1:
        return out
    sieve = _Sieve.build(f, k, x, segment)
    bounds = [(lo, min(lo + segment, x + 1)) for lo in range(1, x + 1, segment)]
    tasks = [(sieve, lo, hi) for lo, hi in bounds]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_segment, tasks))
    else:
        parts = [_run_segment(t) for t in tasks]
    for (lo, hi), part in zip(bounds, parts):
        out[lo:hi] = part
    return out


@dataclass
class CountReport:
    x: int
    count: int
    main_term: Fraction
    residual: Fraction
    elapsed: float
    prime_count: int | None = None

    @property
    def density(self) -> Fraction:
        base = self.prime_count if self.prime_count is not None else self.x
        return Fraction(self.count, base) if base else Fraction(0)


def count_kfree_values(
    f: Binomial, k: int, x: int, trunc: int = DEFAULT_TRUNC, workers: int = 1
) -> CountReport:
    """N_{f,k}(x) = #{1 <= n <= x : f(n) k-free}, with C(f,k) x as main term."""
    t0 = time.perf_counter()
    count = int(kfree_flags(f, k, x, workers).sum())
    main = constant_C(f, k, trunc).midpoint * max(x, 0)
    return CountReport(x, count, main, count - main, time.perf_counter() - t0)


def count_kfree_prime_args(
    f: Binomial, k: int, x: int, trunc: int = DEFAULT_TRUNC, workers: int = 1
) -> CountReport:
    """N'_{f,k}(x) = #{p <= x prime : f(p) k-free}, with C'(f,k) pi(x) as main term."""
    t0 = time.perf_counter()
    flags = kfree_flags(f, k, x, workers)
    primes = prime_flags(0, x + 1) if x >= 1 else np.zeros(1, dtype=bool)
    count = int((flags & primes).sum())
    pi = int(primes.sum())
    main = constant_Cprime(f, k, trunc).midpoint * pi
    return CountReport(x, count, main, count - main, time.perf_counter() - t0, prime_count=pi)


def count_in_class(f: Binomial, k: int, b: int, x: int) -> int:
    """N(b,x) = #{n <= x : b^k | f(n)}, summing floor counts over the roots mod b^k."""
    if b < 1:
        raise DomainError("b must be positive")
    if x < 1:
        return 0
    m = b**k
    return sum(count_in_residue_class(x, r, m) for r in roots_mod(f, m).roots)


def prime_count_in_class(f: Binomial, k: int, b: int, x: int) -> int:
    """N'(b,x) = #{p <= x prime : b^k | f(p)} by enumerating primes in the root classes."""
    if b < 1:
        raise DomainError("b must be positive")
    if x < 2:
        return 0
    m = b**k
    roots = roots_mod(f, m).roots
    if not roots:
        return 0
    primes = primes_upto(x)
    if m > x:
        flags = prime_flags(0, x + 1)
        return sum(1 for r in roots if 1 <= r <= x and flags[r])
    return int(np.isin(primes % m, np.array(roots, dtype=np.int64)).sum())


# --- the Mobius side --------------------------------------------------------


@dataclass
class MobiusTerm:
    b: int
    mu: int
    count: int  # N(b, x)
    members: tuple[int, ...] | None  # the n <= x themselves, once b^k > x


def mobius_terms(f: Binomial, k: int, x: int) -> list[MobiusTerm]:
    """Every squarefree b with N(b,x) > 0, with mu(b) and N(b,x) (b = 1 included).

    Depth-first over squarefree b in increasing prime order. N(b,x) = 0
    forces N(bq,x) = 0, so empty branches are pruned. Once b^k > x each
    residue class mod b^k meets [1,x] at most once and the class is carried
    as the explicit n.
    """
    if x < 1:
        return []
    maxf = _max_abs_value(f, x)
    bmax = iroot(maxf, k)
    if bmax > MAX_PRIME:
        raise CapacityError(f"moduli up to b = {bmax} exceed the desk-scale budget")
    small: list[tuple[int, tuple[int, ...]]] = []
    large: list[tuple[int, list[int]]] = []
    for p in primes_upto(bmax):
        p = int(p)
        if not _roots_mod_prime(f.d, f.c, p):
            continue
        roots = _lift(f.d, f.c, p, k)
        if not roots:
            continue
        if p**k <= x:
            small.append((p, roots))
        else:
            hits = [r for r in roots if 1 <= r <= x]
            if hits:
                large.append((p, hits))

    out: list[MobiusTerm] = []

    def visit(b, mu, mod, residues, start, last, explicit):
        if explicit:
            out.append(MobiusTerm(b, mu, len(residues), tuple(residues)))
        else:
            cnt = sum(count_in_residue_class(x, r, mod) for r in residues)
            out.append(MobiusTerm(b, mu, cnt, None))
            if cnt == 0:
                return
        if not explicit:
            for i in range(start, len(small)):
                p, roots = small[i]
                if b * p > bmax:
                    break
                pk = p**k
                child = crt_combine(residues, mod, roots, pk)
                if mod * pk > x:
                    child = [r for r in child if 1 <= r <= x]
                    if child:
                        visit(b * p, -mu, mod * pk, child, i + 1, p, True)
                else:
                    visit(b * p, -mu, mod * pk, child, i + 1, p, False)
        rset = set(residues)
        for q, hits in large:
            if q <= last:
                continue
            if b * q > bmax:
                break
            if explicit:
                child = [n for n in hits if n in rset]
            else:
                child = [n for n in hits if n % mod in rset]
            if child:
                visit(b * q, -mu, mod * q**k, child, len(small), q, True)

    visit(1, 1, 1, [0], 0, 1, False)
    return out


@dataclass
class DecompositionReport:
    x: int
    xi: Fraction
    eta: Fraction
    range1_sum: int  # sum of mu(b) N(b,x) over b <= xi
    range2_sum: int  # signed sum over xi < b <= x^(1-eta)
    range2_bound: int  # sum of N(b,x) over the same b
    range3_sum: int  # signed sum over b > x^(1-eta)
    range3_count: int  # #{n <= x : b^k | f(n) for some squarefree b > x^(1-eta)}
    exact_total: int
    direct_count: int
    main_term: Fraction  # C(f,k) x at the enclosure midpoint
    terms: int = field(default=0, repr=False)

    @property
    def matches(self) -> bool:
        return self.exact_total == self.direct_count

    @property
    def range1_residual(self) -> Fraction:
        return self.range1_sum - self.main_term

    @property
    def residual_ratio(self) -> float:
        """|range1 - C x| / x^(3/4), an observed quantity."""
        return abs(float(self.range1_residual)) / self.x**0.75

    @property
    def middle_ratio(self) -> float:
        """range2_bound / x^(1 - eta/2), an observed quantity."""
        return self.range2_bound / self.x ** (1 - float(self.eta) / 2)


def _below_power(b: int, x: int, expo: Fraction) -> bool:
    """b <= x^expo, exactly, for rational expo >= 0."""
    return b**expo.denominator <= x**expo.numerator


def decomposition_report(
    f: Binomial,
    k: int,
    x: int,
    xi=None,
    eta=Fraction(1, 10),
    trunc: int = 10**4,
) -> DecompositionReport:
    """Split sum_b mu(b) N(b,x) into b <= xi, xi < b <= x^(1-eta) and b > x^(1-eta)."""
    if x < 1:
        raise DomainError("x must be positive")
    xi = Fraction(math.isqrt(x)) if xi is None else Fraction(xi)
    eta = Fraction(eta)
    if not 1 <= xi <= x:
        raise DomainError("need 1 <= xi <= x")
    if not 0 <= eta <= 1:
        raise DomainError("need 0 <= eta <= 1")
    r1 = r2 = r2abs = r3 = 0
    far: set[int] = set()
    terms = mobius_terms(f, k, x)
    for t in terms:
        if t.b <= xi:
            r1 += t.mu * t.count
        elif _below_power(t.b, x, 1 - eta):
            r2 += t.mu * t.count
            r2abs += t.count
        else:
            r3 += t.mu * t.count
            if t.count:
                far.update(t.members if t.members is not None else _class_members(f, k, t.b, x))
    direct = int(kfree_flags(f, k, x).sum())
    main = constant_C(f, k, trunc).midpoint * x
    return DecompositionReport(
        x, xi, eta, r1, r2, r2abs, r3, len(far), r1 + r2 + r3, direct, main, len(terms)
    )


def _class_members(f: Binomial, k: int, b: int, x: int) -> list[int]:
    m = b**k
    return [n for r in roots_mod(f, m).roots for n in range(r or m, x + 1, m)]


def sieve_identity_check(f: Binomial, k: int, x: int) -> DecompositionReport:
    """Evaluate sum_b mu(b) N(b,x) exactly and set it beside the direct count."""
    return decomposition_report(f, k, x, trunc=10**3)
