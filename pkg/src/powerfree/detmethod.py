"""The determinant method on a dyadic box of solutions to f(n) = a b^k.

Solutions are enumerated exactly, split into slices by the size of n/b, and
for each slice the matrix of weighted monomials n^u a^v b^w (u + jv + w = D)
is tested for rank deficiency. A deficient slice yields an auxiliary
polynomial vanishing at all of its solutions. The scaling ledger tracks the
exponent bookkeeping that decides, asymptotically, when |Delta| < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import count_in_residue_class, crt_combine
from .errors import CapacityError, DomainError
from .exact_linalg import IntMatrix, KernelVector, determinant, kernel_vector, rank
from .poly import ProblemInstance
from .roots import _lift

MAX_B = 10**6


@dataclass(frozen=True)
class DyadicBox:
    N: int
    A: int
    B: int

    def __post_init__(self):
        if min(self.N, self.A, self.B) < 1:
            raise DomainError("box parameters must be positive")

    @classmethod
    def centred(cls, inst: ProblemInstance, N: int, B: int) -> "DyadicBox":
        """Box with A = floor(N^d / B^k).

        For n in (N, 2N] and b in (B, 2B] the quotient a = f(n)/b^k ranges
        over roughly [N^d / (2B)^k, (2N)^d / B^k]. N^d/B^k sits within a
        factor 2^(j/2) of the geometric middle of that range.
        """
        return cls(N, max(1, N**inst.d // B**inst.k), B)

    def contains(self, sol: "SolutionTriple") -> bool:
        return (
            self.N < sol.n <= 2 * self.N
            and self.A < sol.a <= 2 * self.A
            and self.B < sol.b <= 2 * self.B
        )

    def a_range_consistent(self, inst: ProblemInstance, sol: "SolutionTriple") -> bool:
        """a lies between f(N)/(2B)^k and f(2N)/B^k."""
        k = inst.k
        return inst.f(self.N) <= sol.a * (2 * self.B) ** k and sol.a * self.B**k <= inst.f(2 * self.N)


@dataclass(frozen=True, order=True)
class SolutionTriple:
    n: int
    a: int
    b: int


def _spf_table(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]  # view
            block[block == 0] = p
    zero = spf == 0
    spf[zero] = np.arange(n + 1)[zero]
    return spf


def enumerate_solutions(inst: ProblemInstance, box: DyadicBox) -> list[SolutionTriple]:
    """All (n, a, b) in the box with f(n) = a b^k, found through the roots of f mod b^k."""
    f, k = inst.f, inst.k
    N, A, B = box.N, box.A, box.B
    if B > MAX_B:
        raise CapacityError(f"B = {B} above the enumeration budget {MAX_B}")
    if B**k > abs(f(2 * N)):
        return []
    spf = _spf_table(2 * B)
    out = []
    for b in range(B + 1, 2 * B + 1):
        m = b**k
        residues, mod = [0], 1
        rest = b
        while rest > 1:
            p = int(spf[rest])
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            local = _lift(f.d, f.c, p, e * k)
            residues = crt_combine(residues, mod, local, p ** (e * k))
            mod *= p ** (e * k)
            if not residues:
                break
        for r in residues:
            if count_in_residue_class(2 * N, r, m) == count_in_residue_class(N, r, m):
                continue
            n0 = N + 1 + (r - N - 1) % m
            for n in range(n0, 2 * N + 1, m):
                a, rem = divmod(f(n), m)
                assert rem == 0
                if A < a <= 2 * A:
                    out.append(SolutionTriple(n, a, b))
    out.sort()
    return out


@dataclass(frozen=True)
class MonomialBasis:
    D: int
    j: int
    exps: tuple[tuple[int, int, int], ...]

    @property
    def H(self) -> int:
        return len(self.exps)

    def row(self, n: int, a: int, b: int) -> list[int]:
        return [n**u * a**v * b**w for u, v, w in self.exps]


def monomial_basis(D: int, j: int) -> MonomialBasis:
    """All n^u a^v b^w with u + j v + w = D (weights (1, j, 1)), lexicographic order."""
    if D < 1 or j < 1:
        raise DomainError("need D >= 1 and j >= 1")
    exps = sorted(
        (u, v, D - j * v - u) for v in range(D // j + 1) for u in range(D - j * v + 1)
    )
    return MonomialBasis(D, j, tuple(exps))


def basis_size(D: int, j: int) -> int:
    return sum(D - j * v + 1 for v in range(D // j + 1))


def choose_kappa(d: int, k: int, beta, eta=0) -> Fraction:
    """kappa = (j / 4d) (1 + (d - k beta)/j + beta)^2 + eta, exactly."""
    j = d - k
    if j < 1:
        raise DomainError(f"j = d - k = {j} must be at least 1")
    if k < 1:
        raise DomainError("k must be positive")
    beta, eta = Fraction(beta), Fraction(eta)
    if beta <= 0:
        raise DomainError("beta must be positive")
    S = 1 + (d - k * beta) / j + beta
    return Fraction(j, 4 * d) * S * S + eta


@dataclass
class SliceSystem:
    m0: int
    K: int
    N: int
    B: int
    solutions: list[SolutionTriple]

    def interval(self) -> tuple[Fraction, Fraction]:
        w = Fraction(self.N, self.B * self.K)
        return self.m0 * w, (self.m0 + 1) * w

    def matrix(self, basis: MonomialBasis) -> IntMatrix:
        return IntMatrix.from_rows([basis.row(s.n, s.a, s.b) for s in self.solutions], cols=basis.H)


def slice_index(n: int, b: int, K: int, N: int, B: int) -> int:
    """The m0 with m0 N/(BK) < n/b <= (m0+1) N/(BK)."""
    return -(-(n * B * K) // (b * N)) - 1


def partition_into_slices(
    solutions: list[SolutionTriple], K: int, N: int, B: int
) -> dict[int, SliceSystem]:
    if K < 1:
        raise DomainError("K must be at least 1")
    slices: dict[int, SliceSystem] = {}
    for s in solutions:
        m0 = slice_index(s.n, s.b, K, N, B)
        slices.setdefault(m0, SliceSystem(m0, K, N, B, [])).solutions.append(s)
    if K >= 4:
        for m0 in slices:
            assert 4 * m0 >= K and m0 <= 4 * K, f"slice {m0} outside [K/4, 4K] for K={K}"
    return dict(sorted(slices.items()))


@dataclass(frozen=True)
class AuxPolynomial:
    basis: MonomialBasis
    coeffs: KernelVector

    def __call__(self, n: int, a: int, b: int) -> int:
        return sum(c * m for c, m in zip(self.coeffs.coords, self.basis.row(n, a, b)))

    def terms(self) -> list[tuple[int, tuple[int, int, int]]]:
        return [(c, e) for c, e in zip(self.coeffs.coords, self.basis.exps) if c]


def find_aux_polynomial(slc: SliceSystem, basis: MonomialBasis) -> AuxPolynomial | None:
    """A weighted-homogeneous C_I vanishing on the slice, or None when the matrix has rank H."""
    vec = kernel_vector(slc.matrix(basis))
    if vec is None:
        return None
    poly = AuxPolynomial(basis, vec)
    for s in slc.solutions:
        if poly(s.n, s.a, s.b) != 0:
            raise AssertionError(f"auxiliary polynomial does not vanish at {s}")
    return poly


@dataclass
class ScalingLedger:
    beta: Fraction
    kappa: Fraction
    D: int
    H: int
    log_P_exact: Fraction  # coefficient of log N in log P, summed over the basis
    log_P_leading: Fraction  # (D^3 / 6j) (1 + (d - k beta)/j + beta)
    lambda0: float  # sqrt(2 kappa d H)
    lambda0_exact: Fraction  # H-th smallest exponent kappa u + d v
    mu_leading: float  # (2^(3/2)/3) (kappa d)^(1/2) H^(3/2)
    mu_exact: Fraction  # sum of the H smallest exponents
    rank_term: Fraction  # (1/6j)(1 + (d - k beta)/j + beta)
    decay_term_sq: Fraction  # square of (2^(3/2)/3)(kappa d)^(1/2)(2j)^(-3/2)
    delta_exponent: float
    delta_sign: int  # exact sign of rank_term - decay_term

    @property
    def log_P_gap(self) -> Fraction:
        return abs(self.log_P_exact - self.log_P_leading) / self.log_P_leading


def _norm_exponents(kappa: Fraction, d: int, H: int) -> list[Fraction]:
    """The H smallest values of kappa u + d v over u, v >= 0, ascending."""
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    # v = 0 alone supplies H values up to kappa (H - 1), so nothing larger is needed
    cap = kappa * (H - 1)
    vals = []
    v = 0
    while d * v <= cap:
        umax = math.floor((cap - d * v) / kappa)
        vals.extend(kappa * u + d * v for u in range(umax + 1))
        v += 1
    vals.sort()
    return vals[:H]


def scaling_ledger(
    inst: ProblemInstance, box: DyadicBox | None, D: int, kappa=None, eta=0, beta=None
) -> ScalingLedger:
    """Exponent bookkeeping for log|Delta| / log N at weighted degree D."""
    d, k, j = inst.d, inst.k, inst.j
    if beta is None:
        if box is None:
            raise DomainError("need a box or an explicit beta")
        beta = Fraction(math.log(box.B) / math.log(box.N)).limit_denominator(10**9)
    beta = Fraction(beta)
    kappa = choose_kappa(d, k, beta, eta) if kappa is None else Fraction(kappa)
    basis = monomial_basis(D, j)
    H = basis.H
    a_weight = d - k * beta
    log_p = sum(u + v * a_weight + w * beta for u, v, w in basis.exps)
    S = 1 + a_weight / j + beta
    leading = Fraction(D**3, 6 * j) * S
    rank_term = S / (6 * j)
    decay_sq = kappa * d / (9 * j**3)
    diff = rank_term * rank_term - decay_sq
    sign = (diff > 0) - (diff < 0)
    decay = math.sqrt(decay_sq)
    exps = _norm_exponents(kappa, d, H)
    return ScalingLedger(
        beta=beta,
        kappa=kappa,
        D=D,
        H=H,
        log_P_exact=log_p,
        log_P_leading=leading,
        lambda0=math.sqrt(2 * float(kappa) * d * H),
        lambda0_exact=exps[-1],
        mu_leading=2**1.5 / 3 * math.sqrt(float(kappa) * d) * H**1.5,
        mu_exact=sum(exps, Fraction(0)),
        rank_term=rank_term,
        decay_term_sq=decay_sq,
        delta_exponent=float(rank_term) - decay,
        delta_sign=sign,
    )


@dataclass
class SliceReport:
    m0: int
    R: int
    H: int
    rank: int
    deficient: bool
    verified: bool
    poly: AuxPolynomial | None = field(default=None, repr=False)
    minor_det: int | None = None  # first H x H minor, when R >= H


@dataclass
class SurveyReport:
    inst: ProblemInstance
    box: DyadicBox
    D: int
    eta: Fraction
    beta: Fraction
    kappa: Fraction
    K: int
    solutions: list[SolutionTriple]
    slices: list[SliceReport]

    @property
    def all_deficient(self) -> bool:
        return all(s.deficient for s in self.slices)

    @property
    def all_verified(self) -> bool:
        return all(s.verified for s in self.slices)


def slice_count_parameter(N: int, kappa: Fraction) -> int:
    """K = floor(N^kappa)."""
    K = math.floor(N ** float(kappa))
    return max(K, 1)


def rank_deficiency_survey(
    inst: ProblemInstance, box: DyadicBox, D: int = 4, eta=Fraction(1, 20), K: int | None = None
) -> SurveyReport:
    """Per occupied slice: R, rank, H, deficiency, and a verified C_I when deficient."""
    eta = Fraction(eta)
    beta = Fraction(math.log(box.B) / math.log(box.N)).limit_denominator(10**9)
    kappa = choose_kappa(inst.d, inst.k, beta, eta)
    if K is None:
        K = slice_count_parameter(box.N, kappa)
    basis = monomial_basis(D, inst.j)
    sols = enumerate_solutions(inst, box)
    reports = []
    for m0, slc in partition_into_slices(sols, K, box.N, box.B).items():
        mat = slc.matrix(basis)
        r = rank(mat)
        poly = find_aux_polynomial(slc, basis) if r < basis.H else None
        minor = None
        if mat.rows >= basis.H:
            minor = determinant(mat.submatrix(range(basis.H), range(basis.H)))
        verified = poly is not None and all(poly(s.n, s.a, s.b) == 0 for s in slc.solutions)
        reports.append(SliceReport(m0, mat.rows, basis.H, r, r < basis.H, verified, poly, minor))
    return SurveyReport(inst, box, D, eta, beta, kappa, K, sols, reports)
