from fractions import Fraction

import pytest

from powerfree.detmethod import choose_kappa
from powerfree.errors import DomainError, UnsupportedRange
from powerfree.exponents import (
    Q_t,
    admissible,
    equivalent_threshold_check,
    history_table,
    nair_first_d_minus_2,
    profile,
    q_t,
    rho_at_top,
    rho_t,
    t_grid,
)

RANGE = [(d, k) for d in range(3, 61) for k in range(d // 2 + 1, d)]


def test_rho_examples():
    assert rho_t(3, 2, 1) == Fraction(3, 4)
    assert rho_at_top(Fraction(5, 9)) == Fraction(196, 225)
    assert rho_t(9, 5, Fraction(9, 5)) == Fraction(196, 225)


def test_q_and_Q_examples():
    assert q_t(3, 2, Fraction(3, 2)) == Fraction(1, 48)
    assert Q_t(3, 2, 1) == Fraction(-1, 24)


def test_closed_forms_exact():
    for d, k in RANGE:
        j, v = d - k, Fraction(k, d)
        top = Fraction(d, k)
        assert rho_t(d, k, 1) == 9 * (1 - v) / 4
        assert rho_t(d, k, top) == (1 + v) * (1 - v * v) / (4 * v * v)
        assert q_t(d, k, top) == Fraction(j**3, 4 * d * k * k)
        assert Q_t(d, k, 1) == Fraction(9 * j, 4 * d) * (1 - Fraction(1, 2 * d)) - (1 - Fraction(1, d))


def test_q_and_Q_decreasing():
    for d, k in RANGE[::7]:
        grid = t_grid(d, k, 30)
        qs = [q_t(d, k, t) for t in grid]
        Qs = [Q_t(d, k, t) for t in grid]
        assert all(a >= b for a, b in zip(qs, qs[1:]))
        assert all(a > b for a, b in zip(Qs, Qs[1:]))


def test_rho_top_decreasing_in_v():
    vs = [Fraction(5, 9) + Fraction(i, 200) * Fraction(4, 9) for i in range(1, 200)]
    vals = [rho_at_top(v) for v in vs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_admissible_examples():
    assert admissible(6, 4).admissible
    assert admissible(3, 2).admissible
    assert not admissible(5, 3).admissible
    with pytest.raises(UnsupportedRange):
        admissible(6, 3)
    with pytest.raises(DomainError):
        admissible(3, 3)


def test_admissible_certificate_consistent():
    for d, k in RANGE:
        a = admissible(d, k)
        assert a.certificate_consistent, (d, k)
        # the supremum sits at an endpoint
        assert a.sup_rho == max(a.rho_endpoints) and a.sup_Q == max(a.Q_endpoints)


def test_grid_has_endpoints_and_interior():
    g = t_grid(7, 4)
    assert g[0] == 1 and g[-1] == Fraction(7, 4) and len(g) == 52


def test_equivalent_thresholds():
    assert equivalent_threshold_check(3).k_threshold == Fraction(29, 15)
    assert min(equivalent_threshold_check(3).by_9k) == 2
    assert equivalent_threshold_check(6).k_threshold == Fraction(354, 99)
    assert min(equivalent_threshold_check(6).by_9k) == 4
    for d in range(3, 61):
        assert equivalent_threshold_check(d).coincide, d


def test_history_table():
    h = history_table(40)
    assert h.first_d_minus_2["this_5d+3"] == 6
    assert h.first_d_minus_2["hb_3d+2"] == 10
    assert h.first_d_minus_2["salberger_3d+1"] == 9
    assert h.first_d_minus_2["nair"] == 24 == nair_first_d_minus_2()
    assert h.first_d_minus_2["ricci"] is None and h.first_d_minus_2["erdos"] is None
    for row in h.rows:
        d = row["d"]
        kmin = row["this_5d+3"]
        assert 9 * kmin >= 5 * d + 3 and 9 * (kmin - 1) < 5 * d + 3
        assert row["erdos"] == d - 1 and row["ricci"] == d
        # Nair's bound by exact squaring
        k = row["nair"]
        assert (2 * k + d) ** 2 >= 8 * d * d and (2 * k - 2 + d) ** 2 < 8 * d * d


def test_profile_and_kappa_cross_check():
    p = profile(7, 4, Fraction(3, 2), eta=Fraction(1, 100))
    assert p.j == 3 and p.v == Fraction(4, 7)
    assert p.kappa == choose_kappa(7, 4, Fraction(3, 2), Fraction(1, 100))
    assert p.q_t == p.rho_t + 1 - p.t
    with pytest.raises(DomainError):
        profile(7, 4, 2)


def test_domain_errors():
    with pytest.raises(DomainError):
        rho_t(3, 3, 1)
    with pytest.raises(DomainError):
        equivalent_threshold_check(2)
    with pytest.raises(DomainError):
        history_table(2)
