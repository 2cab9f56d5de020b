import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from budgeted_secretary import analytic
from budgeted_secretary.errors import DomainError

INV_E = 1 / math.e


def test_s_sum_at_one_is_zero():
    for budget in (0, 1, 5, 50):
        assert analytic.s_sum(1.0, budget) == 0.0


def test_s_sum_small_budget_values():
    assert analytic.s_sum(INV_E, 0) == pytest.approx(math.e - 1, abs=1e-12)
    # large budgets force the limit log(1/w)/w
    assert analytic.s_sum(INV_E, 200) == pytest.approx(math.e, abs=1e-9)
    assert analytic.s_sum(0.5, 300) == pytest.approx(2 * math.log(2), abs=1e-9)


def test_s_sum_domain():
    with pytest.raises(DomainError):
        analytic.s_sum(0.0, 1)
    with pytest.raises(DomainError):
        analytic.s_sum(1.2, 1)
    with pytest.raises(DomainError):
        analytic.s_sum(0.5, -1)


@given(st.floats(0.01, 1.0), st.integers(0, 30))
@settings(max_examples=150, deadline=None)
def test_s_sum_monotone_and_bounded(w, budget):
    lo = analytic.s_sum(w, budget)
    hi = analytic.s_sum(w, budget + 1)
    assert hi >= lo - 1e-12
    assert -1e-12 <= lo <= math.log(1 / w) / w + 1e-9


def test_single_threshold_limit_values():
    # K=2, B=0, alpha=1/e: (1/e)(1 - 1/e)
    assert analytic.single_threshold_limit(2, INV_E, 0) == pytest.approx(
        INV_E * (1 - INV_E), abs=1e-12)
    # budget exhausts the gap to the classical value
    for alpha in (0.2, INV_E, 0.5, 0.8):
        assert analytic.single_threshold_limit(2, alpha, 200) == pytest.approx(
            alpha * math.log(1 / alpha), abs=1e-9)
    # alpha = 1 yields zero for any K, B
    for k in (2, 3, 7):
        assert analytic.single_threshold_limit(k, 1.0, 5) == 0.0
    # single group: classical value, budget ignored
    assert analytic.single_threshold_limit(1, INV_E, 3) == pytest.approx(
        INV_E, abs=1e-12)


def test_single_threshold_limit_equals_s_sum_form():
    for k in (2, 3, 5):
        for alpha in (0.2, 0.4, 0.7):
            for budget in (0, 1, 4):
                direct = (alpha ** k / (k - 1)) * analytic.s_sum(
                    alpha ** (k - 1), budget)
                assert analytic.single_threshold_limit(
                    k, alpha, budget) == pytest.approx(direct, abs=1e-12)


def test_single_threshold_bound_values():
    assert analytic.single_threshold_bound(2, 0) == 0.0
    assert analytic.single_threshold_bound(2, 1) == pytest.approx(
        1 / (2 * math.e), abs=1e-15)
    b3 = analytic.single_threshold_bound(2, 3)
    assert b3 == pytest.approx(INV_E * (1 - 1 / 24), abs=1e-15)
    assert analytic.single_threshold_limit(2, INV_E, 3) >= b3


def test_optimal_single_alpha():
    # large budget recovers the classical threshold
    alpha, value = analytic.optimal_single_alpha(2, 50)
    assert abs(alpha - INV_E) < 1e-3
    assert abs(value - INV_E) < 1e-6
    # single group is analytic
    assert analytic.optimal_single_alpha(1, 7) == (INV_E, INV_E)
    # matches an exhaustive dense grid at K=10, B=0
    grid = np.linspace(1e-4, 1.0, 4000)
    vals = [analytic.single_threshold_limit(10, float(a), 0) for a in grid]
    best = int(np.argmax(vals))
    alpha10, value10 = analytic.optimal_single_alpha(10, 0)
    assert abs(alpha10 - grid[best]) <= grid[1] - grid[0] + 1e-9
    assert value10 >= vals[best] - 1e-10


def test_phi_grid_boundary_and_shape():
    lam, beta = 0.6, 0.6
    g = analytic.phi_grid(0.3, beta, lam, 2, grid_size=256)
    for b in range(3):
        assert g.values2[b][-1] == pytest.approx(
            (1 - lam) * beta * beta * analytic.s_sum(beta, b), abs=1e-12)
        assert g.values1[b][-1] == pytest.approx(
            lam * beta * beta * analytic.s_sum(beta, b), abs=1e-12)
    assert g.values2.shape == (3, 257) and g.values1.shape == (3, 257)
    assert (g.values2 >= 0).all() and (g.values2 <= 1).all()
    assert (g.values1 >= 0).all() and (g.values1 <= 1).all()


def test_phi_grid_zero_budget_closed_form():
    lam, alpha, beta = 0.45, 0.25, 0.7
    g = analytic.phi_grid(alpha, beta, lam, 0, grid_size=128)
    w = g.grid
    s0 = analytic.s_sum(beta, 0)
    expected = (-lam * w * np.log((1 - lam) * w / beta + lam)
                + (1 - lam) * beta * w * w * s0 / ((1 - lam) * w + lam * beta))
    assert np.allclose(g.values2[0], expected, atol=1e-14)


def test_phi_grid_quadrature_convergence():
    a = analytic.phi_grid(0.3, 0.6, 0.6, 2, grid_size=512)
    b = analytic.phi_grid(0.3, 0.6, 0.6, 2, grid_size=1024)
    assert abs(a.values2[2][0] - b.values2[2][0]) < 1e-6


def test_phi_grid_domain():
    with pytest.raises(DomainError):
        analytic.phi_grid(0.7, 0.3, 0.5, 1)
    with pytest.raises(DomainError):
        analytic.phi_grid(0.3, 0.7, 1.2, 1)
    with pytest.raises(DomainError):
        analytic.phi_grid(0.3, 0.7, 0.5, 1, grid_size=8)


def test_double_threshold_limit_matches_single_at_equal_thresholds():
    worst = 0.0
    for alpha in np.linspace(0.1, 1.0, 10):
        for lam in (0.3, 0.7):
            for budget in (0, 1, 2):
                d = abs(analytic.double_threshold_limit(float(alpha), float(alpha),
                                                        lam, budget)
                        - analytic.single_threshold_limit(2, float(alpha), budget))
                worst = max(worst, d)
    assert worst <= 1e-10


def test_double_threshold_limit_corollary_point():
    # lam = 0.5, B = 0 at thresholds (0.5, 0.5): lam^2 e^{1/lam - 2} = 1/4
    assert analytic.double_threshold_limit(0.5, 0.5, 0.5, 0) == pytest.approx(
        0.25, abs=1e-12)


def test_analytic_values_below_upper_bound():
    for alpha in np.linspace(0.05, 1.0, 12):
        for k in (2, 3, 6):
            for budget in (0, 2, 10):
                v = analytic.single_threshold_limit(k, float(alpha), budget)
                assert -1e-12 <= v <= INV_E + 1e-9
    for beta in (0.4, 0.6, 0.9):
        v = analytic.double_threshold_limit(0.3, beta, 0.6, 2)
        assert 0.0 <= v <= INV_E + 1e-9


def test_corollary_thresholds_zero_budget_formula():
    for lam in (0.5, 0.7, 0.9):
        pair, _ = analytic.corollary_thresholds(lam, 0)
        assert pair.alpha == pytest.approx(lam * math.exp(1 / lam - 2), abs=1e-6)
        assert pair.beta == pytest.approx(lam, abs=1e-6)


def test_corollary_thresholds_bound_and_domain():
    pair, bound = analytic.corollary_thresholds(0.5, 0)
    assert bound == pytest.approx(0.25, abs=1e-12)
    assert analytic.double_threshold_limit(pair.alpha, pair.beta, 0.5, 0) >= \
        bound - 1e-9
    with pytest.raises(DomainError):
        analytic.corollary_thresholds(0.4, 1)
    pair2, bound2 = analytic.corollary_thresholds(0.6, 2)
    assert analytic.double_threshold_limit(pair2.alpha, pair2.beta, 0.6, 2) >= \
        bound2 - 1e-6


def test_sum_exp_remainder_examples():
    assert analytic.sum_exp_remainder_check(1.0, 1) == (True, True)
    assert analytic.sum_exp_remainder_check(0.001, 1) == (True, True)
    assert analytic.sum_exp_remainder_check(3.0, 10) == (True, True)
    with pytest.raises(DomainError):
        analytic.sum_exp_remainder_check(-1.0, 2)
    with pytest.raises(DomainError):
        analytic.sum_exp_remainder_check(1.0, 0)


@given(st.floats(1e-3, 5.0), st.integers(1, 20))
@settings(max_examples=150, deadline=None)
def test_sum_exp_remainder_property(x, budget):
    lower_ok, upper_ok = analytic.sum_exp_remainder_check(x, budget)
    assert lower_ok and upper_ok


def test_threshold_pair_validation():
    with pytest.raises(DomainError):
        analytic.ThresholdPair(alpha=0.6, beta=0.4)
    pair = analytic.ThresholdPair(alpha=0.3, beta=0.4)
    assert pair.alpha == 0.3
