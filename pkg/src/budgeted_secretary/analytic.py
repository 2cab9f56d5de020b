"""Asymptotic success probabilities and threshold optimizers.

Closed forms cover the shared-threshold policy for any number of groups;
the two-group unequal-threshold policy needs a recursion in the budget
whose integral step is evaluated by composite trapezoid quadrature on a
uniform grid (the kernels are smooth on [alpha, beta] whenever alpha > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

INV_E = math.exp(-1.0)


def s_sum(w: float, budget: int) -> float:
    """Budget-truncated exponential remainder sum S(w, B).

    S(w, B) = sum_{b=0..B} (1/w - sum_{l=0..b} log(1/w)^l / l!).  It is
    nondecreasing in B and converges to log(1/w)/w.  Partial factorial sums
    are accumulated iteratively, never through explicit factorials.
    """
    if not 0.0 < w <= 1.0:
        raise DomainError("w must lie in (0, 1]")
    if budget < 0:
        raise DomainError("budget must be >= 0")
    x = -math.log(w)
    inv_w = 1.0 / w
    term = 1.0
    partial = 1.0
    total = inv_w - partial
    for b in range(1, budget + 1):
        term *= x / b
        partial += term
        total += inv_w - partial
    return total


def _s_sum_vec(w: np.ndarray, budget: int) -> np.ndarray:
    x = -np.log(w)
    inv_w = 1.0 / w
    term = np.ones_like(w)
    partial = np.ones_like(w)
    total = inv_w - partial
    for b in range(1, budget + 1):
        term = term * x / b
        partial = partial + term
        total = total + inv_w - partial
    return total


def single_threshold_limit(n_groups: int, alpha: float, budget: int) -> float:
    """Asymptotic success probability of the shared-threshold policy.

    Equals (alpha^K / (K-1)) * S(alpha^(K-1), B); evaluated in the
    numerically safe form alpha/(K-1) * sum_b (1 - PoissonCDF(b; x)) with
    x = (K-1) log(1/alpha), which avoids over/underflow of alpha^(K-1).
    Independent of the group proportions.  For a single group the budget is
    irrelevant and the classical value alpha log(1/alpha) is returned.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    if budget < 0:
        raise DomainError("budget must be >= 0")
    if n_groups < 1:
        raise DomainError("n_groups must be >= 1")
    if n_groups == 1:
        return alpha * math.log(1.0 / alpha) if alpha < 1.0 else 0.0
    x = (n_groups - 1) * math.log(1.0 / alpha)
    emx = math.exp(-x)
    term = emx
    cdf = emx
    total = 1.0 - cdf
    for b in range(1, budget + 1):
        term *= x / b
        cdf += term
        total += 1.0 - cdf
    return alpha * total / (n_groups - 1)


def single_threshold_bound(n_groups: int, budget: int) -> float:
    """Lower bound (1/e)(1 - (K-1)^(B+1)/(B+1)!) for the 1/e threshold.

    May be negative (vacuous) for many groups and a small budget.
    """
    if n_groups < 2:
        raise DomainError("bound defined for n_groups >= 2")
    if budget < 0:
        raise DomainError("budget must be >= 0")
    num = (n_groups - 1) ** (budget + 1)
    return INV_E * (1.0 - num / math.factorial(budget + 1))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-11):
    """Golden-section maximizer on [lo, hi] for a unimodal function."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def optimal_single_alpha(n_groups: int, budget: int, n_grid: int = 1000):
    """Maximize the shared-threshold limit over alpha in (0, 1].

    Dense-grid scan refined by golden section around the best cell; the
    returned value is never below the grid maximum.  The single-group case
    is the classical e-th fraction rule, returned analytically.
    """
    if n_groups == 1:
        return INV_E, INV_E

    def f(a):
        return single_threshold_limit(n_groups, a, budget)

    grid = np.linspace(1.0 / n_grid, 1.0, n_grid)
    vals = [f(a) for a in grid]
    i = int(np.argmax(vals))
    lo = grid[max(0, i - 1)]
    hi = grid[min(n_grid - 1, i + 1)]
    x, fx = _golden_max(f, float(lo), float(hi))
    if fx >= vals[i]:
        return x, fx
    return float(grid[i]), vals[i]


@dataclass(frozen=True)
class ThresholdPair:
    """Two-group time thresholds, 0 < alpha <= beta <= 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= self.beta <= 1.0:
            raise DomainError("need 0 < alpha <= beta <= 1")


@dataclass
class PhiGrid:
    """Discretized success curves for the two-group unequal-threshold policy.

    grid holds M+1 equally spaced nodes on [alpha, beta]; values2[b][i] is
    the asymptotic probability of success with the current overall best in
    group 2 when play starts at time fraction grid[i] with budget b, and
    values1 the same with the best in group 1.  The boundary column at
    w = beta equals the closed form lambda_k * beta^2 * S(beta, b).
    """

    alpha: float
    beta: float
    lam: float
    grid: np.ndarray
    values2: np.ndarray
    values1: np.ndarray


def _check_two_group_args(alpha, beta, lam):
    if not 0.0 < alpha <= beta <= 1.0:
        raise DomainError("need 0 < alpha <= beta <= 1")
    if not 0.0 < lam < 1.0:
        raise DomainError("lam must lie in (0, 1)")


def phi_grid(alpha: float, beta: float, lam: float, budget: int,
             grid_size: int = 512) -> PhiGrid:
    """Evaluate the budget recursion for the two-group success curves.

    Level 0 is closed-form; each higher budget level adds an integral of
    the previous level-2 curve, evaluated by composite trapezoid on the
    shared grid (row i integrates from grid[i] to beta).  The kernel
    matrices do not depend on the budget level and are built once.
    """
    _check_two_group_args(alpha, beta, lam)
    if budget < 0:
        raise DomainError("budget must be >= 0")
    if grid_size < 64:
        raise DomainError("grid_size must be >= 64")
    m = grid_size
    w = np.linspace(alpha, beta, m + 1)
    h = (beta - alpha) / m
    mu = 1.0 - lam

    sb = np.empty(budget + 1)
    for b in range(budget + 1):
        sb[b] = s_sum(beta, b)

    base2 = -lam * w * np.log(mu * w / beta + lam)
    coef2 = mu * beta * w * w / (mu * w + lam * beta)
    base1 = lam * w * np.log(mu + lam * beta / w)
    coef1 = lam * w * beta * beta / (mu * w + lam * beta)

    values2 = np.empty((budget + 1, m + 1))
    values1 = np.empty((budget + 1, m + 1))
    values2[0] = base2 + coef2 * sb[0]
    values1[0] = base1 + coef1 * sb[0]

    if budget > 0:
        wc = w[:, None]
        ur = w[None, :]
        denom = (mu * wc + lam * ur) ** 2
        kern2 = (mu * mu * wc + lam * (2.0 - lam) * ur) / (denom * ur * ur)
        kern1 = (ur - wc) / (denom * ur)
        trap = np.full((m + 1, m + 1), h)
        idx = np.arange(m + 1)
        trap[idx, idx] = h / 2.0
        trap[:, m] = h / 2.0
        trap = np.triu(trap)
        trap[m, m] = 0.0
        kern2 *= trap
        kern1 *= trap
        for b in range(1, budget + 1):
            prev = values2[b - 1]
            values2[b] = base2 + coef2 * sb[b] + w * w * (kern2 @ prev)
            values1[b] = base1 + coef1 * sb[b] + lam * lam * w * (kern1 @ prev)

    return PhiGrid(alpha=alpha, beta=beta, lam=lam, grid=w,
                   values2=values2, values1=values1)


def double_threshold_limit(alpha: float, beta: float, lam: float, budget: int,
                           grid_size: int = 512) -> float:
    """Asymptotic success probability of the two-group unequal-threshold policy.

    lam * alpha * log(beta/alpha) + alpha * beta * S(beta, B), plus for
    positive budget the trapezoid integral of the previous-level group-2
    curve against 1/u^2 over [alpha, beta].  At alpha == beta this collapses
    to the shared-threshold value alpha^2 * S(alpha, B).
    """
    _check_two_group_args(alpha, beta, lam)
    if budget < 0:
        raise DomainError("budget must be >= 0")
    value = lam * alpha * math.log(beta / alpha) + alpha * beta * s_sum(beta, budget)
    if budget > 0 and beta > alpha:
        grid = phi_grid(alpha, beta, lam, budget - 1, grid_size=grid_size)
        integrand = grid.values2[budget - 1] / (grid.grid * grid.grid)
        h = (beta - alpha) / grid_size
        integral = h * (integrand.sum() - 0.5 * (integrand[0] + integrand[-1]))
        value += alpha * integral
    return value


def _h_map(beta, sb_beta, lam):
    return np.minimum(beta / math.e * np.exp(beta * sb_beta / lam), beta)


def corollary_thresholds(lam: float, budget: int, n_grid: int = 2000):
    """Concrete two-group thresholds with a guaranteed success lower bound.

    For lam >= 1/2, picks beta maximizing
    lam*h(beta)*log(beta/h(beta)) + h(beta)*beta*S(beta, B) with
    h(beta) = min(beta/e * exp(beta*S(beta, B)/lam), beta), and alpha =
    h(beta).  Grid scan with golden-section polish, ties toward smaller
    beta.  Returns the pair and the bound
    1/e - min(1/(e (B+1)!), (4/e - 1) lam (1 - lam)).  For lam < 1/2 use
    symmetry: swap the group labels.
    """
    if not 0.5 <= lam < 1.0:
        raise DomainError("defined for lam in [0.5, 1); swap groups otherwise")
    if budget < 0:
        raise DomainError("budget must be >= 0")

    def objective(beta):
        s = s_sum(float(beta), budget)
        h = min(beta / math.e * math.exp(beta * s / lam), beta)
        return lam * h * math.log(beta / h) + h * beta * s

    betas = np.linspace(1.0 / n_grid, 1.0, n_grid)
    svals = _s_sum_vec(betas, budget)
    hvals = _h_map(betas, svals, lam)
    fvals = lam * hvals * np.log(betas / hvals) + hvals * betas * svals
    i = int(np.argmax(fvals))
    lo = float(betas[max(0, i - 1)])
    hi = float(betas[min(n_grid - 1, i + 1)])
    beta_star, f_star = _golden_max(objective, lo, hi)
    if f_star < fvals[i]:
        beta_star = float(betas[i])
    s_star = s_sum(beta_star, budget)
    alpha_star = min(beta_star / math.e * math.exp(beta_star * s_star / lam),
                     beta_star)
    bound = INV_E - min(INV_E / math.factorial(budget + 1),
                        (4.0 * INV_E - 1.0) * lam * (1.0 - lam))
    return ThresholdPair(alpha=alpha_star, beta=beta_star), bound


def sum_exp_remainder_check(x: float, budget: int):
    """Verify 0 <= x e^x - sum_{b<=B}(e^x - partial_b) <= e^x x^(B+2)/(B+1)!.

    Returns (lower_ok, upper_ok) with a relative slack of 1e-12 for float
    roundoff.  Used by property tests of the remainder sum.
    """
    if x <= 0.0:
        raise DomainError("x must be positive")
    if budget < 1:
        raise DomainError("budget must be >= 1")
    e_x = math.exp(x)
    term = 1.0
    partial = 1.0
    total = e_x - partial
    for b in range(1, budget + 1):
        term *= x / b
        partial += term
        total += e_x - partial
    gap = x * e_x - total
    upper = e_x * x ** (budget + 2) / math.factorial(budget + 1)
    tol = 1e-12 * max(1.0, x * e_x)
    return gap >= -tol, gap <= upper + tol
