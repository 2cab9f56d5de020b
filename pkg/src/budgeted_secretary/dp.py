"""Exact optimal memory-less selection for two groups, by backward induction.

The decision state at step t is (t, remaining budget b, count m of group-1
candidates among the first t-1, group holding the best candidate so far).
The group of the best is hidden from the algorithm, so decisions compare
expected rewards marginalized over it; the value table conditions on it.
Tables are filled backward in t for each budget level in O(B N^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import COMPARE, SKIP, STOP, ProblemSpec
from .errors import DegenerateRegion, DomainError, SpecMismatch
from .policies import Policy


@dataclass
class DpTables:
    """Value and decision tables of the optimal memory-less algorithm.

    V[b, t, m, l-1] is the success probability from state (t, b, m, l) for
    t in 1..N+1 (the row t = N+1 is identically zero); delta[b, t, m, k-1]
    is True where the accept action (compare if b > 0, stop if b = 0) is
    weakly better than skipping for an in-group record of arriving group k.
    Action rewards are recomputed from V on demand rather than stored.
    """

    n: int
    budget: int
    lam: tuple
    V: np.ndarray
    delta: np.ndarray


def conditional_obs_probs(t: int, m: int, ell: int, k: int):
    """Record probabilities at state (t, m, best-in-ell) for arrival group k.

    Returns (P(in-group record), P(overall record | in-group record)).
    With c the count of prior group-k candidates: (1/t, 1) when k == ell,
    else ((c+t)/(t(c+1)), (c+1)/(c+t)).
    """
    if t < 1:
        raise DomainError("t must be >= 1")
    if not 0 <= m <= t - 1:
        raise DomainError("need 0 <= m <= t-1")
    if ell not in (1, 2) or k not in (1, 2):
        raise DomainError("group indices must be 1 or 2")
    if k == ell:
        return 1.0 / t, 1.0
    c = m if k == 1 else t - 1 - m
    return (c + t) / (t * (c + 1)), (c + 1) / (c + t)


def _state_pieces(t: int, m: int, k: int):
    """Counts after a group-k arrival at step t given m prior group-1."""
    g1t = m + (1 if k == 1 else 0)
    g2t = t - g1t
    c = m if k == 1 else t - 1 - m
    mk = m + (1 if k == 1 else 0)
    return g1t, g2t, c, mk


def action_rewards(tables: DpTables, b: int, t: int, m: int, k: int):
    """Expected rewards of stop / skip / compare at an in-group record.

    The candidate arrived in group k with m prior group-1 candidates; the
    group holding the best so far is unknown and marginalized out.  With
    G_k = c + 1 candidates of group k among the first t:

      stop:    G_k / N
      skip:    (G1/t) V[b, t+1, M, 1] + (G2/t) V[b, t+1, M, 2]
      compare: G_k / N + ((t - G_k)/t) V[b-1, t+1, M, other]

    (an unfavorable comparison can only happen when the best sits in the
    other group, which then still does).  compare is -inf when b = 0.
    """
    if not 0 <= b <= tables.budget:
        raise DomainError("budget level outside tables")
    if not 1 <= t <= tables.n:
        raise DomainError("t outside 1..N")
    if not 0 <= m <= t - 1:
        raise DomainError("need 0 <= m <= t-1")
    n = tables.n
    g1t, g2t, c, mk = _state_pieces(t, m, k)
    v_next = tables.V[b, t + 1]
    r_stop = (c + 1) / n
    r_skip = (g1t * v_next[mk, 0] + g2t * v_next[mk, 1]) / t
    if b > 0:
        other = 2 if k == 1 else 1
        r_compare = (c + 1) / n + ((t - 1 - c) / t) * tables.V[b - 1, t + 1, mk, other - 1]
    else:
        r_compare = -math.inf
    return r_stop, r_skip, r_compare


def compute_tables(n: int, budget: int, lam) -> DpTables:
    """Fill the value and decision tables by backward induction.

    ``lam`` is the group-1 probability (or the pair).  For each budget
    level b and step t the recursion below is applied jointly to all m;
    delta at (t, m, k) selects between accepting and skipping a group-k
    record using rewards marginal over the hidden best-group, after which
    the value update conditions on it:

      arrival in the best's own group l (prob lam_l):
          d/N + (1 - d/t) V[b, t+1, M_l, l]
      arrival in the other group k (prob lam_k), c prior group-k:
          d/N + (1-d)/t V[b, t+1, M_k, k]
            + (1 - 1/t)(1 - d/(c+1)) V[b, t+1, M_k, l]
            + d (1 - 1/t)/(c+1) V[b-1, t+1, M_k, l]      (b > 0 only)
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if budget < 0:
        raise DomainError("budget must be >= 0")
    if isinstance(lam, (tuple, list, np.ndarray)):
        lam_pair = (float(lam[0]), float(lam[1]))
    else:
        lam_pair = (float(lam), 1.0 - float(lam))
    if not (0.0 < lam_pair[0] < 1.0) or abs(sum(lam_pair) - 1.0) > 1e-12:
        raise DomainError("group probabilities must be in (0,1) and sum to 1")

    V = np.zeros((budget + 1, n + 2, n + 1, 2))
    delta = np.zeros((budget + 1, n + 1, n + 1, 2), dtype=bool)

    for b in range(budget + 1):
        for t in range(n, 0, -1):
            m = np.arange(t)
            v_next = V[b, t + 1]
            v_prev = V[b - 1, t + 1] if b > 0 else None

            d_float = {}
            mk_of = {}
            c_of = {}
            for k in (1, 2):
                inc = 1 if k == 1 else 0
                mk = m + inc
                c = m if k == 1 else t - 1 - m
                g1t = mk
                g2t = t - g1t
                r_skip = (g1t * v_next[mk, 0] + g2t * v_next[mk, 1]) / t
                if b > 0:
                    r_acc = (c + 1) / n + ((t - 1 - c) / t) * v_prev[mk, 2 - k]
                else:
                    r_acc = (c + 1) / n
                d = r_acc >= r_skip
                delta[b, t, :t, k - 1] = d
                d_float[k] = d.astype(float)
                mk_of[k] = mk
                c_of[k] = c

            for ell in (1, 2):
                oth = 3 - ell
                d_own = d_float[ell]
                v_own = d_own / n + (1.0 - d_own / t) * v_next[mk_of[ell], ell - 1]
                d_o = d_float[oth]
                c_o = c_of[oth]
                mk_o = mk_of[oth]
                one_less = 1.0 - 1.0 / t
                v_oth = (d_o / n
                         + (1.0 - d_o) / t * v_next[mk_o, oth - 1]
                         + one_less * (1.0 - d_o / (c_o + 1)) * v_next[mk_o, ell - 1])
                if b > 0:
                    v_oth += d_o * one_less / (c_o + 1) * v_prev[mk_o, ell - 1]
                V[b, t, :t, ell - 1] = (lam_pair[ell - 1] * v_own
                                        + lam_pair[oth - 1] * v_oth)

    return DpTables(n=n, budget=budget, lam=lam_pair, V=V, delta=delta)


def initial_success(tables: DpTables) -> float:
    """Success probability from the empty state.

    The first candidate is always a record in its group and overall; the
    step-1 decision is evaluated from the rewards at t = 1, m = 0 with the
    arriving group drawn from the group distribution, taking the
    reward-maximizing action.
    """
    b = tables.budget
    total = 0.0
    for k in (1, 2):
        r_stop, r_skip, r_compare = action_rewards(tables, b, 1, 0, k)
        accept = r_compare if b > 0 else r_stop
        total += tables.lam[k - 1] * max(accept, r_skip)
    return total


class OptimalMemorylessPolicy(Policy):
    """Online policy replaying the precomputed accept/skip decisions.

    At an in-group record in state (t, b, m, arriving group g) it accepts
    exactly where the table's decision bit is set (ties resolved toward
    accepting); accepting means compare when budget remains, stop otherwise,
    and a comparison is followed by stop iff the answer is favorable.
    """

    acts_only_on_group_records = True

    def __init__(self, tables: DpTables):
        self.tables = tables
        # nested lists index much faster than numpy scalars in the trial
        # loop; fall back to the array for large tables to bound memory
        if tables.n <= 1000:
            self._delta = tables.delta.tolist()
        else:
            self._delta = tables.delta
        self._ok_spec = None

    def setup(self, spec: ProblemSpec) -> None:
        if spec is self._ok_spec:
            return
        t = self.tables
        if (spec.n_groups != 2 or spec.n_candidates != t.n
                or spec.budget != t.budget
                or abs(spec.group_probs[0] - t.lam[0]) > 1e-12
                or abs(spec.group_probs[1] - t.lam[1]) > 1e-12):
            raise SpecMismatch("tables were computed for a different instance")
        self._ok_spec = spec

    def decide(self, state, obs, compare_result=None) -> str:
        if compare_result is not None:
            return STOP if compare_result else SKIP
        if not obs.is_group_best:
            return SKIP
        b = state.budget_left
        if self._delta[b][state.step][state.group_counts[0]][obs.group - 1]:
            return COMPARE if b > 0 else STOP
        return SKIP


def optimal_policy(tables: DpTables) -> OptimalMemorylessPolicy:
    return OptimalMemorylessPolicy(tables)


def acceptance_region(tables: DpTables, b: int, g: int) -> np.ndarray:
    """Accept/skip map over (t, m) for arriving group g at budget level b.

    Entry [t, m] is True iff accepting an in-group record weakly beats
    skipping; valid for 1 <= t <= N, 0 <= m <= t-1 (False elsewhere).
    """
    if not 0 <= b <= tables.budget:
        raise DomainError("budget level outside tables")
    if g not in (1, 2):
        raise DomainError("group must be 1 or 2")
    return tables.delta[b, :, :, g - 1].copy()


def estimate_dt_thresholds(tables: DpTables, lam: float | None = None):
    """Recover threshold-policy time fractions from the acceptance regions.

    Group counts concentrate on the line m ~ lam * t, so for each budget
    level and group the threshold is the smallest t/N from which the region
    contains the whole line (ties toward smaller t).  Returns the two
    vectors indexed by budget level (group 1, then group 2).
    """
    if lam is None:
        lam = tables.lam[0]
    n = tables.n
    t_arr = np.arange(1, n + 1)
    m_line = np.minimum((lam * t_arr).astype(np.int64), t_arr - 1)
    alpha_star = np.empty(tables.budget + 1)
    beta_star = np.empty(tables.budget + 1)
    for b in range(tables.budget + 1):
        for g, out in ((1, alpha_star), (2, beta_star)):
            accept = tables.delta[b, t_arr, m_line, g - 1]
            false_pos = np.flatnonzero(~accept)
            t_star = 1 if false_pos.size == 0 else int(false_pos[-1]) + 2
            if t_star > n:
                raise DegenerateRegion(
                    f"line never enters the region (b={b}, g={g})")
            out[b] = t_star / n
    return alpha_star, beta_star
