"""Exhaustive exact evaluation of deterministic policies on small instances.

Every (arrival permutation, group assignment) pair is enumerated with its
probability weight, the policy is executed through the same run_policy path
used by Monte Carlo, and success weights are summed exactly.  This is the
ground truth against which simulator, policies, and the dynamic program are
checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product

from .core import ArrivalSequence, ProblemSpec, run_policy
from .errors import DomainError, InstanceTooLarge

_MAX_N = 9


@dataclass
class ExactResult:
    success_prob: float
    n_outcomes: int
    log: list | None = None


def _outcome_count(spec: ProblemSpec) -> int:
    return math.factorial(spec.n_candidates) * spec.n_groups ** spec.n_candidates


def exact_policy_success(spec: ProblemSpec, policy,
                         max_outcomes: int = 2_000_000,
                         keep_log: bool = False) -> ExactResult:
    """Exact success probability of a deterministic policy.

    Weight of an outcome is (1/N!) times the product of its group-label
    probabilities; success weights are accumulated with math.fsum, so the
    result is exact to the last few ulps.
    """
    n = spec.n_candidates
    total = _outcome_count(spec)
    if n > _MAX_N or total > max_outcomes:
        raise InstanceTooLarge(
            f"{total} outcomes exceed the enumeration cap ({max_outcomes})")
    perm_weight = 1.0 / math.factorial(n)
    probs = spec.group_probs
    seq = ArrivalSequence(global_ranks=(), groups=())
    log = [] if keep_log else None
    terms = []
    for groups in product(range(1, spec.n_groups + 1), repeat=n):
        gw = perm_weight
        for g in groups:
            gw *= probs[g - 1]
        seq.groups = groups
        for ranks in permutations(range(1, n + 1)):
            seq.global_ranks = ranks
            out = run_policy(seq, policy, spec)
            if out.success:
                terms.append(gw)
            if log is not None:
                log.append((ranks, groups, gw, out))
    return ExactResult(success_prob=math.fsum(terms), n_outcomes=total, log=log)


def exact_conditional_probs(n: int, t: int, m: int, ell: int, k: int):
    """Exact record probabilities at one decision point, by enumeration.

    Conditions on: m group-1 candidates among the first t-1 arrivals, the
    best of those t-1 lying in group ``ell``, and the step-t arrival lying
    in group ``k`` (two groups).  Returns the probability that the arrival
    is an in-group record, and the probability that it is an overall record
    given that it is an in-group record.  All t! relative orders of the
    first t candidates are enumerated with equal weight.
    """
    if t > 8:
        raise InstanceTooLarge("conditional enumeration supports t <= 8")
    if not 1 <= t <= n:
        raise DomainError("need 1 <= t <= n")
    if not 0 <= m <= t - 1:
        raise DomainError("need 0 <= m <= t-1")
    if ell not in (1, 2) or k not in (1, 2):
        raise DomainError("group indices must be 1 or 2")
    groups = [1] * m + [2] * (t - 1 - m) + [k]
    n_cond = 0
    n_record = 0
    n_overall = 0
    for order in permutations(range(1, t + 1)):
        if t > 1:
            best_pos = min(range(t - 1), key=order.__getitem__)
            if groups[best_pos] != ell:
                continue
        n_cond += 1
        r_t = order[t - 1]
        same = [order[s] for s in range(t - 1) if groups[s] == k]
        if same and min(same) < r_t:
            continue
        n_record += 1
        if r_t == 1:
            n_overall += 1
    if n_cond == 0:
        raise DomainError(
            f"state (t={t}, m={m}, ell={ell}) is unreachable")
    return n_record / n_cond, n_overall / n_record
