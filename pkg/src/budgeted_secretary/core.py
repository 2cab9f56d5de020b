"""Discrete-event model of budgeted online selection over incomparable groups.

Candidates are identified purely by global rank (1 = best); actual values
never enter the process.  At each step a policy observes the candidate's
group and whether it is a record within that group.  Whether it is a record
among *all* candidates seen so far is only revealed by a paid comparison,
charged against a fixed budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import IllegalAction, QueryWithoutBudget

SKIP = "skip"
STOP = "stop"
COMPARE = "compare"

# Below this instance size run_policy uses a fused pure-python loop; above it,
# vectorized observation signals plus an event walk.  Equivalence of the two
# paths is asserted by tests.
_SMALL_N = 64


class ComparisonModel(Enum):
    """How paid comparisons are charged.

    IS_BEST_OVERALL: one budget unit buys the answer to "is the current
    candidate the best seen so far across all groups?".

    PAIRWISE: one unit buys a single cross-group pairwise comparison; the
    first overall-record query therefore costs K-1 units and each later one
    costs 1 (the best-so-far candidate can be tracked afterwards).  For two
    groups the models coincide.
    """

    IS_BEST_OVERALL = "is_best_overall"
    PAIRWISE = "pairwise"


@dataclass(frozen=True)
class ProblemSpec:
    """Instance parameters: size, group distribution, and comparison budget."""

    n_candidates: int
    n_groups: int
    group_probs: tuple
    budget: int
    comparison_model: ComparisonModel = ComparisonModel.IS_BEST_OVERALL

    def __post_init__(self):
        object.__setattr__(self, "group_probs",
                           tuple(float(p) for p in self.group_probs))
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")
        if self.n_groups < 1:
            raise ValueError("n_groups must be >= 1")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if len(self.group_probs) != self.n_groups:
            raise ValueError("group_probs length must equal n_groups")
        if any(p <= 0.0 for p in self.group_probs):
            raise ValueError("group probabilities must be strictly positive")
        if abs(sum(self.group_probs) - 1.0) > 1e-12:
            raise ValueError("group probabilities must sum to 1")


@dataclass
class ArrivalSequence:
    """One realized arrival order.

    global_ranks[t-1] is the rank of the candidate arriving at step t
    (1 = best of all N); groups[t-1] is its group label in 1..K.  Treat as
    immutable after construction.  Any integer sequence type is accepted;
    sampling returns numpy arrays.
    """

    global_ranks: object
    groups: object

    def validate(self, spec: ProblemSpec) -> None:
        ranks = list(self.global_ranks)
        if sorted(ranks) != list(range(1, spec.n_candidates + 1)):
            raise ValueError("global_ranks is not a permutation of 1..N")
        if any(not 1 <= g <= spec.n_groups for g in self.groups):
            raise ValueError("group label outside 1..K")


@dataclass(slots=True)
class Observation:
    """Free signals at one step: group label and in-group-record indicator."""

    step: int
    group: int
    is_group_best: bool


@dataclass(slots=True)
class SimState:
    """Simulator state visible to a policy at the start of a step.

    group_counts[k-1] is the number of group-k candidates among the first
    t-1 arrivals.  best_group (the group holding the current overall best)
    is kept by the simulator for diagnostics only and is never populated in
    states handed to policies; policies learn about the overall order only
    through paid queries.  During run_policy the same state object is reused
    across steps, so policies must not retain references to it.
    """

    step: int
    budget_left: int
    group_counts: object
    best_group: int | None = None


class TrialOutcome(NamedTuple):
    """Result of one simulated run."""

    success: bool
    stop_time: int | None
    first_compare_time: int | None
    comparisons_used: int


def sample_arrival(spec: ProblemSpec, seed) -> ArrivalSequence:
    """Draw a uniformly random arrival order with i.i.d. group labels.

    Deterministic for a fixed seed.  ``seed`` may be an int, a tuple such as
    (base_seed, trial_index), or a numpy SeedSequence; tuples give
    collision-free derived streams for batched estimation.
    """
    rng = np.random.default_rng(seed)
    ranks = rng.permutation(spec.n_candidates) + 1
    if spec.n_groups == 1:
        groups = np.ones(spec.n_candidates, dtype=np.int64)
    elif spec.n_groups == 2:
        groups = (rng.random(spec.n_candidates) >= spec.group_probs[0]) + np.int64(1)
    else:
        cum = np.cumsum(spec.group_probs)
        cum[-1] = 1.0
        groups = np.searchsorted(cum, rng.random(spec.n_candidates),
                                 side="right").astype(np.int64) + 1
    return ArrivalSequence(global_ranks=ranks, groups=groups)


def observe(seq: ArrivalSequence, state: SimState) -> Observation:
    """Free observation at the current step.

    is_group_best is true iff the current candidate outranks every earlier
    candidate of the same group (always true at the group's first arrival).
    """
    t = state.step
    g = int(seq.groups[t - 1])
    r = int(seq.global_ranks[t - 1])
    best = True
    for s in range(t - 1):
        if seq.groups[s] == g and seq.global_ranks[s] < r:
            best = False
            break
    return Observation(step=t, group=g, is_group_best=best)


def query_overall(seq: ArrivalSequence, state: SimState) -> bool:
    """Paid signal: is the current candidate the best seen so far overall?

    Budget accounting is owned by run_policy; this only checks that budget
    remains and answers truthfully regardless of why the caller asked.
    """
    if state.budget_left <= 0:
        raise QueryWithoutBudget("overall-record query with zero budget left")
    t = state.step
    r = seq.global_ranks[t - 1]
    for s in range(t - 1):
        if seq.global_ranks[s] < r:
            return False
    return True


def _compare_cost(spec: ProblemSpec, any_compare_done: bool) -> int:
    if spec.comparison_model is ComparisonModel.PAIRWISE and not any_compare_done:
        return spec.n_groups - 1
    return 1


def _run_small(seq, policy, spec, events_only):
    """Fused single-pass run for small instances (plain python arithmetic)."""
    ranks = seq.global_ranks
    groups = seq.groups
    if isinstance(ranks, np.ndarray):
        ranks = ranks.tolist()
    if isinstance(groups, np.ndarray):
        groups = groups.tolist()
    n = spec.n_candidates
    k_groups = spec.n_groups
    sentinel = n + 1
    counts = [0] * k_groups
    best_rank = [sentinel] * k_groups
    overall_best_rank = sentinel
    budget = spec.budget
    used = 0
    first_cmp = None
    stop_t = None
    pairwise = spec.comparison_model is ComparisonModel.PAIRWISE
    first_cost = k_groups - 1 if pairwise else 1
    state = SimState(step=1, budget_left=budget, group_counts=counts)
    obs = Observation(step=1, group=1, is_group_best=True)
    decide = policy.decide
    for i in range(n):
        gi = groups[i] - 1
        r = ranks[i]
        is_gb = r < best_rank[gi]
        if is_gb or not events_only:
            t = i + 1
            state.step = t
            state.budget_left = budget
            obs.step = t
            obs.group = gi + 1
            obs.is_group_best = is_gb
            action = decide(state, obs, None)
            if action == COMPARE:
                cost = first_cost if first_cmp is None else 1
                if cost > budget:
                    raise IllegalAction(
                        f"compare at t={t} needs {cost} budget, {budget} left")
                if first_cmp is None:
                    first_cmp = t
                budget -= cost
                used += cost
                state.budget_left = budget
                second = decide(state, obs, r < overall_best_rank)
                if second == STOP:
                    stop_t = t
                    break
                if second != SKIP:
                    raise IllegalAction(
                        f"action {second!r} after a comparison at t={t}")
            elif action == STOP:
                stop_t = t
                break
            elif action != SKIP:
                raise IllegalAction(f"unknown action {action!r} at t={t}")
        counts[gi] += 1
        if is_gb:
            best_rank[gi] = r
            if r < overall_best_rank:
                overall_best_rank = r
    success = stop_t is not None and ranks[stop_t - 1] == 1
    return TrialOutcome(success, stop_t, first_cmp, used)


def _observation_signals(ranks, groups, n_groups):
    """Vectorized per-step signals: in-group record, overall record, counts.

    Returns (group_best, overall_best, counts) where counts[k, t] is the
    number of group-(k+1) candidates among the first t arrivals.  The last
    group's counts are derived from the others to save a pass.
    """
    n = ranks.shape[0]
    sentinel = n + 1
    group_best = np.zeros(n, dtype=bool)
    counts = np.empty((n_groups, n + 1), dtype=np.int64)
    counts[:, 0] = 0
    for k in range(n_groups):
        sel = groups == k + 1
        running = np.minimum.accumulate(np.where(sel, ranks, sentinel))
        np.logical_or(group_best, sel & (ranks == running), out=group_best)
        if k < n_groups - 1:
            np.cumsum(sel, dtype=np.int64, out=counts[k, 1:])
    counts[n_groups - 1, 1:] = np.arange(1, n + 1)
    counts[n_groups - 1, 1:] -= counts[:n_groups - 1, 1:].sum(axis=0)
    overall_best = ranks == np.minimum.accumulate(ranks)
    return group_best, overall_best, counts


def _run_large(seq, policy, spec, events_only):
    """Vectorized-signal run: python touches only the consulted steps."""
    ranks = np.asarray(seq.global_ranks)
    groups = np.asarray(seq.groups)
    n = spec.n_candidates
    group_best, overall_best, counts = _observation_signals(
        ranks, groups, spec.n_groups)
    if events_only:
        steps = np.flatnonzero(group_best) + 1
    else:
        steps = range(1, n + 1)
    budget = spec.budget
    used = 0
    first_cmp = None
    stop_t = None
    state = SimState(step=1, budget_left=budget, group_counts=())
    obs = Observation(step=1, group=1, is_group_best=True)
    decide = policy.decide
    for t in steps:
        t = int(t)
        state.step = t
        state.budget_left = budget
        state.group_counts = [int(c) for c in counts[:, t - 1]]
        obs.step = t
        obs.group = int(groups[t - 1])
        obs.is_group_best = bool(group_best[t - 1])
        action = decide(state, obs, None)
        if action == COMPARE:
            cost = _compare_cost(spec, first_cmp is not None)
            if cost > budget:
                raise IllegalAction(
                    f"compare at t={t} needs {cost} budget, {budget} left")
            if first_cmp is None:
                first_cmp = t
            budget -= cost
            used += cost
            state.budget_left = budget
            second = decide(state, obs, bool(overall_best[t - 1]))
            if second == STOP:
                stop_t = t
                break
            if second != SKIP:
                raise IllegalAction(
                    f"action {second!r} after a comparison at t={t}")
        elif action == STOP:
            stop_t = t
            break
        elif action != SKIP:
            raise IllegalAction(f"unknown action {action!r} at t={t}")
    success = stop_t is not None and int(ranks[stop_t - 1]) == 1
    return TrialOutcome(success, stop_t, first_cmp, used)


def run_policy(seq: ArrivalSequence, policy, spec: ProblemSpec) -> TrialOutcome:
    """Execute one trial of a policy on a realized arrival sequence.

    The policy is consulted with (state, observation, compare_result); it
    must return "skip", "stop", or "compare".  A "compare" answer triggers a
    second consultation carrying the query result, after which only skip or
    stop are legal.  Policies advertising ``acts_only_on_group_records`` are
    consulted only at in-group records (all other steps are implicit skips).
    Reaching the last step without stopping counts as failure.  The step of
    the first comparison is recorded whatever its outcome.
    """
    setup = getattr(policy, "setup", None)
    if setup is not None:
        setup(spec)
    events_only = getattr(policy, "acts_only_on_group_records", False)
    if spec.n_candidates <= _SMALL_N:
        return _run_small(seq, policy, spec, events_only)
    return _run_large(seq, policy, spec, events_only)
