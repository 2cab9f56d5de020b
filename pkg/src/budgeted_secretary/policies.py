"""Threshold policy family and simple baselines.

A dynamic-threshold policy holds one time threshold per (group, remaining
budget) pair.  It skips every candidate that is not a record within its own
group, and past the active threshold it spends a comparison when budget
remains (stopping on a favorable answer) or stops outright when the budget
is exhausted.  All policies here are memory-less: decisions depend only on
the current step, remaining budget, group counts, and the current
observation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import COMPARE, SKIP, STOP, ProblemSpec
from .errors import BudgetInsufficient, DimensionError, DomainError, EmptyPrefix


class Policy:
    """Decision function from (state, observation[, compare result]) to an action.

    ``decide`` is called once per consulted step; if it returns "compare",
    it is called again with ``compare_result`` set to the query answer and
    must then return "skip" or "stop".  Policies that only ever act on
    in-group records set ``acts_only_on_group_records`` so the simulator can
    skip the other steps wholesale.
    """

    acts_only_on_group_records = False

    def setup(self, spec: ProblemSpec) -> None:
        """Per-trial hook; validates the policy against the instance."""

    def decide(self, state, obs, compare_result=None) -> str:
        raise NotImplementedError


@dataclass
class DtThresholds:
    """Threshold table alpha[k-1][b] in [0,1] for group k and remaining budget b."""

    table: np.ndarray

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=float)
        if self.table.ndim != 2:
            raise DimensionError("threshold table must be K x (B+1)")
        if np.any(self.table < 0.0) or np.any(self.table > 1.0):
            raise DomainError("thresholds must lie in [0, 1]")

    def to_json(self) -> str:
        k, bp1 = self.table.shape
        return json.dumps({"K": k, "B": bp1 - 1, "alpha": self.table.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "DtThresholds":
        data = json.loads(text)
        table = np.asarray(data["alpha"], dtype=float)
        if table.shape != (data["K"], data["B"] + 1):
            raise DimensionError("alpha matrix does not match declared K, B")
        return cls(table=table)


class DynamicThresholdPolicy(Policy):
    """Skip until floor(alpha[group, budget] * N); then act on in-group records."""

    acts_only_on_group_records = True

    def __init__(self, spec: ProblemSpec, thresholds: DtThresholds):
        table = thresholds.table
        if table.shape != (spec.n_groups, spec.budget + 1):
            raise DimensionError(
                f"threshold table {table.shape} does not match "
                f"K={spec.n_groups}, B={spec.budget}")
        self._spec = spec
        self.thresholds = thresholds
        # earliest active step per (group, remaining budget); alpha = 0 means
        # active from t = 1, alpha = 1 only at t = N.
        self._start = np.floor(table * spec.n_candidates).astype(np.int64).tolist()
        self._ok_spec = spec

    def setup(self, spec: ProblemSpec) -> None:
        if spec is self._ok_spec:
            return
        if (spec.n_candidates != self._spec.n_candidates
                or spec.n_groups != self._spec.n_groups
                or spec.budget != self._spec.budget):
            raise DimensionError("policy was built for a different instance")
        self._ok_spec = spec

    def decide(self, state, obs, compare_result=None) -> str:
        if compare_result is not None:
            return STOP if compare_result else SKIP
        if not obs.is_group_best:
            return SKIP
        b = state.budget_left
        if state.step < self._start[obs.group - 1][b]:
            return SKIP
        return COMPARE if b > 0 else STOP


def dt_policy(spec: ProblemSpec, thresholds) -> DynamicThresholdPolicy:
    """Instantiate the dynamic-threshold policy for a K x (B+1) table."""
    if not isinstance(thresholds, DtThresholds):
        thresholds = DtThresholds(table=thresholds)
    return DynamicThresholdPolicy(spec, thresholds)


def single_threshold(spec: ProblemSpec, alpha: float,
                     budget: int | None = None) -> DynamicThresholdPolicy:
    """One shared threshold across all groups and budget levels."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    if budget is None:
        budget = spec.budget
    if budget != spec.budget:
        raise DimensionError("budget does not match the instance")
    table = np.full((spec.n_groups, budget + 1), alpha)
    return dt_policy(spec, table)


def double_threshold(spec: ProblemSpec, alpha: float, beta: float,
                     budget: int | None = None) -> DynamicThresholdPolicy:
    """Two-group policy: threshold alpha for group 1, beta for group 2."""
    if spec.n_groups != 2:
        raise DimensionError("double_threshold requires exactly two groups")
    if not 0.0 < alpha <= beta <= 1.0:
        raise DomainError("need 0 < alpha <= beta <= 1")
    if budget is None:
        budget = spec.budget
    if budget != spec.budget:
        raise DimensionError("budget does not match the instance")
    table = np.empty((2, budget + 1))
    table[0, :] = alpha
    table[1, :] = beta
    return dt_policy(spec, table)


class GroupFilterPolicy(Policy):
    """Ignore every group but one and play the classical 1/e rule inside it.

    The waiting phase is counted in seen members of the chosen group (the
    policy cannot rely on global time once it filters): the first in-group
    record at or after the ceil(lambda_k * N / e)-th member is selected.
    Never compares, so it needs no budget and achieves roughly lambda_k / e.
    """

    acts_only_on_group_records = True

    def __init__(self, spec: ProblemSpec, k: int):
        if not 1 <= k <= spec.n_groups:
            raise DimensionError(f"group index {k} outside 1..{spec.n_groups}")
        self._spec = spec
        self.group = k
        expected = spec.group_probs[k - 1] * spec.n_candidates
        self._min_member = max(1, math.ceil(expected / math.e))

    def setup(self, spec: ProblemSpec) -> None:
        if spec is not self._spec and spec.n_candidates != self._spec.n_candidates:
            raise DimensionError("policy was built for a different instance")

    def decide(self, state, obs, compare_result=None) -> str:
        if compare_result is not None:
            return SKIP
        if obs.group != self.group or not obs.is_group_best:
            return SKIP
        seen = state.group_counts[self.group - 1] + 1
        return STOP if seen >= self._min_member else SKIP


def group_filter_baseline(spec: ProblemSpec, k: int) -> GroupFilterPolicy:
    return GroupFilterPolicy(spec, k)


class PairwiseAdapter(Policy):
    """Budget gate for threshold policies under the pairwise comparison model.

    The first overall-record query costs K-1 pairwise comparisons (one
    against each other group's best); afterwards the best-so-far candidate
    is tracked and each query costs 1.  The adapter refuses the first query
    when fewer than K-1 units remain.  Cost accounting itself lives in the
    simulator, keyed on the spec's comparison model.
    """

    def __init__(self, inner: DynamicThresholdPolicy, spec: ProblemSpec):
        if not isinstance(inner, DynamicThresholdPolicy):
            raise TypeError("pairwise adapter wraps dynamic-threshold policies")
        self.inner = inner
        self._spec = spec
        self._initial_budget = spec.budget
        self._first_cost = spec.n_groups - 1
        self.acts_only_on_group_records = inner.acts_only_on_group_records

    def setup(self, spec: ProblemSpec) -> None:
        self.inner.setup(spec)

    def decide(self, state, obs, compare_result=None) -> str:
        action = self.inner.decide(state, obs, compare_result)
        if compare_result is None and action == COMPARE:
            first = state.budget_left == self._initial_budget
            cost = self._first_cost if first else 1
            if cost > state.budget_left:
                raise BudgetInsufficient(
                    f"first overall query costs {cost}, "
                    f"budget left {state.budget_left}")
        return action


def pairwise_cost_adapter(policy: DynamicThresholdPolicy,
                          spec: ProblemSpec) -> Policy:
    """Wrap a threshold policy for specs using the pairwise comparison model.

    For K = 2 the adapter changes nothing (every query costs 1 in both
    models).
    """
    return PairwiseAdapter(policy, spec)


def estimate_proportions(prefix_groups, n_groups: int):
    """Empirical group frequencies over an observation prefix.

    The prefix is the first floor(eps * N) labels of a run; its length
    already encodes the sampling fraction.
    """
    labels = list(prefix_groups)
    if not labels:
        raise EmptyPrefix("cannot estimate proportions from an empty prefix")
    counts = [0] * n_groups
    for g in labels:
        counts[g - 1] += 1
    total = len(labels)
    return [c / total for c in counts]
