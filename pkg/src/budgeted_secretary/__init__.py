"""Online selection across incomparable groups under a comparison budget.

Candidates from K groups arrive in uniformly random order; within-group
comparisons are free while cross-group information costs one unit of a
fixed budget B.  The package provides an exact trial simulator, the
dynamic-threshold policy family, closed-form and quadrature-based
asymptotic success probabilities, the exact optimal memory-less dynamic
program for two groups, an exhaustive small-instance oracle, and a Monte
Carlo harness, all behind one CLI.
"""

from .core import (COMPARE, SKIP, STOP, ArrivalSequence, ComparisonModel,
                   Observation, ProblemSpec, SimState, TrialOutcome, observe,
                   query_overall, run_policy, sample_arrival)
from .policies import (DtThresholds, Policy, double_threshold, dt_policy,
                       estimate_proportions, group_filter_baseline,
                       pairwise_cost_adapter, single_threshold)

__all__ = [
    "ArrivalSequence", "ComparisonModel", "Observation", "ProblemSpec",
    "SimState", "TrialOutcome", "observe", "query_overall", "run_policy",
    "sample_arrival", "SKIP", "STOP", "COMPARE",
    "DtThresholds", "Policy", "dt_policy", "single_threshold",
    "double_threshold", "group_filter_baseline", "pairwise_cost_adapter",
    "estimate_proportions",
]
