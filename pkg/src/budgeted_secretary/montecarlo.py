"""Monte Carlo estimation of policy success probabilities.

Trial i of a run uses the derived seed (base_seed, i), so any single trial
can be reproduced in isolation and partitioning trials across workers
cannot change the result.  Interval estimates use the 95% Wilson score,
which behaves correctly near rates of 0 and 1.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .core import ProblemSpec, run_policy, sample_arrival

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SuccessEstimate:
    trials: int
    successes: int
    rate: float
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(successes: int, trials: int, z: float = _Z95):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def estimate_success(spec: ProblemSpec, policy, trials: int,
                     seed: int) -> SuccessEstimate:
    """Estimate a policy's success probability over independent trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    successes = 0
    for i in range(trials):
        seq = sample_arrival(spec, (seed, i))
        if run_policy(seq, policy, spec).success:
            successes += 1
    lo, hi = wilson_interval(successes, trials)
    return SuccessEstimate(trials=trials, successes=successes,
                           rate=successes / trials, ci_low=lo, ci_high=hi,
                           seed=seed)


@dataclass
class SweepCell:
    """One grid point of a sweep: an instance, a policy, and labels."""

    spec: ProblemSpec
    policy: object
    policy_id: str
    alpha: float | None = None
    beta: float | None = None


SWEEP_COLUMNS = ("K", "B", "lambdas", "N", "policy_id", "alpha", "beta",
                 "trials", "rate", "ci_low", "ci_high", "seed")


def sweep(cells, trials: int, seed: int):
    """Estimate every cell of a grid with a shared base seed.

    All cells reuse the same per-trial seed stream, so identical cells give
    bit-identical estimates and policy comparisons benefit from common
    random numbers.
    """
    rows = []
    for cell in cells:
        est = estimate_success(cell.spec, cell.policy, trials, seed)
        rows.append({
            "K": cell.spec.n_groups,
            "B": cell.spec.budget,
            "lambdas": ";".join(repr(p) for p in cell.spec.group_probs),
            "N": cell.spec.n_candidates,
            "policy_id": cell.policy_id,
            "alpha": cell.alpha,
            "beta": cell.beta,
            "trials": est.trials,
            "rate": est.rate,
            "ci_low": est.ci_low,
            "ci_high": est.ci_high,
            "seed": est.seed,
        })
    return rows


def write_sweep_csv(rows, path_or_file) -> None:
    """Write sweep rows in the canonical column order."""
    own = isinstance(path_or_file, (str, bytes))
    handle = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    finally:
        if own:
            handle.close()


def sweep_csv_text(rows) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()
