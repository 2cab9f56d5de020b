"""Shared-threshold experiments: optimal thresholds, proportion effects,
finite-size convergence.  Writes CSV data files; plotting is left to
external tools.
"""

import argparse
import csv
import math
import pathlib

import budgeted_secretary as bs
from budgeted_secretary import analytic, montecarlo


def write_rows(path, rows, columns):
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def optimal_threshold_curves(out_dir, budgets, group_counts):
    rows = []
    for k in group_counts:
        for budget in budgets:
            alpha, value = analytic.optimal_single_alpha(k, budget)
            rows.append({"K": k, "B": budget, "lambda": "", "alpha": alpha,
                         "beta": "", "value": value, "source": "analytic"})
    write_rows(out_dir / "optimal_single_threshold.csv", rows,
               ("K", "B", "lambda", "alpha", "beta", "value", "source"))


def proportion_sweep(out_dir, trials, seed):
    # success of the shared 1/e threshold is nearly flat in the proportions,
    # sitting below both the single-group value and the group-filter baseline
    # at extreme proportions
    alpha = 1 / math.e
    cells = []
    for lam in [i / 20 for i in range(1, 20)]:
        spec = bs.ProblemSpec(n_candidates=500, n_groups=2,
                              group_probs=(lam, 1 - lam), budget=0)
        cells.append(montecarlo.SweepCell(spec, bs.single_threshold(spec, alpha),
                                          "single", alpha=alpha))
    rows = montecarlo.sweep(cells, trials=trials, seed=seed)
    montecarlo.write_sweep_csv(rows, out_dir / "proportion_sweep.csv")
    print(f"wrote {out_dir / 'proportion_sweep.csv'} ({len(rows)} rows)")


def convergence_in_n(out_dir, trials, seed):
    rows = []
    for k in (2, 3, 4):
        probs = tuple(1.0 / k for _ in range(k))
        alpha, limit = analytic.optimal_single_alpha(k, 0)
        for n in (50, 100, 200, 400, 800, 1600):
            spec = bs.ProblemSpec(n_candidates=n, n_groups=k,
                                  group_probs=probs, budget=0)
            est = montecarlo.estimate_success(
                spec, bs.single_threshold(spec, alpha), trials, seed)
            rows.append({"K": k, "N": n, "alpha": alpha, "rate": est.rate,
                         "ci_low": est.ci_low, "ci_high": est.ci_high,
                         "asymptote": limit})
    write_rows(out_dir / "convergence_in_n.csv", rows,
               ("K", "N", "alpha", "rate", "ci_low", "ci_high", "asymptote"))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--trials", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--budgets", type=int, nargs="+",
                        default=[0, 1, 2, 5, 10, 30])
    parser.add_argument("--groups", type=int, nargs="+", default=[2, 10, 25, 50])
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    optimal_threshold_curves(out_dir, args.budgets, args.groups)
    proportion_sweep(out_dir, args.trials, args.seed)
    convergence_in_n(out_dir, args.trials, args.seed)


if __name__ == "__main__":
    main()
