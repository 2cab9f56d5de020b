"""Two-group experiments: exact program value vs the analytic lower bound,
acceptance regions, recovered thresholds, and program-vs-threshold-policy
comparisons.  Writes CSV data files.
"""

import argparse
import csv
import pathlib

import budgeted_secretary as bs
from budgeted_secretary import analytic, dp, montecarlo


def write_rows(path, rows, columns):
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def value_vs_lower_bound(out_dir, n, budgets):
    rows = []
    for budget in budgets:
        for lam_pct in range(50, 100, 2):
            lam = lam_pct / 100
            value = dp.initial_success(dp.compute_tables(n, budget, lam))
            pair, bound = analytic.corollary_thresholds(lam, budget)
            dt_value = analytic.double_threshold_limit(pair.alpha, pair.beta,
                                                       lam, budget)
            rows.append({"N": n, "B": budget, "lambda": lam,
                         "dp_value": value, "dt_pair_value": dt_value,
                         "lower_bound": bound})
    write_rows(out_dir / "dp_value_vs_bound.csv", rows,
               ("N", "B", "lambda", "dp_value", "dt_pair_value", "lower_bound"))


def acceptance_regions(out_dir, n, budget, lam):
    tables = dp.compute_tables(n, budget, lam)
    rows = []
    for g in (1, 2):
        for b in range(budget + 1):
            region = dp.acceptance_region(tables, b, g)
            for t in range(1, n + 1):
                for m in range(t):
                    rows.append({"t": t, "m": m, "g": g, "b": b,
                                 "accept": int(region[t, m])})
    write_rows(out_dir / "acceptance_regions.csv", rows,
               ("t", "m", "g", "b", "accept"))


def recovered_thresholds(out_dir, n, budgets):
    rows = []
    for budget in budgets:
        for lam_pct in range(50, 100, 2):
            lam = lam_pct / 100
            tables = dp.compute_tables(n, budget, lam)
            alpha_star, beta_star = dp.estimate_dt_thresholds(tables)
            rows.append({"N": n, "B": budget, "lambda": lam,
                         "alpha_star": float(alpha_star[budget]),
                         "beta_star": float(beta_star[budget])})
    write_rows(out_dir / "recovered_thresholds.csv", rows,
               ("N", "B", "lambda", "alpha_star", "beta_star"))


def dp_vs_dt(out_dir, trials, seed):
    rows = []
    for lam in (0.5, 0.7, 0.95):
        for budget in (1, 2):
            for n in (50, 100, 200, 500):
                tables = dp.compute_tables(n, budget, lam)
                alpha_star, beta_star = dp.estimate_dt_thresholds(tables)
                lo, hi = sorted((float(alpha_star[budget]),
                                 float(beta_star[budget])))
                spec = bs.ProblemSpec(n_candidates=n, n_groups=2,
                                      group_probs=(lam, 1 - lam), budget=budget)
                opt = montecarlo.estimate_success(
                    spec, dp.optimal_policy(tables), trials, seed)
                dt_est = montecarlo.estimate_success(
                    spec, bs.double_threshold(spec, lo, hi), trials, seed)
                rows.append({"N": n, "B": budget, "lambda": lam,
                             "optimal_rate": opt.rate, "dt_rate": dt_est.rate,
                             "alpha_star": lo, "beta_star": hi})
    write_rows(out_dir / "dp_vs_dt.csv", rows,
               ("N", "B", "lambda", "optimal_rate", "dt_rate", "alpha_star",
                "beta_star"))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--N", type=int, default=500)
    parser.add_argument("--trials", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--budgets", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--lambda-region", dest="lam_region", type=float,
                        default=0.7)
    args = parser.parse_args()
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    value_vs_lower_bound(out_dir, args.N, args.budgets)
    acceptance_regions(out_dir, args.N, max(args.budgets), args.lam_region)
    recovered_thresholds(out_dir, args.N, args.budgets)
    dp_vs_dt(out_dir, args.trials, args.seed)


if __name__ == "__main__":
    main()
