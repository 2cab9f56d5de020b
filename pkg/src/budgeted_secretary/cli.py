"""Command-line front end.

Subcommands expose the library: ``simulate`` runs Monte Carlo over any
policy, ``analytic`` evaluates the closed-form quantities, and ``dp`` the
two-group dynamic program.  Every command is a thin adapter around a
library call and emits CSV (default) or JSON.  Randomized commands require
an explicit seed so published numbers are reproducible.  Exit codes: 0
success, 2 invalid flags or domain errors, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import analytic, dp, montecarlo
from .core import ProblemSpec
from .errors import DimensionError, DomainError, SpecMismatch
from .policies import (DtThresholds, double_threshold, dt_policy,
                       group_filter_baseline, single_threshold)

ANALYTIC_COLUMNS = ("K", "B", "lambda", "alpha", "beta", "value", "source")


class _UsageError(Exception):
    """Invalid parameterization; reported with usage text, exit code 2."""


def _parse_lambdas(text: str, k: int):
    parts = [float(x) for x in text.split(",")]
    if len(parts) == 1 and k > 1:
        raise _UsageError(f"--lambda needs {k} comma-separated values")
    return tuple(parts)


def _emit(rows, columns, args) -> None:
    if getattr(args, "format", "csv") == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _apply_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    if not path:
        return
    with open(path) as handle:
        config = json.load(handle)
    for key, value in config.items():
        if key == "lambda":
            attr = "lambdas" if hasattr(args, "lambdas") else "lam"
        else:
            attr = key.replace("-", "_")
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n.replace("-", "_"), None) is None]
    if missing:
        raise _UsageError("missing required options: "
                          + ", ".join("--" + n for n in missing))


def _build_policy(args, spec: ProblemSpec):
    name = args.policy
    if name == "single":
        _require(args, "alpha")
        return single_threshold(spec, args.alpha), args.alpha, None
    if name == "double":
        _require(args, "alpha", "beta")
        if spec.n_groups != 2:
            raise _UsageError("--policy double requires --K 2")
        return double_threshold(spec, args.alpha, args.beta), args.alpha, args.beta
    if name == "dt":
        _require(args, "thresholds")
        with open(args.thresholds) as handle:
            table = DtThresholds.from_json(handle.read())
        return dt_policy(spec, table), None, None
    if name == "optimal":
        if spec.n_groups != 2:
            raise _UsageError("--policy optimal requires --K 2")
        tables = dp.compute_tables(spec.n_candidates, spec.budget,
                                   spec.group_probs[0])
        return dp.optimal_policy(tables), None, None
    if name == "filter":
        _require(args, "group")
        return group_filter_baseline(spec, args.group), None, None
    raise _UsageError(f"unknown policy {name!r}")


def cmd_simulate(args) -> int:
    _require(args, "N", "K", "B", "policy", "trials", "seed")
    lambdas = _parse_lambdas(args.lambdas, args.K) if args.lambdas else \
        tuple(1.0 / args.K for _ in range(args.K))
    spec = ProblemSpec(n_candidates=args.N, n_groups=args.K,
                       group_probs=lambdas, budget=args.B)
    policy, alpha, beta = _build_policy(args, spec)
    cell = montecarlo.SweepCell(spec=spec, policy=policy,
                                policy_id=args.policy, alpha=alpha, beta=beta)
    rows = montecarlo.sweep([cell], trials=args.trials, seed=args.seed)
    _emit(rows, montecarlo.SWEEP_COLUMNS, args)
    return 0


def _analytic_row(args, alpha, beta, value) -> dict:
    k = getattr(args, "K", None)
    return {"K": k if k is not None else 2, "B": args.B,
            "lambda": getattr(args, "lam", None), "alpha": alpha,
            "beta": beta, "value": value, "source": "analytic"}


def cmd_analytic(args) -> int:
    sub = args.analytic_cmd
    if sub == "single-limit":
        _require(args, "K", "alpha", "B")
        value = analytic.single_threshold_limit(args.K, args.alpha, args.B)
        row = _analytic_row(args, args.alpha, None, value)
    elif sub == "single-bound":
        _require(args, "K", "B")
        value = analytic.single_threshold_bound(args.K, args.B)
        row = _analytic_row(args, None, None, value)
    elif sub == "opt-alpha":
        _require(args, "K", "B")
        alpha, value = analytic.optimal_single_alpha(args.K, args.B)
        row = _analytic_row(args, alpha, None, value)
    elif sub == "double-limit":
        _require(args, "alpha", "beta", "lam", "B")
        value = analytic.double_threshold_limit(args.alpha, args.beta,
                                                args.lam, args.B,
                                                grid_size=args.grid_size)
        row = _analytic_row(args, args.alpha, args.beta, value)
    elif sub == "corollary-thresholds":
        _require(args, "lam", "B")
        pair, bound = analytic.corollary_thresholds(args.lam, args.B)
        row = _analytic_row(args, pair.alpha, pair.beta, bound)
    else:
        raise _UsageError(f"unknown analytic subcommand {sub!r}")
    _emit([row], ANALYTIC_COLUMNS, args)
    return 0


def cmd_dp(args) -> int:
    _require(args, "N", "B", "lam")
    tables = dp.compute_tables(args.N, args.B, args.lam)
    sub = args.dp_cmd
    if sub == "value":
        row = {"K": 2, "B": args.B, "lambda": args.lam, "alpha": None,
               "beta": None, "value": dp.initial_success(tables),
               "source": "dp"}
        _emit([row], ANALYTIC_COLUMNS, args)
    elif sub == "thresholds":
        alpha_star, beta_star = dp.estimate_dt_thresholds(tables)
        rows = [{"b": b, "alpha_star": float(alpha_star[b]),
                 "beta_star": float(beta_star[b])}
                for b in range(args.B + 1)]
        _emit(rows, ("b", "alpha_star", "beta_star"), args)
    elif sub == "region":
        groups = [args.group] if args.group else [1, 2]
        levels = [args.budget_level] if args.budget_level is not None \
            else list(range(args.B + 1))
        rows = []
        for g in groups:
            for b in levels:
                region = dp.acceptance_region(tables, b, g)
                for t in range(1, args.N + 1):
                    for m in range(t):
                        rows.append({"t": t, "m": m, "g": g, "b": b,
                                     "accept": int(region[t, m])})
        _emit(rows, ("t", "m", "g", "b", "accept"), args)
    elif sub == "policy-mc":
        _require(args, "trials", "seed")
        spec = ProblemSpec(n_candidates=args.N, n_groups=2,
                           group_probs=(args.lam, 1.0 - args.lam),
                           budget=args.B)
        cell = montecarlo.SweepCell(spec=spec,
                                    policy=dp.optimal_policy(tables),
                                    policy_id="optimal")
        rows = montecarlo.sweep([cell], trials=args.trials, seed=args.seed)
        _emit(rows, montecarlo.SWEEP_COLUMNS, args)
    else:
        raise _UsageError(f"unknown dp subcommand {sub!r}")
    return 0


def _add_io_flags(parser) -> None:
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--config", help="JSON file supplying missing options")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgeted-secretary",
        description="Online selection across groups with a comparison budget")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte Carlo policy evaluation")
    sim.add_argument("--N", type=int)
    sim.add_argument("--K", type=int)
    sim.add_argument("--lambda", dest="lambdas",
                     help="comma-separated group probabilities")
    sim.add_argument("--B", type=int)
    sim.add_argument("--policy",
                     choices=("single", "double", "dt", "optimal", "filter"))
    sim.add_argument("--alpha", type=float)
    sim.add_argument("--beta", type=float)
    sim.add_argument("--thresholds", help="JSON threshold table for --policy dt")
    sim.add_argument("--group", type=int, help="group index for --policy filter")
    sim.add_argument("--trials", type=int)
    sim.add_argument("--seed", type=int)
    _add_io_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    ana = sub.add_parser("analytic", help="closed-form quantities")
    ana.add_argument("analytic_cmd",
                     choices=("single-limit", "single-bound", "opt-alpha",
                              "double-limit", "corollary-thresholds"))
    ana.add_argument("--K", type=int)
    ana.add_argument("--B", type=int)
    ana.add_argument("--alpha", type=float)
    ana.add_argument("--beta", type=float)
    ana.add_argument("--lambda", dest="lam", type=float)
    ana.add_argument("--grid-size", type=int, default=512)
    _add_io_flags(ana)
    ana.set_defaults(func=cmd_analytic)

    dpp = sub.add_parser("dp", help="two-group optimal memory-less program")
    dpp.add_argument("dp_cmd",
                     choices=("value", "region", "thresholds", "policy-mc"))
    dpp.add_argument("--N", type=int)
    dpp.add_argument("--B", type=int)
    dpp.add_argument("--lambda", dest="lam", type=float)
    dpp.add_argument("--group", type=int, choices=(1, 2))
    dpp.add_argument("--budget-level", type=int)
    dpp.add_argument("--trials", type=int)
    dpp.add_argument("--seed", type=int)
    _add_io_flags(dpp)
    dpp.set_defaults(func=cmd_dp)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        return args.func(args)
    except (_UsageError, DomainError, DimensionError, SpecMismatch,
            ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        sys.stderr.write(parser.format_usage())
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        sys.stderr.write(f"runtime failure: {exc}\n")
        return 3


def entry() -> None:
    sys.exit(main())
