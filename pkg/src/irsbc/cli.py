"""Command-line harness: single solves, Monte-Carlo sweeps, scheme comparison.

Exit codes: 0 success, 1 configuration error, 2 solver failure.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .ao import AoConfig, Solution
from .baselines import BaselineKind, solve_scheme
from .channel import generate_realization
from .errors import ConfigError, SolverFailure
from .harness import (ScenarioConfig, config_from_dict, run_sweep,
                      summarize_gains)
from .units import lin_to_db


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--trials", type=int, default=None,
                        help="override trial count")
    parser.add_argument("--out", type=Path, default=None, help="output path")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON scenario config")
    parser.add_argument("--quiet", action="store_true")
    parser.add_argument("--workers", type=int, default=None,
                        help="concurrent trial workers")


def _load_config(args) -> ScenarioConfig:
    if args.config is None:
        config = ScenarioConfig()
    else:
        if not args.config.exists():
            raise ConfigError([f"config file not found: {args.config}"])
        try:
            data = json.loads(args.config.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{args.config}: invalid JSON ({exc})"])
        config = config_from_dict(data)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    return replace(config, **overrides) if overrides else config


def _solution_json(solution: Solution) -> dict:
    if solution.status != "feasible":
        return {"status": solution.status,
                "failed_constraint": solution.failed_constraint,
                "iterations": solution.iterations}
    return {
        "alpha": solution.alpha,
        "a1": solution.a[0],
        "a2": solution.a[1],
        "phases_rad": [float(p) for p in np.angle(solution.phases)],
        "order": [solution.order.strong + 1, solution.order.weak + 1],
        "rate_strong": solution.rate_strong,
        "rate_weak": solution.rate_weak,
        "sum_rate": solution.sum_rate,
        "secondary_snr_db": [float(lin_to_db(s)) for s in solution.secondary_snr],
        "status": solution.status,
        "iterations": solution.iterations,
    }


def _cmd_solve(args) -> int:
    config = _load_config(args)
    rng = np.random.default_rng([config.master_seed, 0])
    channels = generate_realization(config.geometry, config.fading, rng)
    ao = replace(config.ao, seed=(config.master_seed, 1))
    solution = solve_scheme(BaselineKind.FULL_ALGORITHM, channels,
                            config.budget, ao)
    text = json.dumps(_solution_json(solution), sort_keys=True)
    if args.out is not None:
        args.out.write_text(text + "\n")
    if not args.quiet or args.out is None:
        print(text)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    result = run_sweep(config)
    out = args.out or Path("sweep.csv")
    result.to_csv(out)
    if not args.quiet:
        for row in result.rows:
            print(f"{row.scheme:>18} {row.sweep_param}={row.sweep_value:g} "
                  f"mean={row.mean_sum_rate_bps_hz:.4f} "
                  f"feasible={row.feasible}/{row.feasible + row.infeasible}")
        print(f"wrote {out}")
    return 0


def _cmd_compare(args) -> int:
    config = _load_config(args)
    values = config.sweep_values
    at = args.at if args.at is not None else values[len(values) // 2]
    config = replace(config, sweep_values=(at,),
                     schemes=tuple(BaselineKind))
    result = run_sweep(config)
    full = result.row(BaselineKind.FULL_ALGORITHM.value, at)
    if not args.quiet:
        print(f"operating point: {config.sweep_param} = {at:g}, "
              f"trials = {config.trials}")
        print(f"{'scheme':>18} {'mean rate':>10} {'feasible':>9} {'gain of full':>13}")
    for kind in BaselineKind:
        row = result.row(kind.value, at)
        gain = ("      --" if kind is BaselineKind.FULL_ALGORITHM else
                f"{summarize_gains(result, kind, at):+11.1f}%")
        print(f"{row.scheme:>18} {row.mean_sum_rate_bps_hz:10.4f} "
              f"{row.feasible:9d} {gain:>13}")
    if args.out is not None:
        result.to_csv(args.out)
    return 0


def cli_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="irsbc",
        description="IRS-backscatter NOMA downlink optimizer and sweep harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one realization, print JSON")
    p_sweep = sub.add_parser("sweep", help="run a Monte-Carlo sweep, write CSV")
    p_compare = sub.add_parser("compare",
                               help="compare all schemes at one operating point")
    p_compare.add_argument("--at", type=float, default=None,
                           help="sweep value to compare at (default: mid-sweep)")
    for p in (p_solve, p_sweep, p_compare):
        _add_common(p)

    args = parser.parse_args(argv)
    handlers = {"solve": _cmd_solve, "sweep": _cmd_sweep, "compare": _cmd_compare}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 1
    except SolverFailure as exc:
        print(f"solver failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
