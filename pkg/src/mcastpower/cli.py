"""Command-line entry points: run, sweep, compare, oracle."""

import argparse
import json
import sys

from .baseline import BaselineUnsupported, Infeasible
from .config import ConfigError, load_scenario
from .harness import TraceData, compare_runs, oracle_report, run_scenario, sweep_arrivals


def _add_common(p):
    p.add_argument("scenario", help="scenario YAML file")
    p.add_argument("--seed", type=int, action="append", default=None,
                   help="override scenario seeds (repeatable)")
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--algorithm", choices=["constant", "dqn", "acdqn", "oracle"],
                   default=None)
    p.add_argument("--out", default=None, help="output directory for traces")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcastpower",
        description="Multicast downlink power-control experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario, one trace per seed")
    _add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="delay-vs-arrival-rate sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--rates", required=True,
                         help="comma-separated arrival rates, e.g. 0.4,1.2,2.0")
    p_sweep.add_argument("--algorithms", default="constant,acdqn",
                         help="comma-separated algorithm list")

    p_cmp = sub.add_parser("compare", help="windowed deltas between two traces")
    p_cmp.add_argument("trace_a")
    p_cmp.add_argument("trace_b")
    p_cmp.add_argument("--window", type=int, default=1000)

    p_oracle = sub.add_parser("oracle", help="stationary optimal tabular policy")
    p_oracle.add_argument("scenario")
    p_oracle.add_argument("--samples", type=int, default=20000)
    p_oracle.add_argument("--rounds", type=int, default=3)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--out", default=None, help="write report to this file")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            scenario = load_scenario(args.scenario)
            results = run_scenario(
                scenario,
                outdir=args.out or scenario.output_dir,
                algorithm=args.algorithm,
                seeds=args.seed,
                horizon=args.horizon,
            )
            for rr in results:
                print(json.dumps(rr.summary))
        elif args.command == "sweep":
            scenario = load_scenario(args.scenario)
            if args.horizon:
                scenario.horizon = args.horizon
            rates = [float(x) for x in args.rates.split(",") if x]
            algorithms = [a for a in args.algorithms.split(",") if a]
            outpath = args.out
            rows = sweep_arrivals(
                scenario, rates, algorithms=algorithms, seeds=args.seed, outpath=outpath
            )
            for row in rows:
                print(json.dumps(row))
        elif args.command == "compare":
            report = compare_runs(
                TraceData(args.trace_a), TraceData(args.trace_b), window=args.window
            )
            print(json.dumps(report, indent=2))
        elif args.command == "oracle":
            scenario = load_scenario(args.scenario)
            text, _ = oracle_report(
                scenario, num_samples=args.samples, rounds=args.rounds, seed=args.seed
            )
            if args.out:
                with open(args.out, "w") as f:
                    f.write(text)
            print(text, end="")
    except (ConfigError, BaselineUnsupported, Infeasible, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
