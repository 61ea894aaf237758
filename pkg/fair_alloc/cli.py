import argparse
import sys
from pathlib import Path
from typing import List, Optional

import wandb

from fair_alloc.arrivals import ArrivalDistribution, DistributionFormatError
from fair_alloc.experiment import ExperimentConfig, ConfigError, RUNNERS, SPECIAL_GRID, RANDOMIZED_GRID, RANDOMIZED_Q, \
    SPECIAL_INSTANCES, randomized_instances, print_schedule
from fair_alloc.policies.policy_kind import POLICY_NAMES
from fair_alloc.policies.schedule import DEFAULT_ETA
from fair_alloc.results import ResultWriter, write_manifest
from fair_alloc.simulator import NegativeRegretError
from fair_alloc.solvers.static_policy import SolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _add_common(parser: argparse.ArgumentParser, default_T=None, default_q=("-inf",)):
    parser.add_argument("--policy", nargs="+", default=list(POLICY_NAMES), choices=POLICY_NAMES,
                        help="policies to run")
    parser.add_argument("--q", nargs="+", default=list(default_q), help="welfare exponents, decimals or -inf")
    parser.add_argument("--T", nargs="+", type=int, default=default_T, required=default_T is None,
                        help="horizons, ascending")
    parser.add_argument("--reps", type=int, default=None,
                        help="replications per job (default 2000 for T <= 4096, 500 above)")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--eta", type=float, default=DEFAULT_ETA, help="schedule parameter of bir/birt")
    parser.add_argument("--out", required=True, help="CSV output path; the manifest goes next to it as .json")
    parser.add_argument("--workers", type=int, default=1, help="replication processes")
    parser.add_argument("--quiet", action="store_true", help="no progress output")
    parser.add_argument("--wandb-project", default=None, help="log metrics to this wandb project")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairalloc", description="Regret benchmarks of online fair allocation")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="regret of policies on one arrival distribution")
    simulate.add_argument("--dist", required=True, help="distribution JSON file, or the JSON itself")
    _add_common(simulate)

    experiment = sub.add_parser("experiment", help="built-in experiment suites")
    suites = experiment.add_subparsers(dest="suite", required=True)

    randomized = suites.add_parser("randomized", help="random instances, average relative regret")
    randomized.add_argument("--alpha", type=float, default=0.5, help="first Beta parameter of the utilities")
    randomized.add_argument("--beta", type=float, default=0.5, help="second Beta parameter of the utilities")
    randomized.add_argument("--instances", type=int, default=30)
    randomized.add_argument("--n", type=int, default=4, help="agents")
    randomized.add_argument("--L", type=int, default=5, help="arrival types")
    _add_common(randomized, default_T=list(RANDOMIZED_GRID), default_q=RANDOMIZED_Q)

    special = suites.add_parser("special", help="the degenerate and nondegenerate two-agent instances")
    _add_common(special, default_T=list(SPECIAL_GRID))

    schedule = sub.add_parser("schedule", help="print the re-solving schedule")
    schedule.add_argument("--T", type=int, required=True)
    schedule.add_argument("--eta", type=float, default=DEFAULT_ETA)
    schedule.add_argument("--n", type=int, default=2)
    return parser


def _protect_negative_tokens(argv: List[str]) -> List[str]:
    # argparse takes "-inf" for an option flag; a leading space makes it a value
    return [" " + a if a.strip().lower() == "-inf" else a for a in argv]


def _load_dist(source: str) -> ArrivalDistribution:
    if source.lstrip().startswith("{"):
        return ArrivalDistribution.from_json(source, source="--dist")
    return ArrivalDistribution.load(source)


def config_from_args(args) -> ExperimentConfig:
    common = dict(policies=tuple(args.policy), q_list=tuple(args.q), T_grid=tuple(args.T), reps=args.reps,
                  master_seed=args.seed, eta=args.eta, workers=args.workers, quiet=args.quiet)
    if args.command == "simulate":
        return ExperimentConfig("single", dist=_load_dist(args.dist), **common)
    if args.suite == "randomized":
        return ExperimentConfig("randomized", n_agents=args.n, n_types=args.L, instances=args.instances,
                                alpha=args.alpha, beta=args.beta,
                                experiment_id=f"randomized-beta({args.alpha:g},{args.beta:g})", **common)
    return ExperimentConfig("special", **common)


def run(config: ExperimentConfig, out: str, logger=None) -> int:
    failures = []
    if config.mode == "single":
        distributions = {"0": config.dist}
    elif config.mode == "randomized":
        distributions = randomized_instances(config)
    else:
        distributions = SPECIAL_INSTANCES

    out = Path(out)
    with ResultWriter(out) as writer:
        for row in RUNNERS[config.mode](config, failures, logger):
            writer.write(row)

    write_manifest(out.with_suffix(".json"), config.to_dict(), config.master_seed,
                   {k: d.to_dict() for k, d in distributions.items()}, failures)
    if failures:
        print(f"WARNING: {len(failures)} job(s) failed, see {out.with_suffix('.json')}", file=sys.stderr)
        return EXIT_SOLVER
    if not config.quiet:
        print(f"Results written to {out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_protect_negative_tokens(sys.argv[1:] if argv is None else list(argv)))

    try:
        if args.command == "schedule":
            print(print_schedule(args.T, args.eta, args.n))
            return EXIT_OK
        config = config_from_args(args)
    except (ConfigError, DistributionFormatError, ValueError) as e:
        print(f"fairalloc: error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    logger = wandb.init(project=args.wandb_project or "fairalloc", config=config.to_dict(),
                        mode="online" if args.wandb_project else "disabled")
    try:
        return run(config, args.out, logger)
    except (SolverError, NegativeRegretError) as e:
        print(f"fairalloc: solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    finally:
        logger.finish()


if __name__ == "__main__":
    sys.exit(main())
