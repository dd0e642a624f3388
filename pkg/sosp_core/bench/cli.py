import argparse
import dataclasses
import logging
import sys
from typing import List, Optional

from ..baselines import ClassicSAParams
from ..model import (
    InstanceMismatchError,
    load_schedule,
    objective,
    save_schedule,
    scenario_statistics,
    validate,
)
from ..oracle import OracleLimitError, OracleLimits, exact_solve
from ..scenario import GeneratorConfig, generate, load_scenario, save_scenario
from ..search import COUNTER_MODES, AnnealParams
from ..solvers import ALGORITHMS, make_solver
from .experiment import ExperimentConfig, run_experiment, summary_text

logger = logging.getLogger(__name__)

__all__ = ["build_parser", "main"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2

_GENERATOR = GeneratorConfig()
_ANNEAL = AnnealParams()
_CLASSIC = ClassicSAParams()
_LIMITS = OracleLimits()


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("generator")
    group.add_argument("--config", help="GeneratorConfig JSON file; replaces the flags below")
    group.add_argument("--preset", choices=["wide", "dense"], default="wide", help="target area")
    group.add_argument("--n-targets", type=int, default=_GENERATOR.n_targets)
    group.add_argument("--n-orbits", type=int, default=_GENERATOR.n_orbits)
    group.add_argument("--horizon-seconds", type=int, default=_GENERATOR.horizon_seconds)
    group.add_argument(
        "--windows-per-visible-target", type=float, default=_GENERATOR.windows_per_visible_target
    )
    group.add_argument("--visibility-prob", type=float, default=_GENERATOR.visibility_prob)
    group.add_argument(
        "--window-len-bounds", type=int, nargs=2, default=list(_GENERATOR.window_len_bounds)
    )
    group.add_argument(
        "--angle-range-halfwidth-bounds",
        type=float,
        nargs=2,
        default=list(_GENERATOR.angle_range_halfwidth_bounds),
    )
    group.add_argument("--weight-bounds", type=int, nargs=2, default=list(_GENERATOR.weight_bounds))
    group.add_argument(
        "--max-cluster-duration", type=float, default=_GENERATOR.max_cluster_duration
    )
    group.add_argument("--seed", type=int, default=_GENERATOR.seed)


def _generator_config(args: argparse.Namespace) -> GeneratorConfig:
    if args.config is not None:
        return GeneratorConfig.from_json(args.config)
    factory = GeneratorConfig.dense if args.preset == "dense" else GeneratorConfig.wide
    return factory(
        args.n_targets,
        n_orbits=args.n_orbits,
        horizon_seconds=args.horizon_seconds,
        windows_per_visible_target=args.windows_per_visible_target,
        visibility_prob=args.visibility_prob,
        window_len_bounds=tuple(args.window_len_bounds),
        angle_range_halfwidth_bounds=tuple(args.angle_range_halfwidth_bounds),
        weight_bounds=tuple(args.weight_bounds),
        max_cluster_duration=args.max_cluster_duration,
        seed=args.seed,
    )


def _add_anneal_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("annealing")
    group.add_argument("--lambda-min", type=float, default=_ANNEAL.lambda_min)
    group.add_argument("--rho", type=float, default=_ANNEAL.rho)
    group.add_argument("--delta", type=float, default=_ANNEAL.delta)
    group.add_argument("--eta", type=float, default=_ANNEAL.eta)
    group.add_argument("--itr", type=int, default=_ANNEAL.itr)
    group.add_argument("--tabu-len", type=int, default=None, help="default max(1, N // 50)")
    group.add_argument("--max-itr", type=int, default=None, help="default 200 * N")
    group.add_argument("--rng-seed", type=int, default=_ANNEAL.rng_seed)
    group.add_argument("--counter-mode", choices=COUNTER_MODES, default=_ANNEAL.counter_mode)
    group.add_argument("--pro-1", type=float, default=_ANNEAL.pro_1)
    group.add_argument("--lambda-0", type=float, default=_CLASSIC.lambda_0, help="CLASSIC-SA only")
    group.add_argument("--gamma", type=float, default=_CLASSIC.gamma, help="CLASSIC-SA only")


def _anneal_params(args: argparse.Namespace) -> AnnealParams:
    names = [f.name for f in dataclasses.fields(AnnealParams)]
    return AnnealParams(**{name: getattr(args, name) for name in names})


def _classic_params(args: argparse.Namespace) -> ClassicSAParams:
    return ClassicSAParams(
        lambda_0=args.lambda_0, gamma=args.gamma, max_itr=args.max_itr, rng_seed=args.rng_seed
    )


def _add_oracle_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("oracle")
    group.add_argument("--max-tasks", type=int, default=_LIMITS.max_tasks)
    group.add_argument("--max-opportunities", type=int, default=_LIMITS.max_opportunities)
    group.add_argument("--node-budget", type=int, default=_LIMITS.node_budget)


def _oracle_limits(args: argparse.Namespace) -> OracleLimits:
    return OracleLimits(
        max_tasks=args.max_tasks,
        max_opportunities=args.max_opportunities,
        node_budget=args.node_budget,
    )


def run_generate(args: argparse.Namespace) -> int:
    config = _generator_config(args)
    scenario = generate(config)
    save_scenario(scenario, args.out)
    stats = scenario_statistics(scenario)
    print(
        f"N={stats.n} EN={stats.en} TN={stats.tn} "
        f"mean_conflicts={stats.mean_conflicts:.4f} -> {args.out}"
    )
    return EXIT_OK


def run_solve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    solver = make_solver(
        args.algorithm, _anneal_params(args), _classic_params(args), _oracle_limits(args)
    )
    schedule, trace = solver.solve(scenario, seed=args.rng_seed)

    save_schedule(schedule, scenario, args.out, algorithm=args.algorithm, seed=args.rng_seed)
    if args.trace is not None and trace is not None:
        trace.to_csv(args.trace)

    violations = validate(schedule, scenario)
    for violation in violations:
        print(f"{violation.constraint.value}: {violation.message}")
    print(
        f"{args.algorithm} profit={objective(schedule, scenario)} tasks={schedule.n_tasks} "
        f"items={schedule.n_items} clusters={schedule.n_clusters} -> {args.out}"
    )
    return EXIT_INVALID if violations else EXIT_OK


def run_bench(args: argparse.Namespace) -> int:
    config = ExperimentConfig.from_json(args.config)
    overrides = {
        name: getattr(args, name)
        for name in ["output", "replicas", "base_seed", "max_processes"]
        if getattr(args, name) is not None
    }
    if overrides:
        config = dataclasses.replace(config, **overrides)

    result = run_experiment(config)
    print(summary_text(result.summary, include_wall_time=True), end="")
    return EXIT_OK


def run_validate(args: argparse.Namespace) -> int:
    scenario, schedule = load_schedule(args.schedule)
    try:
        violations = validate(schedule, scenario)
    except InstanceMismatchError as e:
        print(f"schedule does not match its scenario: {e}")
        return EXIT_INVALID

    for violation in violations:
        print(f"{violation.constraint.value}: {violation.message}")
    if violations:
        print(f"{len(violations)} violations")
        return EXIT_INVALID
    print(f"feasible, profit={objective(schedule, scenario)}")
    return EXIT_OK


def run_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    profit, schedule = exact_solve(
        scenario, _oracle_limits(args), allow_clustering=not args.no_clustering
    )
    if args.out is not None:
        save_schedule(schedule, scenario, args.out, algorithm="ORACLE")
    print(f"optimum={profit}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    formatter = argparse.ArgumentDefaultsHelpFormatter
    ap = argparse.ArgumentParser(
        prog="sosp-bench",
        description="Multi-orbit observation scheduling solvers and benchmarks.",
        formatter_class=formatter,
    )
    ap.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic scenario", formatter_class=formatter)
    _add_generator_flags(gen)
    gen.add_argument("--out", required=True, help="scenario file to write")
    gen.set_defaults(func=run_generate)

    solve = sub.add_parser("solve", help="schedule a scenario", formatter_class=formatter)
    solve.add_argument("--scenario", required=True)
    solve.add_argument("--algorithm", choices=ALGORITHMS, default="ASA-DTC")
    solve.add_argument("--out", required=True, help="schedule file to write")
    solve.add_argument("--trace", default=None, help="iteration trace CSV to write")
    _add_anneal_flags(solve)
    _add_oracle_flags(solve)
    solve.set_defaults(func=run_solve)

    bench = sub.add_parser("bench", help="run an experiment", formatter_class=formatter)
    bench.add_argument("--config", required=True, help="ExperimentConfig JSON file")
    bench.add_argument("--output", default=None, help="overrides the configured output directory")
    bench.add_argument("--replicas", type=int, default=None)
    bench.add_argument("--base-seed", type=int, default=None)
    bench.add_argument("--max-processes", type=int, default=None)
    bench.set_defaults(func=run_bench)

    check = sub.add_parser("validate", help="check a schedule file", formatter_class=formatter)
    check.add_argument("--schedule", required=True)
    check.set_defaults(func=run_validate)

    oracle = sub.add_parser("oracle", help="solve a tiny scenario exactly", formatter_class=formatter)
    oracle.add_argument("--scenario", required=True)
    oracle.add_argument("--out", default=None, help="schedule file to write")
    oracle.add_argument("--no-clustering", action="store_true")
    _add_oracle_flags(oracle)
    oracle.set_defaults(func=run_oracle)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ValueError, OSError, OracleLimitError) as e:
        logger.error(f"{args.cmd}: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
