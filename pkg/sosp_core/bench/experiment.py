import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from quivr import BooleanColumn, Float64Column, Int64Column, StringColumn, Table
from quivr.concat import concatenate

from ..baselines import ClassicSAParams
from ..model import Schedule, objective, schedule_usage
from ..oracle import OracleLimits
from ..scenario import GeneratorConfig, Scenario, generate, load_scenario
from ..search import AnnealParams
from ..solvers import ALGORITHMS, ReplicaOutcome, make_solver, replica_seeds
from .stats import improvement, resource_ratios, welch_t

logger = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_ALGORITHMS",
    "SUMMARY_COLUMNS",
    "ExperimentConfig",
    "ReplicaResults",
    "ExperimentSummary",
    "ExperimentResult",
    "summarize",
    "run_experiment",
    "summary_text",
    "write_outputs",
]

DEFAULT_ALGORITHMS = ("ASA-DTC", "ASA-STC", "ASA-NONTC", "CLASSIC-SA", "HPFS")

# Columns of the summary files. Wall times go to the timing files only.
SUMMARY_COLUMNS = [
    "algorithm",
    "available",
    "replicas",
    "mean_profit",
    "mean_finished",
    "sd_profit",
    "profit_memory_ratio",
    "profit_energy_ratio",
    "imp",
    "t_statistic",
    "significant",
]
REPLICA_COLUMNS = [
    "algorithm",
    "replica",
    "seed",
    "available",
    "profit",
    "finished_tasks",
    "n_openings",
    "n_clusters",
    "energy",
    "memory",
    "profit_memory_ratio",
    "profit_energy_ratio",
]
SUMMARY_FIELDS = SUMMARY_COLUMNS[:6] + ["mean_wall_time"] + SUMMARY_COLUMNS[6:]
TIMING_COLUMNS = ["algorithm", "replica", "seed", "wall_time"]
TIMING_SUMMARY_COLUMNS = ["algorithm", "replicas", "mean_wall_time"]

CSV_FLOAT_FORMAT = "%.12g"


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Benchmark experiment: a scenario and the algorithms run on it.

    Parameters
    ----------
    scenario : str, optional
        Path of a scenario document. Exactly one of scenario and generator must be given.
    generator : `~sosp_core.scenario.generator.GeneratorConfig`, optional
        Configuration of a synthetic scenario.
    algorithms : tuple of str
        Algorithms to run, from ALGORITHMS.
    replicas : int
        Independent runs per algorithm. Replica i runs with seed base_seed + i.
    base_seed : int
        Seed of the first replica.
    reference : str, optional
        Algorithm the others are compared against. Defaults to ASA-STC if it is
        run, otherwise to the first algorithm.
    output : str, optional
        Directory the result files are written to.
    max_processes : int or None
        Maximum number of processes running replicas. If None then the number of
        processes will be equal to the number of cores on the machine. If 1
        then no multiprocessing will be used.
    anneal : `~sosp_core.search.annealer.AnnealParams`
        Parameters of the adaptive annealing variants. Their seed is replaced
        by the replica seed.
    classic : `~sosp_core.baselines.variants.ClassicSAParams`
        Parameters of classic annealing.
    oracle : `~sosp_core.oracle.oracle.OracleLimits`
        Limits of the exact oracle.
    """

    scenario: Optional[str] = None
    generator: Optional[GeneratorConfig] = None
    algorithms: Tuple[str, ...] = DEFAULT_ALGORITHMS
    replicas: int = 50
    base_seed: int = 0
    reference: Optional[str] = None
    output: Optional[str] = None
    max_processes: Optional[int] = 1
    anneal: AnnealParams = field(default_factory=AnnealParams)
    classic: ClassicSAParams = field(default_factory=ClassicSAParams)
    oracle: OracleLimits = field(default_factory=OracleLimits)

    def __post_init__(self):
        if (self.scenario is None) == (self.generator is None):
            raise ValueError("Exactly one of scenario and generator must be given.")
        if self.replicas < 1:
            raise ValueError("replicas must be at least 1.")
        if len(self.algorithms) == 0:
            raise ValueError("At least one algorithm is required.")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"Unknown algorithms {unknown}; expected a subset of {ALGORITHMS}.")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithms must not repeat.")
        if self.reference is not None and self.reference not in self.algorithms:
            raise ValueError(f"reference {self.reference!r} is not one of the algorithms.")
        if self.max_processes is not None and self.max_processes < 1:
            raise ValueError("max_processes must be at least 1.")

    @property
    def reference_algorithm(self) -> str:
        if self.reference is not None:
            return self.reference
        if "ASA-STC" in self.algorithms:
            return "ASA-STC"
        return self.algorithms[0]

    def build_scenario(self) -> Scenario:
        if self.scenario is not None:
            return load_scenario(self.scenario)
        return generate(self.generator)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "scenario": self.scenario,
            "generator": None if self.generator is None else self.generator.to_dict(),
            "algorithms": list(self.algorithms),
            "replicas": self.replicas,
            "base_seed": self.base_seed,
            "reference": self.reference,
            "output": self.output,
            "max_processes": self.max_processes,
            "anneal": self.anneal.to_dict(),
            "classic": dataclasses.asdict(self.classic),
            "oracle": dataclasses.asdict(self.oracle),
        }
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValueError(f"Unknown experiment config keys: {unknown}")

        kwargs = dict(data)
        if kwargs.get("generator") is not None:
            kwargs["generator"] = GeneratorConfig.from_dict(kwargs["generator"])
        if "algorithms" in kwargs:
            kwargs["algorithms"] = tuple(kwargs["algorithms"])
        if "anneal" in kwargs:
            kwargs["anneal"] = AnnealParams.from_dict(kwargs["anneal"])
        if "classic" in kwargs:
            kwargs["classic"] = ClassicSAParams(**kwargs["classic"])
        if "oracle" in kwargs:
            kwargs["oracle"] = OracleLimits(**kwargs["oracle"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: Union[str, os.PathLike]) -> "ExperimentConfig":
        """
        Load a configuration whose keys are the field names. A relative scenario
        path is resolved against the directory of the configuration file.
        """
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(data, dict) and data.get("scenario") is not None:
            scenario = Path(data["scenario"])
            if not scenario.is_absolute():
                data["scenario"] = str(path.parent / scenario)
        return cls.from_dict(data)


class ReplicaResults(Table):

    algorithm = StringColumn(nullable=False)
    replica = Int64Column(nullable=False)
    seed = Int64Column(nullable=False)
    # False when the algorithm could not handle the scenario
    available = BooleanColumn(nullable=False)
    profit = Int64Column(nullable=True)
    # Distinct initial tasks
    finished_tasks = Int64Column(nullable=True)
    n_openings = Int64Column(nullable=True)
    n_clusters = Int64Column(nullable=True)
    energy = Float64Column(nullable=True)
    memory = Float64Column(nullable=True)
    profit_memory_ratio = Float64Column(nullable=True)
    profit_energy_ratio = Float64Column(nullable=True)
    wall_time = Float64Column(nullable=False)

    @classmethod
    def from_outcomes(
        cls, algorithm: str, outcomes: List[ReplicaOutcome], scenario: Scenario
    ) -> "ReplicaResults":
        """
        Measure the schedules of one algorithm's replicas.

        Parameters
        ----------
        algorithm : str
            Algorithm name.
        outcomes : list of `~sosp_core.solvers.solver.ReplicaOutcome`
            Outcomes ordered by replica index.
        scenario : `~sosp_core.scenario.scenario.Scenario`
            Scenario the replicas ran on.

        Returns
        -------
        results : `~sosp_core.bench.experiment.ReplicaResults`
            One row per outcome.
        """
        columns: Dict[str, list] = {name: [] for name in REPLICA_COLUMNS + ["wall_time"]}
        for outcome in outcomes:
            columns["algorithm"].append(algorithm)
            columns["replica"].append(outcome.replica)
            columns["seed"].append(outcome.seed)
            columns["available"].append(outcome.available)
            columns["wall_time"].append(outcome.wall_time)
            measured = _measure(outcome.schedule, scenario) if outcome.available else {}
            for name in REPLICA_COLUMNS[4:]:
                columns[name].append(measured.get(name))
        return cls.from_kwargs(**columns)


def _measure(schedule: Schedule, scenario: Scenario) -> Dict[str, Any]:
    usage = schedule_usage(schedule, scenario).values()
    profit_memory, profit_energy = resource_ratios(schedule, scenario)
    return {
        "profit": objective(schedule, scenario),
        "finished_tasks": schedule.n_tasks,
        "n_openings": schedule.n_items,
        "n_clusters": schedule.n_clusters,
        "energy": sum(u.energy for u in usage),
        "memory": sum(u.memory for u in usage),
        "profit_memory_ratio": profit_memory,
        "profit_energy_ratio": profit_energy,
    }


class ExperimentSummary(Table):
    """
    One row per algorithm, aggregated over its available replicas. Rows of
    algorithms with no available replica hold nulls.
    """

    algorithm = StringColumn(nullable=False)
    available = BooleanColumn(nullable=False)
    # Available replicas
    replicas = Int64Column(nullable=False)
    mean_profit = Float64Column(nullable=True)
    mean_finished = Float64Column(nullable=True)
    sd_profit = Float64Column(nullable=True)
    mean_wall_time = Float64Column(nullable=True)
    profit_memory_ratio = Float64Column(nullable=True)
    profit_energy_ratio = Float64Column(nullable=True)
    imp = Float64Column(nullable=True)
    t_statistic = Float64Column(nullable=True)
    significant = BooleanColumn(nullable=True)


def _sd(values: np.ndarray) -> float:
    # A single replica has no spread
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def summarize(
    results: ReplicaResults, algorithms: Tuple[str, ...], reference: str
) -> ExperimentSummary:
    """
    Aggregate per-replica results.

    Parameters
    ----------
    results : `~sosp_core.bench.experiment.ReplicaResults`
        Rows of every algorithm.
    algorithms : tuple of str
        Algorithms in the order of the summary rows.
    reference : str
        Algorithm that IMP and the t statistic compare against.

    Returns
    -------
    summary : `~sosp_core.bench.experiment.ExperimentSummary`
        One row per algorithm. IMP is null if either side has no available
        replica; the t statistic and its significance are null unless both
        sides have at least two.
    """
    df = results.to_dataframe()
    df = df[df["available"]]
    profits = {
        alg: df.loc[df["algorithm"] == alg, "profit"].to_numpy(dtype=np.float64) for alg in algorithms
    }
    reference_profits = profits[reference]

    columns: Dict[str, list] = {name: [] for name in SUMMARY_FIELDS}
    for alg in algorithms:
        rows = df[df["algorithm"] == alg]
        values = profits[alg]
        available = len(values) > 0
        columns["algorithm"].append(alg)
        columns["available"].append(available)
        columns["replicas"].append(len(values))
        if not available:
            for name in SUMMARY_FIELDS[3:]:
                columns[name].append(None)
            continue

        columns["mean_profit"].append(float(values.mean()))
        columns["mean_finished"].append(float(rows["finished_tasks"].mean()))
        columns["sd_profit"].append(_sd(values))
        columns["mean_wall_time"].append(float(rows["wall_time"].mean()))
        columns["profit_memory_ratio"].append(float(rows["profit_memory_ratio"].mean()))
        columns["profit_energy_ratio"].append(float(rows["profit_energy_ratio"].mean()))

        if len(reference_profits) > 0:
            columns["imp"].append(float(improvement(values.mean(), reference_profits.mean())))
        else:
            columns["imp"].append(None)

        if len(values) >= 2 and len(reference_profits) >= 2:
            t, significant = welch_t(values, reference_profits)
            columns["t_statistic"].append(t)
            columns["significant"].append(significant)
        else:
            columns["t_statistic"].append(None)
            columns["significant"].append(None)

    return ExperimentSummary.from_kwargs(**columns)


@dataclass(frozen=True)
class ExperimentResult:
    summary: ExperimentSummary
    replicas: ReplicaResults


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """
    Run every algorithm of an experiment for the configured number of replicas.

    Algorithms that cannot handle the scenario (the oracle on an instance over
    its limits) yield unavailable rows; the experiment continues. If the
    configuration names an output directory the result files are written there.

    Parameters
    ----------
    config : `~sosp_core.bench.experiment.ExperimentConfig`
        Experiment to run.

    Returns
    -------
    result : `~sosp_core.bench.experiment.ExperimentResult`
        Summary rows and per-replica rows.

    Raises
    ------
    ScenarioParseError : If the scenario document is malformed.
    ScenarioValidationError : If the scenario breaks an invariant.
    """
    scenario = config.build_scenario()
    scenario.validate()
    seeds = replica_seeds(config.base_seed, config.replicas)
    logger.info(
        f"Running {len(config.algorithms)} algorithms x {config.replicas} replicas on {scenario!r}."
    )

    tables = []
    for algorithm in config.algorithms:
        solver = make_solver(algorithm, config.anneal, config.classic, config.oracle)
        outcomes = solver.solve_replicas(scenario, seeds, max_processes=config.max_processes)
        table = ReplicaResults.from_outcomes(algorithm, outcomes, scenario)
        tables.append(table)
        logger.info(f"{algorithm}: {sum(o.available for o in outcomes)}/{len(outcomes)} replicas done.")

    replicas = concatenate(tables)
    summary = summarize(replicas, config.algorithms, config.reference_algorithm)
    result = ExperimentResult(summary=summary, replicas=replicas)
    if config.output is not None:
        write_outputs(result, config.output)
    return result


def _format_float(value: float) -> str:
    return f"{value:.4f}"


def summary_text(summary: ExperimentSummary, include_wall_time: bool = False) -> str:
    """
    Render the summary as an aligned text table.
    """
    columns = list(SUMMARY_COLUMNS)
    if include_wall_time:
        columns.insert(columns.index("sd_profit") + 1, "mean_wall_time")
    df = summary.to_dataframe()[columns]
    return df.to_string(index=False, float_format=_format_float, na_rep="-") + "\n"


def write_outputs(result: ExperimentResult, directory: Union[str, os.PathLike]) -> Dict[str, Path]:
    """
    Write summary.csv, summary.txt, replicas.csv, timings.csv and
    timing_summary.csv (mean wall time per algorithm).

    Every file except the two timing files depends only on the configuration.

    Parameters
    ----------
    result : `~sosp_core.bench.experiment.ExperimentResult`
        Experiment result.
    directory : str or path
        Output directory. It is created if missing.

    Returns
    -------
    paths : dict
        Written paths keyed by file stem.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "summary": directory / "summary.csv",
        "summary_text": directory / "summary.txt",
        "replicas": directory / "replicas.csv",
        "timings": directory / "timings.csv",
        "timing_summary": directory / "timing_summary.csv",
    }

    summary = result.summary.to_dataframe()
    summary[SUMMARY_COLUMNS].to_csv(paths["summary"], index=False, float_format=CSV_FLOAT_FORMAT)
    paths["summary_text"].write_text(summary_text(result.summary), encoding="utf-8")

    replicas: pd.DataFrame = result.replicas.to_dataframe()
    replicas[REPLICA_COLUMNS].to_csv(paths["replicas"], index=False, float_format=CSV_FLOAT_FORMAT)
    replicas[TIMING_COLUMNS].to_csv(paths["timings"], index=False, float_format=CSV_FLOAT_FORMAT)
    summary[TIMING_SUMMARY_COLUMNS].to_csv(
        paths["timing_summary"], index=False, float_format=CSV_FLOAT_FORMAT
    )

    logger.info(f"Wrote experiment results to {directory}.")
    return paths
