import json

import numpy as np
import pandas as pd
import pytest

from ...oracle import OracleLimits
from ...scenario import GeneratorConfig, generate, save_scenario
from ...search import AnnealParams
from ..experiment import (
    DEFAULT_ALGORITHMS,
    REPLICA_COLUMNS,
    SUMMARY_COLUMNS,
    TIMING_COLUMNS,
    TIMING_SUMMARY_COLUMNS,
    ExperimentConfig,
    ReplicaResults,
    run_experiment,
    summarize,
    summary_text,
)

GENERATOR = GeneratorConfig(n_targets=12, n_orbits=4, seed=1)


def _results(profits):
    columns = {name: [] for name in REPLICA_COLUMNS + ["wall_time"]}
    for algorithm, values in profits.items():
        for replica, profit in enumerate(values):
            available = profit is not None
            columns["algorithm"].append(algorithm)
            columns["replica"].append(replica)
            columns["seed"].append(replica)
            columns["available"].append(available)
            columns["wall_time"].append(0.1)
            for name in REPLICA_COLUMNS[4:]:
                columns[name].append(None)
            if available:
                columns["profit"][-1] = profit
                columns["finished_tasks"][-1] = profit // 2
                columns["profit_memory_ratio"][-1] = 0.5
                columns["profit_energy_ratio"][-1] = 0.25
    return ReplicaResults.from_kwargs(**columns)


def test_summarize():
    results = _results({"A": [12, 14, 16], "B": [10, 10, 10]})
    summary = summarize(results, ("A", "B"), "B")

    assert summary.algorithm.to_pylist() == ["A", "B"]
    assert summary.replicas.to_pylist() == [3, 3]
    np.testing.assert_allclose(summary.mean_profit.to_numpy(), [14.0, 10.0])
    np.testing.assert_allclose(summary.sd_profit.to_numpy(), [2.0, 0.0])
    np.testing.assert_allclose(summary.imp.to_numpy(), [0.4, 0.0])
    np.testing.assert_allclose(summary.profit_memory_ratio.to_numpy(), [0.5, 0.5])
    assert summary.significant.to_pylist() == [True, False]
    assert summary.t_statistic.to_pylist()[1] == 0.0


def test_summarize_single_replica():
    summary = summarize(_results({"A": [12], "B": [10]}), ("A", "B"), "B")
    assert summary.sd_profit.to_pylist() == [0.0, 0.0]
    assert summary.t_statistic.to_pylist() == [None, None]
    assert summary.significant.to_pylist() == [None, None]
    assert summary.imp.to_pylist()[0] == pytest.approx(0.2)


def test_summarize_unavailable():
    results = _results({"ORACLE": [None, None], "B": [10, 12]})
    summary = summarize(results, ("ORACLE", "B"), "B")
    assert summary.available.to_pylist() == [False, True]
    assert summary.replicas.to_pylist() == [0, 2]
    assert summary.mean_profit.to_pylist()[0] is None
    assert summary.imp.to_pylist()[0] is None

    # No available reference replicas
    summary = summarize(results, ("ORACLE", "B"), "ORACLE")
    assert summary.imp.to_pylist() == [None, None]
    assert summary.mean_profit.to_pylist()[1] == 11.0


def test_experiment_config_defaults():
    config = ExperimentConfig(generator=GENERATOR)
    assert config.algorithms == DEFAULT_ALGORITHMS
    assert config.replicas == 50
    assert config.reference_algorithm == "ASA-STC"

    config = ExperimentConfig(generator=GENERATOR, algorithms=("HPFS", "ASA-DTC"))
    assert config.reference_algorithm == "HPFS"
    config = ExperimentConfig(generator=GENERATOR, algorithms=("HPFS", "ASA-DTC"), reference="ASA-DTC")
    assert config.reference_algorithm == "ASA-DTC"


def test_experiment_config_raises():
    with pytest.raises(ValueError):
        ExperimentConfig()
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="s.json", generator=GENERATOR)
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, replicas=0)
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, algorithms=())
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, algorithms=("HPFS", "GREEDY"))
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, algorithms=("HPFS", "HPFS"))
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, algorithms=("HPFS",), reference="ASA-DTC")
    with pytest.raises(ValueError):
        ExperimentConfig(generator=GENERATOR, max_processes=0)


def test_experiment_config_dict():
    config = ExperimentConfig(
        generator=GENERATOR,
        algorithms=("HPFS", "ASA-DTC"),
        replicas=3,
        anneal=AnnealParams(max_itr=40),
        oracle=OracleLimits(max_tasks=4),
    )
    data = json.loads(json.dumps(config.to_dict()))
    assert ExperimentConfig.from_dict(data) == config

    with pytest.raises(ValueError, match="Unknown"):
        ExperimentConfig.from_dict({**data, "iterations": 10})


def test_experiment_config_from_json(tmp_path):
    save_scenario(generate(GENERATOR), tmp_path / "scenario.json")
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"scenario": "scenario.json", "algorithms": ["HPFS"], "replicas": 2}))

    config = ExperimentConfig.from_json(path)
    assert config.scenario == str(tmp_path / "scenario.json")
    assert config.build_scenario() == generate(GENERATOR)


def _config(output=None):
    return ExperimentConfig(
        generator=GENERATOR,
        algorithms=("ASA-DTC", "ASA-STC", "ASA-NONTC", "CLASSIC-SA", "HPFS", "ORACLE"),
        replicas=3,
        base_seed=5,
        output=output,
        anneal=AnnealParams(max_itr=60),
        oracle=OracleLimits(max_tasks=1),
    )


def test_run_experiment():
    result = run_experiment(_config())
    replicas = result.replicas.to_dataframe()
    assert len(replicas) == 18
    assert replicas["seed"].tolist()[:3] == [5, 6, 7]

    oracle = replicas[replicas["algorithm"] == "ORACLE"]
    assert not oracle["available"].any()
    assert oracle["profit"].isna().all()

    summary = result.summary.to_dataframe().set_index("algorithm")
    assert summary.loc["ASA-STC", "imp"] == 0.0
    assert not summary.loc["ORACLE", "available"]
    hpfs = replicas[replicas["algorithm"] == "HPFS"]["profit"]
    assert hpfs.nunique() == 1
    assert summary.loc["HPFS", "sd_profit"] == 0.0


def test_run_experiment_reproducible(tmp_path):
    run_experiment(_config(str(tmp_path / "first")))
    run_experiment(_config(str(tmp_path / "second")))

    for name in ["summary.csv", "summary.txt", "replicas.csv"]:
        first = (tmp_path / "first" / name).read_bytes()
        assert first == (tmp_path / "second" / name).read_bytes()

    summary = pd.read_csv(tmp_path / "first" / "summary.csv")
    assert list(summary.columns) == SUMMARY_COLUMNS
    timings = pd.read_csv(tmp_path / "first" / "timings.csv")
    assert list(timings.columns) == TIMING_COLUMNS
    assert len(timings) == 18

    timing_summary = pd.read_csv(tmp_path / "first" / "timing_summary.csv").set_index("algorithm")
    assert list(timing_summary.reset_index().columns) == TIMING_SUMMARY_COLUMNS
    assert len(timing_summary) == 6
    assert np.isnan(timing_summary.loc["ORACLE", "mean_wall_time"])
    assert (timing_summary.drop(index="ORACLE")["mean_wall_time"] >= 0).all()


def test_summary_text():
    summary = summarize(_results({"A": [12], "B": [None]}), ("A", "B"), "A")
    text = summary_text(summary)
    assert text.splitlines()[0].split() == SUMMARY_COLUMNS
    assert "12.0000" in text
    assert "mean_wall_time" in summary_text(summary, include_wall_time=True)
