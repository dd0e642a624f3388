import math

import numpy as np
import pytest

from ...model import objective, validate
from ...utils.helpers import make_opportunity, make_random_scenario, make_scenario
from ..annealer import AnnealParams, accept, initial_solution, run, temperature, update_counter


def test_temperature():
    params = AnnealParams()
    assert temperature(0, params) == pytest.approx(0.5)
    assert temperature(10, params) == pytest.approx(0.5 + math.log(2))

    params = AnnealParams(delta=1.0, rho=2.0)
    assert temperature(3, params) == pytest.approx(0.5 + 2.0 * math.log(4))


def test_temperature_increases_with_counter():
    params = AnnealParams()
    values = [temperature(r, params) for r in range(50)]
    assert all(a < b for a, b in zip(values[:-1], values[1:]))


def test_update_counter():
    assert update_counter(7, 3, True) == 0
    assert update_counter(7, 0, True) == 7
    assert update_counter(7, -2, False) == 8
    assert update_counter(7, -2, True) == 8
    assert update_counter(7, -2, False, mode="accepted") == 7
    assert update_counter(7, -2, True, mode="accepted") == 8


def test_accept_improving():
    rng = np.random.default_rng(0)
    assert all(accept(1, 0.5, rng) for _ in range(100))


def test_accept_equal():
    # exp(0) = 1 exceeds every draw from [0, 1)
    rng = np.random.default_rng(0)
    assert all(accept(0, 0.5, rng) for _ in range(100))


def test_accept_rate():
    rng = np.random.default_rng(42)
    lam = 2.5
    trials = 100_000
    accepted = sum(accept(-lam, lam, rng) for _ in range(trials))
    assert accepted / trials == pytest.approx(math.exp(-1), abs=0.01)


def test_anneal_params_raises():
    with pytest.raises(ValueError):
        AnnealParams(lambda_min=0.0)
    with pytest.raises(ValueError):
        AnnealParams(rho=-1.0)
    with pytest.raises(ValueError):
        AnnealParams(delta=0.5)
    with pytest.raises(ValueError):
        AnnealParams(eta=0.0)
    with pytest.raises(ValueError):
        AnnealParams(itr=0)
    with pytest.raises(ValueError):
        AnnealParams(tabu_len=0)
    with pytest.raises(ValueError):
        AnnealParams(max_itr=-1)
    with pytest.raises(ValueError):
        AnnealParams(counter_mode="always")
    with pytest.raises(ValueError):
        AnnealParams(pro_1=1.5)


def test_anneal_params_resolve():
    params = AnnealParams().resolve(120)
    assert params.tabu_len == 2
    assert params.max_itr == 24000

    params = AnnealParams().resolve(10)
    assert params.tabu_len == 1
    assert params.max_itr == 2000

    params = AnnealParams(tabu_len=5, max_itr=30).resolve(1000)
    assert params.tabu_len == 5
    assert params.max_itr == 30


def test_anneal_params_from_dict():
    params = AnnealParams(rho=2.0, max_itr=100, counter_mode="accepted")
    assert AnnealParams.from_dict(params.to_dict()) == params
    with pytest.raises(ValueError, match="Unknown"):
        AnnealParams.from_dict({"temperature": 1.0})


def test_initial_solution_empty():
    scenario = make_scenario({}, [])
    schedule = initial_solution(scenario, None, np.random.default_rng(0))
    assert schedule.n_items == 0


def test_initial_solution_two_tasks():
    scenario = make_scenario(
        {1: 5, 2: 3}, [make_opportunity(1, window=(0, 10)), make_opportunity(2, window=(100, 110))]
    )
    schedule = initial_solution(scenario, None, np.random.default_rng(0))
    assert schedule.task_ids == frozenset({1, 2})
    assert validate(schedule, scenario) == []


def test_initial_solution_skips_losing_insertion():
    # Inserting the lighter task would evict the heavier one
    scenario = make_scenario(
        {1: 9, 2: 4},
        [make_opportunity(1, window=(0, 10)), make_opportunity(2, window=(5, 15), angle_range=(20.0, 24.0))],
    )
    schedule = initial_solution(scenario, None, np.random.default_rng(0))
    assert schedule.task_ids == frozenset({1})


def test_run_without_iterations():
    scenario = make_random_scenario(num_tasks=15, seed=3)
    params = AnnealParams(max_itr=0, rng_seed=1)
    best, trace = run(scenario, params)
    initial = initial_solution(scenario, params, np.random.default_rng(1))
    assert best == initial
    assert len(trace) == 0


def test_run_is_deterministic():
    scenario = make_random_scenario(num_tasks=20, seed=5, energy_capacity=200.0)
    params = AnnealParams(max_itr=300, rng_seed=11)
    best_1, trace_1 = run(scenario, params)
    best_2, trace_2 = run(scenario, params)
    assert best_1 == best_2
    assert trace_1.table.equals(trace_2.table)


def test_run_trace():
    scenario = make_random_scenario(num_tasks=20, seed=7, energy_capacity=200.0)
    best, trace = run(scenario, AnnealParams(max_itr=400, rng_seed=2))

    assert len(trace) == 400
    np.testing.assert_array_equal(trace.g.to_numpy(), np.arange(400))
    profit_best = trace.profit_best.to_numpy()
    assert np.all(np.diff(profit_best) >= 0)
    assert np.all(trace.profit_current.to_numpy() <= profit_best)
    assert profit_best[-1] == objective(best, scenario)
    assert np.all(trace.temperature.to_numpy() >= 0.5)
    assert set(trace.structure.to_numpy()) <= {1, 2}
    assert validate(best, scenario) == []


@pytest.mark.parametrize("allow_clustering", [True, False])
def test_run_feasible(allow_clustering):
    scenario = make_random_scenario(num_tasks=30, num_orbits=3, seed=13, max_openings=5)
    best, _ = run(scenario, AnnealParams(max_itr=500, rng_seed=0), allow_clustering=allow_clustering)
    assert validate(best, scenario) == []
    if not allow_clustering:
        assert best.n_clusters == 0


def test_run_finds_cluster():
    scenario = make_scenario(
        {1: 5, 2: 6},
        [
            make_opportunity(1, window=(0, 10), angle_range=(0.0, 4.0)),
            make_opportunity(2, window=(5, 20), angle_range=(2.0, 6.0)),
        ],
    )
    best, _ = run(scenario, AnnealParams(max_itr=20))
    assert objective(best, scenario) == 11
    assert best.n_clusters == 1
