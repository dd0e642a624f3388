import pytest

from ...baselines import ClassicSAParams
from ...model import validate
from ...scenario import GeneratorConfig, generate
from ...search import AnnealParams
from ..solvers import ALGORITHMS, make_solver

ALGORITHMS_WITHOUT_ORACLE = [a for a in ALGORITHMS if a != "ORACLE"]
# 5 algorithms x 2 presets x 3 sizes x 17 scenarios x 2 replicas = 1020 runs
SCENARIO_SEEDS = range(17)


@pytest.mark.slow
@pytest.mark.parametrize("n_targets", [20, 100, 300])
@pytest.mark.parametrize("preset", [GeneratorConfig.wide, GeneratorConfig.dense])
@pytest.mark.parametrize("algorithm", ALGORITHMS_WITHOUT_ORACLE)
def test_every_schedule_is_feasible(algorithm, preset, n_targets):
    anneal = AnnealParams(max_itr=5 * n_targets)
    classic = ClassicSAParams(max_itr=5 * n_targets)
    solver = make_solver(algorithm, anneal_params=anneal, classic_params=classic)
    runs = 0
    for seed in SCENARIO_SEEDS:
        scenario = generate(preset(n_targets, seed=seed))
        for outcome in solver.solve_replicas(scenario, [seed, seed + 100]):
            assert validate(outcome.schedule, scenario) == [], (algorithm, seed, outcome.seed)
            runs += 1
    assert runs == 2 * len(SCENARIO_SEEDS)
