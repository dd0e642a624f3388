import pytest

from ...baselines import hpfs
from ...model import validate
from ...oracle import OracleLimits
from ...search import AnnealParams
from ...utils.helpers import make_random_scenario
from ..solvers import (
    ALGORITHMS,
    AnnealSolver,
    ClassicSASolver,
    HPFSSolver,
    OracleSolver,
    make_solver,
)
from ..utils import _iterate_chunks, replica_seeds


def test_make_solver():
    for algorithm in ALGORITHMS:
        assert make_solver(algorithm).name == algorithm
    assert isinstance(make_solver("ASA-STC"), AnnealSolver)
    assert isinstance(make_solver("CLASSIC-SA"), ClassicSASolver)
    assert isinstance(make_solver("HPFS"), HPFSSolver)
    assert isinstance(make_solver("ORACLE"), OracleSolver)

    with pytest.raises(ValueError):
        make_solver("ASA-XYZ")
    with pytest.raises(ValueError):
        make_solver("GREEDY")


def test_replica_seeds():
    assert replica_seeds(7, 3) == [7, 8, 9]
    assert replica_seeds(0, 0) == []


def test_iterate_chunks():
    assert list(_iterate_chunks([1, 2, 3, 4, 5], 2)) == [[1, 2], [3, 4], [5]]
    with pytest.raises(ValueError):
        list(_iterate_chunks([1], 0))


def test_hpfs_solver():
    scenario = make_random_scenario(num_tasks=20, seed=4)
    schedule, trace = HPFSSolver().solve(scenario, seed=3)
    assert schedule == hpfs(scenario)
    assert trace is None


def test_solve_replicas():
    scenario = make_random_scenario(num_tasks=15, seed=4)
    solver = AnnealSolver(params=AnnealParams(max_itr=100))
    seeds = replica_seeds(10, 4)

    outcomes = solver.solve_replicas(scenario, seeds)
    assert [o.replica for o in outcomes] == [0, 1, 2, 3]
    assert [o.seed for o in outcomes] == seeds
    assert all(o.available for o in outcomes)
    assert all(o.wall_time >= 0 for o in outcomes)
    for outcome in outcomes:
        assert validate(outcome.schedule, scenario) == []

    # A replica's result depends only on its seed
    schedule, _ = solver.solve(scenario, seed=12)
    assert outcomes[2].schedule == schedule
    again = solver.solve_replicas(scenario, seeds)
    assert [o.schedule for o in again] == [o.schedule for o in outcomes]


def test_oracle_unavailable():
    scenario = make_random_scenario(num_tasks=5, seed=4)
    solver = OracleSolver(OracleLimits(max_tasks=2))
    outcomes = solver.solve_replicas(scenario, [0, 1])
    assert [o.available for o in outcomes] == [False, False]
    assert outcomes[0].schedule is None
