from ...model import objective, validate
from ...utils.helpers import make_opportunity, make_random_scenario, make_scenario
from ..hpfs import hpfs


def test_hpfs_empty():
    scenario = make_scenario({}, [])
    assert hpfs(scenario).n_items == 0


def test_hpfs_conflict_keeps_heavier():
    scenario = make_scenario(
        {1: 4, 2: 9}, [make_opportunity(1, window=(5, 15)), make_opportunity(2, window=(0, 10))]
    )
    schedule = hpfs(scenario)
    assert schedule.task_ids == frozenset({2})
    assert objective(schedule, scenario) == 9


def test_hpfs_prefers_richer_orbit():
    scenario = make_scenario(
        {1: 9, 2: 4},
        [
            make_opportunity(1, orbit_id=0, window=(0, 100)),
            make_opportunity(2, orbit_id=0, window=(500, 510)),
            make_opportunity(2, orbit_id=1, window=(500, 510)),
        ],
        num_orbits=2,
    )
    schedule = hpfs(scenario)
    assert schedule.locate(1) == (0, 0)
    assert schedule.locate(2) == (1, 0)


def test_hpfs_orbit_tie():
    scenario = make_scenario(
        {1: 9},
        [make_opportunity(1, orbit_id=1, window=(0, 10)), make_opportunity(1, orbit_id=0, window=(50, 60))],
        num_orbits=2,
    )
    assert hpfs(scenario).locate(1) == (0, 0)


def test_hpfs_never_clusters():
    scenario = make_scenario(
        {1: 5, 2: 6},
        [
            make_opportunity(1, window=(0, 10), angle_range=(0.0, 4.0)),
            make_opportunity(2, window=(5, 20), angle_range=(2.0, 6.0)),
        ],
    )
    schedule = hpfs(scenario)
    assert schedule.n_clusters == 0
    assert schedule.task_ids == frozenset({2})


def test_hpfs_feasible():
    for seed in range(5):
        scenario = make_random_scenario(num_tasks=40, num_orbits=3, seed=seed, max_openings=6)
        schedule = hpfs(scenario)
        assert validate(schedule, scenario) == []
        assert schedule.n_items <= 18
