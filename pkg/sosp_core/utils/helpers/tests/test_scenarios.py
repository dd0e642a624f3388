from ..scenarios import load_minimal_scenario, make_opportunity, make_random_scenario, make_scenario


def test_load_minimal_scenario():
    scenario = load_minimal_scenario()
    assert scenario.n_tasks == 1
    assert scenario.weights == {0: 8}
    assert len(scenario.opportunities) == 1
    assert scenario.opportunity_records[0].window == (100, 110)


def test_make_scenario():
    scenario = make_scenario(
        {1: 5, 2: 7},
        [make_opportunity(1, window=(0, 10)), make_opportunity(2, orbit_id=1, window=(5, 20))],
        num_orbits=2,
        setup_time=0.0,
    )
    scenario.validate()
    assert scenario.orbit_ids == [0, 1]
    assert all(orbit.setup_time == 0.0 for orbit in scenario.orbit_params.values())
    assert len(scenario.opportunities_by_orbit[1]) == 1


def test_make_random_scenario():
    scenario = make_random_scenario(num_tasks=8, num_orbits=2, seed=3)
    scenario.validate()
    assert scenario.n_tasks == 8
    assert make_random_scenario(num_tasks=8, num_orbits=2, seed=3) == scenario


def test_make_random_scenario_max_opportunities():
    scenario = make_random_scenario(num_tasks=20, seed=1, max_opportunities=12)
    assert len(scenario.opportunities) == 12
