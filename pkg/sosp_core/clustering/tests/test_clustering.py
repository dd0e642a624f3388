import numpy.testing as npt
import pytest

from ...constants import WEIGHT_FLOOR
from ...model import OrbitUsage, Schedule, ScheduledItem
from ...orbits import Orbits
from ...utils.helpers import make_opportunity, make_scenario
from ..clustering import (
    ClusterCost,
    Rejection,
    ResourceWeights,
    resource_delta,
    resource_weights,
    try_cluster,
    update_resource_weights,
    worthwhile,
)

ORBIT = Orbits.from_defaults(1).to_records()[0]
COST = ClusterCost(en=50.0, wn=20.0, ec=45.0, wc=30.0)


def test_resource_delta():
    cost = resource_delta((0, 10), 10.0, (20, 30), 20.0, (0, 30), 15.0, ORBIT)
    npt.assert_allclose([cost.en, cost.wn, cost.ec, cost.wc], [50.0, 20.0, 45.0, 30.0], rtol=1e-9)


def test_resource_delta_zero():
    cost = resource_delta((5, 5), 0.0, (5, 5), 0.0, (5, 5), 0.0, ORBIT)
    assert cost == ClusterCost(en=0.0, wn=0.0, ec=0.0, wc=0.0)


def test_resource_delta_adjacent():
    cost = resource_delta((0, 10), 0.0, (10, 20), 0.0, (0, 20), 0.0, ORBIT)
    npt.assert_allclose([cost.en, cost.wn, cost.ec, cost.wc], [20.0, 20.0, 20.0, 20.0], rtol=1e-9)


def test_worthwhile():
    # 37.5 vs 35
    assert not worthwhile(COST, ResourceWeights(alpha=0.5, beta=0.5))
    # 40.8 vs 45.2
    assert worthwhile(COST, ResourceWeights(alpha=0.9, beta=0.01))


def test_worthwhile_equality():
    cost = ClusterCost(en=30.0, wn=10.0, ec=30.0, wc=10.0)
    assert not worthwhile(cost, ResourceWeights(alpha=0.5, beta=0.5))


def test_ResourceWeights_from_usage():
    weights = ResourceWeights.from_usage(OrbitUsage(energy=750.0, memory=100.0, openings=2), ORBIT)
    npt.assert_allclose([weights.alpha, weights.beta], [0.5, 0.1])

    weights = ResourceWeights.from_usage(OrbitUsage(energy=0.0, memory=0.0, openings=0), ORBIT)
    assert weights == ResourceWeights.floor()
    assert weights.alpha == WEIGHT_FLOOR

    weights = ResourceWeights.from_usage(OrbitUsage(energy=2000.0, memory=0.0, openings=1), ORBIT)
    assert weights.alpha == 1.0


def test_ResourceWeights_zero_capacity():
    orbit = Orbits.from_defaults(1, energy_capacity=0.0).to_records()[0]
    weights = ResourceWeights.from_usage(OrbitUsage(energy=0.0, memory=0.0, openings=0), orbit)
    assert weights.alpha == 1.0
    assert weights.beta == WEIGHT_FLOOR


def test_resource_weights():
    scenario = make_scenario({1: 5}, [make_opportunity(1, window=(0, 150))], num_orbits=2)
    schedule = Schedule.from_items([ScheduledItem.singleton(scenario.opportunity_records[0], 5)])
    weights = resource_weights(schedule, scenario)
    npt.assert_allclose([weights[0].alpha, weights[0].beta], [0.1, 0.15])
    assert weights[1] == ResourceWeights.floor()


def test_update_resource_weights():
    scenario = make_scenario(
        {1: 5, 2: 3},
        [make_opportunity(1, window=(0, 150)), make_opportunity(2, orbit_id=1, window=(0, 100))],
        num_orbits=2,
    )
    first = Schedule.from_items([ScheduledItem.singleton(scenario.opportunities_by_task[1][0], 5)])
    second = first.with_lane(1, [ScheduledItem.singleton(scenario.opportunities_by_task[2][0], 3)])

    weights = update_resource_weights(resource_weights(first, scenario), second, scenario, [1])
    assert weights == resource_weights(second, scenario)
    npt.assert_allclose([weights[1].alpha, weights[1].beta], [100 / 1500, 0.1])

    # Orbits left out keep their previous weights
    assert update_resource_weights(resource_weights(first, scenario), second, scenario, [])[1] == (
        ResourceWeights.floor()
    )


def _pair_scenario(window_i=(0, 10), window_h=(20, 30), range_i=(0.0, 20.0), range_h=(10.0, 30.0)):
    opp_i = make_opportunity(1, window=window_i, angle_range=range_i)
    opp_h = make_opportunity(2, window=window_h, angle_range=range_h)
    scenario = make_scenario({1: 4, 2: 6}, [opp_i, opp_h])
    return scenario, opp_i, ScheduledItem.singleton(opp_h, 6)


def test_try_cluster():
    scenario, opp, item = _pair_scenario()
    merged = try_cluster(item, opp, scenario, ResourceWeights(alpha=0.9, beta=0.01))
    assert isinstance(merged, ScheduledItem)
    assert merged.window == (0, 30)
    assert merged.angle_range == (10.0, 20.0)
    npt.assert_allclose(merged.exec_angle, 15.0)
    assert merged.weight == 10
    assert merged.member_task_ids == (1, 2)


def test_try_cluster_rejected_worth():
    scenario, opp, item = _pair_scenario()
    assert try_cluster(item, opp, scenario, ResourceWeights(alpha=0.5, beta=0.5)) == Rejection.WORTH
    # Feasible without the saving test
    merged = try_cluster(item, opp, scenario, ResourceWeights(alpha=0.5, beta=0.5), check_worth=False)
    assert isinstance(merged, ScheduledItem)


def test_try_cluster_rejected_angle():
    scenario, opp, item = _pair_scenario(range_i=(-20.0, -5.0))
    assert try_cluster(item, opp, scenario, ResourceWeights.floor()) == Rejection.ANGLE


def test_try_cluster_rejected_duration():
    scenario, opp, item = _pair_scenario(window_h=(120, 130))
    assert try_cluster(item, opp, scenario, ResourceWeights.floor()) == Rejection.DURATION


def test_try_cluster_raises():
    scenario, opp, item = _pair_scenario()
    # Task already a member
    with pytest.raises(ValueError):
        try_cluster(item, item.members[0], scenario, ResourceWeights.floor())

    # Other orbit
    with pytest.raises(ValueError):
        try_cluster(item, make_opportunity(1, orbit_id=1), scenario, ResourceWeights.floor())
