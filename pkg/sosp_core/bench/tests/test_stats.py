import math

import numpy as np
import pytest

from ...model import Schedule, ScheduledItem
from ...utils.helpers import load_minimal_scenario
from ..stats import improvement, resource_ratios, welch_t


def test_welch_t():
    t, significant = welch_t([10, 12, 14], [1, 2, 3])
    assert t == pytest.approx(10 / math.sqrt(5 / 3))
    assert significant

    t, significant = welch_t([1, 2, 3], [10, 12, 14])
    assert t == pytest.approx(-10 / math.sqrt(5 / 3))
    assert not significant


def test_welch_t_equal_samples():
    t, significant = welch_t([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
    assert t == 0.0
    assert not significant


def test_welch_t_no_variance():
    assert welch_t([3, 3], [3, 3]) == (0.0, False)
    assert welch_t([4, 4, 4], [3, 3]) == (np.inf, True)
    assert welch_t([2, 2], [3, 3, 3]) == (-np.inf, False)


def test_welch_t_raises():
    with pytest.raises(ValueError):
        welch_t([1], [1, 2])
    with pytest.raises(ValueError):
        welch_t([1, 2], [])


@pytest.mark.slow
def test_welch_t_false_positive_rate():
    rng = np.random.default_rng(2024)
    reps = 2000
    hits = sum(welch_t(rng.normal(10, 2, 20), rng.normal(10, 2, 20))[1] for _ in range(reps))
    assert hits / reps == pytest.approx(0.05, abs=0.015)


def test_resource_ratios():
    scenario = load_minimal_scenario()
    (opp,) = scenario.opportunities_by_task[0]
    schedule = Schedule.from_items([ScheduledItem.singleton(opp, 8)])
    assert resource_ratios(schedule, scenario) == pytest.approx((0.8, 0.8))
    assert resource_ratios(Schedule.empty(), scenario) == (0.0, 0.0)


def test_improvement():
    assert improvement(12.0, 10.0) == pytest.approx(0.2)
    assert improvement(8.0, 10.0) == pytest.approx(-0.2)
    assert improvement(0.0, 0.0) == 0.0
    assert improvement(5.0, 0.0) == np.inf
