import json

import pytest

from ...scenario import ScenarioParseError
from ...utils.helpers import make_opportunity, make_scenario
from ..feasibility import ConstraintId, validate
from ..io import load_schedule, save_schedule, schedule_to_document
from ..items import Schedule, ScheduledItem


@pytest.fixture
def scenario_schedule():
    opps = [
        make_opportunity(1, window=(0, 10), angle_range=(0.0, 6.0)),
        make_opportunity(2, window=(20, 30), angle_range=(2.0, 8.0)),
        make_opportunity(3, orbit_id=1, window=(50, 60), angle_range=(-3.0, -1.0)),
    ]
    scenario = make_scenario({1: 4, 2: 6, 3: 2}, opps, num_orbits=2)
    schedule = Schedule.from_items(
        [ScheduledItem.from_members(opps[:2], scenario.weights), ScheduledItem.singleton(opps[2], 2)]
    )
    return scenario, schedule


def test_schedule_to_document(scenario_schedule):
    scenario, schedule = scenario_schedule
    document = schedule_to_document(schedule, scenario, algorithm="ASA-DTC", seed=3)
    section = document["schedule"]
    assert section["algorithm"] == "ASA-DTC"
    assert section["seed"] == 3
    assert section["profit"] == 12
    assert section["items"][0]["members"] == [
        {"task_id": 1, "window": [0, 10]},
        {"task_id": 2, "window": [20, 30]},
    ]
    assert section["items"][0]["window"] == [0, 30]
    assert section["items"][0]["exec_angle"] == 4.0
    assert section["items"][1]["orbit_id"] == 1


def test_save_load_schedule(tmp_path, scenario_schedule):
    scenario, schedule = scenario_schedule
    path = tmp_path / "schedule.json"
    save_schedule(schedule, scenario, path, algorithm="HPFS")

    scenario_rt, schedule_rt = load_schedule(path)
    assert scenario_rt == scenario
    assert schedule_rt == schedule
    assert validate(schedule_rt, scenario_rt) == []


def test_load_schedule_keeps_faults(tmp_path, scenario_schedule):
    scenario, schedule = scenario_schedule
    document = schedule_to_document(schedule, scenario)
    document["schedule"]["items"][0]["weight"] = 99
    path = tmp_path / "schedule.json"
    path.write_text(json.dumps(document), encoding="utf-8")

    scenario_rt, schedule_rt = load_schedule(path)
    violations = validate(schedule_rt, scenario_rt)
    assert [v.constraint for v in violations] == [ConstraintId.CLUSTER]


def test_load_schedule_raises(tmp_path, scenario_schedule):
    scenario, schedule = scenario_schedule
    document = schedule_to_document(schedule, scenario)
    document["schedule"]["items"][1]["members"][0]["window"] = [51, 60]
    path = tmp_path / "schedule.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(ScenarioParseError, match="schedule.items\\[1\\].members\\[0\\]"):
        load_schedule(path)

    del document["schedule"]
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(ScenarioParseError, match="schedule"):
        load_schedule(path)
