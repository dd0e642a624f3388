import logging
from typing import Any, Dict, Optional, Tuple

from ..scenario import Scenario
from ..scenario.io import (
    PathOrFile,
    ScenarioParseError,
    dump_document,
    parse_document,
    scenario_from_document,
    scenario_to_document,
)
from ..utils.documents import as_float, as_int, as_list, as_pair, check_keys
from .feasibility import objective
from .items import Schedule, ScheduledItem

logger = logging.getLogger(__name__)

__all__ = ["schedule_to_document", "save_schedule", "load_schedule"]

SCHEDULE_KEYS = ["items"]
SCHEDULE_OPTIONAL_KEYS = ["algorithm", "profit", "seed"]
ITEM_KEYS = ["orbit_id", "members", "window", "angle_range", "exec_angle", "weight"]
MEMBER_KEYS = ["task_id", "window"]


def schedule_to_document(
    schedule: Schedule,
    scenario: Scenario,
    algorithm: Optional[str] = None,
    seed: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Represent a schedule as a scenario document with an added schedule section.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Schedule to represent.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario the schedule was built for.
    algorithm : str, optional
        Name of the algorithm that produced the schedule.
    seed : int, optional
        Seed of the run that produced the schedule.

    Returns
    -------
    document : dict
        Scenario document including a "schedule" key.
    """
    section: Dict[str, Any] = {}
    if algorithm is not None:
        section["algorithm"] = algorithm
    if seed is not None:
        section["seed"] = seed
    section["profit"] = objective(schedule, scenario)
    section["items"] = [
        {
            "orbit_id": item.orbit_id,
            "members": [{"task_id": m.task_id, "window": [m.start, m.end]} for m in item.members],
            "window": list(item.window),
            "angle_range": list(item.angle_range),
            "exec_angle": item.exec_angle,
            "weight": item.weight,
        }
        for _, _, item in schedule.items()
    ]
    document = scenario_to_document(scenario)
    document["schedule"] = section
    return document


def save_schedule(
    schedule: Schedule,
    scenario: Scenario,
    sink: PathOrFile,
    algorithm: Optional[str] = None,
    seed: Optional[int] = None,
) -> None:
    dump_document(schedule_to_document(schedule, scenario, algorithm=algorithm, seed=seed), sink)


def load_schedule(source: PathOrFile) -> Tuple[Scenario, Schedule]:
    """
    Read a schedule document written by save_schedule.

    Items are rebuilt exactly as stored (their windows and angles are not
    recomputed) so that the schedule can be checked with validate.

    Parameters
    ----------
    source : str, path or text file
        Source document.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario stored in the document.
    schedule : `~sosp_core.model.items.Schedule`
        Schedule stored in the document.

    Raises
    ------
    ScenarioParseError : If the document is malformed or an item member does not
        match an opportunity of the scenario.
    """
    document = parse_document(source)
    scenario = scenario_from_document(document, optional_keys=["schedule"])
    if "schedule" not in document:
        raise ScenarioParseError("$: missing keys ['schedule']")

    section = document["schedule"]
    check_keys(section, SCHEDULE_KEYS, "schedule", optional=SCHEDULE_OPTIONAL_KEYS)

    lanes: Dict[int, list] = {}
    for i, record in enumerate(as_list(section["items"], "schedule.items")):
        path = f"schedule.items[{i}]"
        check_keys(record, ITEM_KEYS, path)
        orbit_id = as_int(record["orbit_id"], f"{path}.orbit_id")

        members = []
        for k, member in enumerate(as_list(record["members"], f"{path}.members")):
            member_path = f"{path}.members[{k}]"
            check_keys(member, MEMBER_KEYS, member_path)
            task_id = as_int(member["task_id"], f"{member_path}.task_id")
            window = as_pair(member["window"], f"{member_path}.window", as_int)
            matches = [
                opp
                for opp in scenario.opportunities_by_task.get(task_id, ())
                if opp.orbit_id == orbit_id and opp.window == window
            ]
            if not matches:
                raise ScenarioParseError(
                    f"{member_path}: task {task_id} has no opportunity {window} on orbit {orbit_id}"
                )
            members.append(matches[0])

        item = ScheduledItem(
            orbit_id=orbit_id,
            members=tuple(members),
            weight=as_int(record["weight"], f"{path}.weight"),
            window=as_pair(record["window"], f"{path}.window", as_int),
            angle_range=as_pair(record["angle_range"], f"{path}.angle_range", as_float),
            exec_angle=as_float(record["exec_angle"], f"{path}.exec_angle"),
        )
        lanes.setdefault(orbit_id, []).append(item)

    # Lanes keep the stored order so that ordering faults stay visible to validate
    schedule = Schedule({j: tuple(lanes[j]) for j in sorted(lanes)})
    logger.debug(f"Loaded a schedule with {schedule.n_items} items.")
    return scenario, schedule
