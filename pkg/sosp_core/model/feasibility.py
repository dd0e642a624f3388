import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from ..constants import ANGLE_TOLERANCE
from ..orbits import Orbit
from ..scenario import Scenario
from .geometry import intersect_ranges, merge_windows, midpoint
from .items import Schedule, ScheduledItem

logger = logging.getLogger(__name__)

__all__ = [
    "ConstraintId",
    "Violation",
    "OrbitUsage",
    "InstanceMismatchError",
    "objective",
    "slew_time",
    "setup_gap_ok",
    "orbit_usage",
    "schedule_usage",
    "lane_violations",
    "lane_is_feasible",
    "validate",
]

# Capacity comparisons are made on floats built from integer seconds
CAPACITY_TOLERANCE = 1e-9


class InstanceMismatchError(ValueError):
    pass


class ConstraintId(str, Enum):
    EQ2 = "EQ2"
    EQ3 = "EQ3"
    EQ4 = "EQ4"
    EQ5 = "EQ5"
    EQ6 = "EQ6"
    CLUSTER = "CLUSTER"


CONSTRAINT_ORDER = {c: i for i, c in enumerate(ConstraintId)}


@dataclass(frozen=True)
class Violation:
    constraint: ConstraintId
    orbit_id: Optional[int]
    position: Optional[int]
    task_id: Optional[int]
    message: str

    def sort_key(self):
        return (
            CONSTRAINT_ORDER[self.constraint],
            -1 if self.orbit_id is None else self.orbit_id,
            -1 if self.position is None else self.position,
        )


@dataclass(frozen=True)
class OrbitUsage:
    energy: float
    memory: float
    openings: int


def objective(schedule: Schedule, scenario: Scenario) -> int:
    """
    Total profit: the sum of the weights of every scheduled task.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Schedule to evaluate.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario the schedule was built for.

    Returns
    -------
    profit : int
        Sum of member task weights over all items.

    Raises
    ------
    InstanceMismatchError : If the schedule contains a task unknown to the scenario.
    """
    weights = scenario.weights
    profit = 0
    for _, _, item in schedule.items():
        for task_id in item.member_task_ids:
            try:
                profit += weights[task_id]
            except KeyError:
                raise InstanceMismatchError(f"Task {task_id} is not part of {scenario!r}.")
    return profit


def slew_time(theta_a: float, theta_b: float, orbit: Orbit) -> float:
    # Slewing is charged from both angles back through nadir
    return (abs(theta_a) + abs(theta_b)) / orbit.slew_velocity


def setup_gap_ok(prev: ScheduledItem, next: ScheduledItem, orbit: Orbit) -> bool:
    """
    Check whether two consecutive items on an orbit leave enough time for the
    sensor to be set up and slewed between them.

    Parameters
    ----------
    prev : `~sosp_core.model.items.ScheduledItem`
        Earlier item.
    next : `~sosp_core.model.items.ScheduledItem`
        Later item.
    orbit : `~sosp_core.orbits.orbits.Orbit`
        Orbit both items are scheduled on.

    Returns
    -------
    ok : bool
        True if next.ts - prev.te >= a_j + (|theta_prev| + |theta_next|) / v_j.
    """
    gap = next.start - prev.end
    required = orbit.setup_time + slew_time(prev.exec_angle, next.exec_angle, orbit)
    return gap >= required - CAPACITY_TOLERANCE


def orbit_usage(items: Sequence[ScheduledItem], orbit: Orbit) -> Tuple[float, float]:
    """
    Energy and memory consumed by a sequence of items on one orbit.

    Parameters
    ----------
    items : sequence of `~sosp_core.model.items.ScheduledItem`
        Items sorted by window start.
    orbit : `~sosp_core.orbits.orbits.Orbit`
        Orbit the items are scheduled on.

    Returns
    -------
    energy : float
        Observation energy of every item plus slewing energy between consecutive items.
    memory : float
        Memory consumed by every item.
    """
    observed = sum(item.length for item in items)
    energy = orbit.obs_energy_rate * observed
    for prev, next in zip(items[:-1], items[1:]):
        energy += orbit.slew_energy_rate * slew_time(prev.exec_angle, next.exec_angle, orbit)
    memory = orbit.memory_rate * observed
    return energy, memory


def schedule_usage(schedule: Schedule, scenario: Scenario) -> Dict[int, OrbitUsage]:
    """
    Consumed energy, memory and sensor openings on every orbit of the scenario.
    """
    usage = {}
    for orbit_id in scenario.orbit_ids:
        lane = schedule.lane(orbit_id)
        energy, memory = orbit_usage(lane, scenario.orbit_params[orbit_id])
        usage[orbit_id] = OrbitUsage(energy=energy, memory=memory, openings=len(lane))
    return usage


def _item_violations(
    item: ScheduledItem, position: int, scenario: Scenario
) -> List[Violation]:
    violations = []

    def _add(message, task_id=None):
        violations.append(
            Violation(ConstraintId.CLUSTER, item.orbit_id, position, task_id, message)
        )

    if len(item.members) == 0:
        _add("item has no members")
        return violations

    for member in item.members:
        if member.orbit_id != item.orbit_id:
            _add(f"member on orbit {member.orbit_id}", member.task_id)
        if member not in scenario.opportunities_by_task.get(member.task_id, ()):
            _add("member is not an opportunity of the scenario", member.task_id)
    if any(a.start > b.start for a, b in zip(item.members[:-1], item.members[1:])):
        _add("members are not ordered by window start")

    intersection = intersect_ranges([m.angle_range for m in item.members])
    if intersection is None:
        _add("member angle ranges do not intersect")
    elif (
        abs(intersection[0] - item.angle_range[0]) > ANGLE_TOLERANCE
        or abs(intersection[1] - item.angle_range[1]) > ANGLE_TOLERANCE
    ):
        _add(f"angle range {item.angle_range} differs from intersection {intersection}")
    if abs(item.exec_angle - midpoint(item.angle_range)) > ANGLE_TOLERANCE:
        _add(f"execution angle {item.exec_angle} is not the angle range midpoint")

    window = merge_windows([m.window for m in item.members])
    if tuple(item.window) != window:
        _add(f"window {item.window} differs from merged window {window}")
    if item.is_cluster and item.length > scenario.max_cluster_duration:
        _add(f"cluster lasts {item.length} s, longer than {scenario.max_cluster_duration} s")

    weight = sum(scenario.weights.get(m.task_id, 0) for m in item.members)
    if item.weight != weight:
        _add(f"weight {item.weight} differs from member weight sum {weight}")
    return violations


def lane_violations(
    items: Sequence[ScheduledItem], orbit: Orbit
) -> List[Violation]:
    """
    Setup-time, energy, memory and sensor opening violations of one orbit's items.
    """
    violations = []
    for position, (prev, next) in enumerate(zip(items[:-1], items[1:])):
        if next.start < prev.start or not setup_gap_ok(prev, next, orbit):
            violations.append(
                Violation(
                    ConstraintId.EQ3,
                    orbit.orbit_id,
                    position + 1,
                    None,
                    f"gap of {next.start - prev.end} s between positions {position} "
                    f"and {position + 1} is too short",
                )
            )

    energy, memory = orbit_usage(items, orbit)
    if energy > orbit.energy_capacity + CAPACITY_TOLERANCE:
        violations.append(
            Violation(
                ConstraintId.EQ4,
                orbit.orbit_id,
                None,
                None,
                f"energy {energy} exceeds capacity {orbit.energy_capacity}",
            )
        )
    if memory > orbit.memory_capacity + CAPACITY_TOLERANCE:
        violations.append(
            Violation(
                ConstraintId.EQ5,
                orbit.orbit_id,
                None,
                None,
                f"memory {memory} exceeds capacity {orbit.memory_capacity}",
            )
        )
    if len(items) > orbit.max_openings:
        violations.append(
            Violation(
                ConstraintId.EQ6,
                orbit.orbit_id,
                None,
                None,
                f"{len(items)} sensor openings exceed the limit of {orbit.max_openings}",
            )
        )
    return violations


def lane_is_feasible(items: Sequence[ScheduledItem], orbit: Orbit) -> bool:
    """
    True if one orbit's items satisfy the setup-time and capacity constraints.
    """
    if len(items) > orbit.max_openings:
        return False
    for prev, next in zip(items[:-1], items[1:]):
        if not setup_gap_ok(prev, next, orbit):
            return False
    energy, memory = orbit_usage(items, orbit)
    return (
        energy <= orbit.energy_capacity + CAPACITY_TOLERANCE
        and memory <= orbit.memory_capacity + CAPACITY_TOLERANCE
    )


def validate(schedule: Schedule, scenario: Scenario) -> List[Violation]:
    """
    Check a schedule against every feasibility constraint.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Schedule to check.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario the schedule was built for.

    Returns
    -------
    violations : list of `~sosp_core.model.feasibility.Violation`
        Violations ordered by constraint id, orbit id and item position. Empty if
        the schedule is feasible.
    """
    violations = []

    seen = set()
    for orbit_id, position, item in schedule.items():
        for task_id in item.member_task_ids:
            if task_id in seen:
                violations.append(
                    Violation(
                        ConstraintId.EQ2,
                        orbit_id,
                        position,
                        task_id,
                        f"task {task_id} is scheduled more than once",
                    )
                )
            seen.add(task_id)

    for orbit_id, lane in schedule.lanes.items():
        orbit = scenario.orbit_params.get(orbit_id)
        if orbit is None:
            violations.append(
                Violation(
                    ConstraintId.CLUSTER, orbit_id, None, None, f"unknown orbit {orbit_id}"
                )
            )
            continue
        for position, item in enumerate(lane):
            if item.orbit_id != orbit_id:
                violations.append(
                    Violation(
                        ConstraintId.CLUSTER,
                        orbit_id,
                        position,
                        None,
                        f"item belongs to orbit {item.orbit_id}",
                    )
                )
            violations.extend(_item_violations(item, position, scenario))
        violations.extend(lane_violations(lane, orbit))

    violations.sort(key=Violation.sort_key)
    if violations:
        logger.debug(f"Schedule has {len(violations)} violations.")
    return violations
