import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Union

from ..constants import WEIGHT_FLOOR
from ..model import OrbitUsage, Schedule, ScheduledItem, orbit_usage, schedule_usage
from ..model.geometry import AngleRange, Window, intersect_ranges, merge_windows, midpoint
from ..orbits import Orbit
from ..scenario import Opportunity, Scenario

logger = logging.getLogger(__name__)

__all__ = [
    "ResourceWeights",
    "ClusterCost",
    "Rejection",
    "resource_weights",
    "update_resource_weights",
    "resource_delta",
    "worthwhile",
    "try_cluster",
]


@dataclass(frozen=True)
class ResourceWeights:
    """
    Energy (alpha) and memory (beta) weights of one orbit: the consumed share of
    each capacity, floored at WEIGHT_FLOOR.
    """

    alpha: float
    beta: float

    @classmethod
    def from_usage(cls, usage: OrbitUsage, orbit: Orbit) -> "ResourceWeights":
        alpha = usage.energy / orbit.energy_capacity if orbit.energy_capacity > 0 else 1.0
        beta = usage.memory / orbit.memory_capacity if orbit.memory_capacity > 0 else 1.0
        return cls(
            alpha=min(1.0, max(WEIGHT_FLOOR, alpha)),
            beta=min(1.0, max(WEIGHT_FLOOR, beta)),
        )

    @classmethod
    def floor(cls) -> "ResourceWeights":
        return cls(alpha=WEIGHT_FLOOR, beta=WEIGHT_FLOOR)


@dataclass(frozen=True)
class ClusterCost:
    # energy and memory to finish two tasks separately
    en: float
    wn: float
    # energy and memory to finish them as one cluster-task
    ec: float
    wc: float


class Rejection(str, Enum):
    ANGLE = "ANGLE"
    DURATION = "DURATION"
    WORTH = "WORTH"


def resource_weights(schedule: Schedule, scenario: Scenario) -> Dict[int, ResourceWeights]:
    """
    Resource weights of every orbit given what a schedule already consumes.
    """
    usage = schedule_usage(schedule, scenario)
    return {
        orbit_id: ResourceWeights.from_usage(usage[orbit_id], scenario.orbit_params[orbit_id])
        for orbit_id in scenario.orbit_ids
    }


def update_resource_weights(
    weights: Mapping[int, ResourceWeights],
    schedule: Schedule,
    scenario: Scenario,
    orbit_ids: Iterable[int],
) -> Dict[int, ResourceWeights]:
    """
    Resource weights of a schedule that differs from the one weights were
    computed for only on orbit_ids.

    Parameters
    ----------
    weights : mapping of int to `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights of the previous schedule.
    schedule : `~sosp_core.model.items.Schedule`
        New schedule.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.
    orbit_ids : iterable of int
        Orbits whose lanes changed.

    Returns
    -------
    weights : dict
        Resource weights of every orbit, equal to resource_weights(schedule, scenario).
    """
    updated = dict(weights)
    for orbit_id in orbit_ids:
        orbit = scenario.orbit_params[orbit_id]
        lane = schedule.lane(orbit_id)
        energy, memory = orbit_usage(lane, orbit)
        usage = OrbitUsage(energy=energy, memory=memory, openings=len(lane))
        updated[orbit_id] = ResourceWeights.from_usage(usage, orbit)
    return updated


def resource_delta(
    window_i: Window,
    theta_i: float,
    window_h: Window,
    theta_h: float,
    window_u: Window,
    theta_u: float,
    orbit: Orbit,
) -> ClusterCost:
    """
    Energy and memory needed to finish two tasks separately and as a cluster.

    Parameters
    ----------
    window_i, window_h : (int, int)
        Time-windows of the two tasks.
    theta_i, theta_h : float
        Slewing angles (degrees) of the two tasks.
    window_u : (int, int)
        Merged time-window of the cluster-task.
    theta_u : float
        Execution angle (degrees) of the cluster-task.
    orbit : `~sosp_core.orbits.orbits.Orbit`
        Orbit both tasks are observed from.

    Returns
    -------
    cost : `~sosp_core.clustering.clustering.ClusterCost`
        Separate (en, wn) and clustered (ec, wc) consumption.
    """
    len_i = window_i[1] - window_i[0]
    len_h = window_h[1] - window_h[0]
    len_u = window_u[1] - window_u[0]
    v = orbit.slew_velocity
    return ClusterCost(
        en=orbit.obs_energy_rate * (len_i + len_h)
        + orbit.slew_energy_rate * (abs(theta_i) + abs(theta_h)) / v,
        wn=orbit.memory_rate * (len_i + len_h),
        ec=orbit.obs_energy_rate * len_u + orbit.slew_energy_rate * abs(theta_u) / v,
        wc=orbit.memory_rate * len_u,
    )


def worthwhile(cost: ClusterCost, weights: ResourceWeights) -> bool:
    """
    True if clustering consumes strictly fewer weighted resources than
    finishing the two tasks separately.
    """
    clustered = weights.alpha * cost.ec + weights.beta * cost.wc
    separate = weights.alpha * cost.en + weights.beta * cost.wn
    return clustered < separate


def try_cluster(
    item: ScheduledItem,
    opp: Opportunity,
    scenario: Scenario,
    weights: ResourceWeights,
    check_worth: bool = True,
) -> Union[ScheduledItem, Rejection]:
    """
    Try to merge an opportunity into a scheduled item.

    The existing item is treated as a single task with its current window and
    execution angle when deciding whether the merge saves resources.

    Parameters
    ----------
    item : `~sosp_core.model.items.ScheduledItem`
        Scheduled item (single task or cluster-task).
    opp : `~sosp_core.scenario.opportunities.Opportunity`
        Opportunity of the incoming task, on the item's orbit.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario providing weights, orbit parameters and the longest cluster duration.
    weights : `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights of the orbit.
    check_worth : bool, optional
        If False, skip the resource saving test and only check feasibility.

    Returns
    -------
    result : `~sosp_core.model.items.ScheduledItem` or `~sosp_core.clustering.clustering.Rejection`
        The merged item, or the reason the merge was rejected.

    Raises
    ------
    ValueError : If the opportunity is on another orbit or its task is already
        a member of the item.
    """
    if opp.orbit_id != item.orbit_id:
        raise ValueError(
            f"Cannot cluster an opportunity on orbit {opp.orbit_id} "
            f"into an item on orbit {item.orbit_id}."
        )
    if opp.task_id in item.member_task_ids:
        raise ValueError(f"Task {opp.task_id} is already a member of the item.")

    angle_range: AngleRange = intersect_ranges([item.angle_range, opp.angle_range])
    if angle_range is None:
        return Rejection.ANGLE

    window = merge_windows([item.window, opp.window])
    if window[1] - window[0] > scenario.max_cluster_duration:
        return Rejection.DURATION

    if check_worth:
        orbit = scenario.orbit_params[item.orbit_id]
        cost = resource_delta(
            opp.window, opp.mid_angle, item.window, item.exec_angle, window, midpoint(angle_range), orbit
        )
        if not worthwhile(cost, weights):
            return Rejection.WORTH

    return item.with_member(opp, scenario.weights)
