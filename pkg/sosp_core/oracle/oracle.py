import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

from ..clustering import Rejection, ResourceWeights, try_cluster
from ..model import Schedule, ScheduledItem, lane_is_feasible
from ..model.feasibility import CAPACITY_TOLERANCE
from ..orbits import Orbit
from ..scenario import Scenario

logger = logging.getLogger(__name__)

__all__ = ["OracleLimits", "OracleLimitError", "exact_solve"]


class OracleLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_tasks: int = 12
    max_opportunities: int = 30
    # partial schedules visited before giving up
    node_budget: int = 10**8

    def __post_init__(self):
        if self.max_tasks < 1 or self.max_opportunities < 1 or self.node_budget < 1:
            raise ValueError("Oracle limits must be positive.")


def _relaxed_ok(lane: Tuple[ScheduledItem, ...], orbit: Orbit) -> bool:
    # Ignores slewing, which can change as clusters grow. Every check here can
    # only get worse as tasks are added, so a failure is final.
    if len(lane) > orbit.max_openings:
        return False
    observed = sum(item.length for item in lane)
    if orbit.memory_rate * observed > orbit.memory_capacity + CAPACITY_TOLERANCE:
        return False
    if orbit.obs_energy_rate * observed > orbit.energy_capacity + CAPACITY_TOLERANCE:
        return False
    for prev, next in zip(lane[:-1], lane[1:]):
        if next.start - prev.end < orbit.setup_time - CAPACITY_TOLERANCE:
            return False
    return True


def exact_solve(
    scenario: Scenario,
    limits: OracleLimits = OracleLimits(),
    allow_clustering: bool = True,
) -> Tuple[int, Schedule]:
    """
    Find a schedule of maximum profit by depth-first branch and bound.

    Tasks are decided in descending weight. Each task is left out, inserted
    alone at one of its opportunities, or merged into a scheduled item on the
    same orbit whose angle range it intersects without the merged window
    exceeding the longest cluster duration. The resource saving test used by the
    heuristics is not applied. A branch is pruned when its profit plus the
    weight of every undecided task cannot beat the best schedule found.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to solve.
    limits : `~sosp_core.oracle.oracle.OracleLimits`, optional
        Largest instance and search effort accepted.
    allow_clustering : bool, optional
        If False, tasks are only scheduled alone.

    Returns
    -------
    profit : int
        Optimal profit.
    schedule : `~sosp_core.model.items.Schedule`
        One optimal schedule.

    Raises
    ------
    OracleLimitError : If the scenario exceeds the limits or the node budget
        runs out.
    """
    scenario.validate()
    if scenario.n_tasks > limits.max_tasks:
        raise OracleLimitError(f"{scenario.n_tasks} tasks exceed the limit of {limits.max_tasks}.")
    if len(scenario.opportunities) > limits.max_opportunities:
        raise OracleLimitError(
            f"{len(scenario.opportunities)} opportunities exceed the limit of "
            f"{limits.max_opportunities}."
        )

    weights = scenario.weights
    order = [t for t in scenario.tasks_by_priority if scenario.usable_by_task[t]]
    remaining = [0] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        remaining[k] = remaining[k + 1] + weights[order[k]]

    # Depth after which no undecided task can touch an orbit
    last_touch: Dict[int, int] = {}
    for k, task_id in enumerate(order):
        for opp in scenario.usable_by_task[task_id]:
            last_touch[opp.orbit_id] = k

    def lane_ok(lane: Tuple[ScheduledItem, ...], orbit: Orbit, k: int) -> bool:
        if last_touch[orbit.orbit_id] <= k:
            return lane_is_feasible(lane, orbit)
        return _relaxed_ok(lane, orbit)

    def children(schedule: Schedule, k: int) -> Iterator[Schedule]:
        task_id = order[k]
        for opp in scenario.usable_by_task[task_id]:
            orbit = scenario.orbit_params[opp.orbit_id]
            lane = schedule.lane(opp.orbit_id)

            single = ScheduledItem.singleton(opp, weights[task_id])
            extended = tuple(sorted(lane + (single,), key=ScheduledItem.sort_key))
            if lane_ok(extended, orbit, k):
                yield schedule.with_lane(opp.orbit_id, extended)

            if not allow_clustering:
                continue
            for position, item in enumerate(lane):
                merged = try_cluster(item, opp, scenario, ResourceWeights.floor(), check_worth=False)
                if isinstance(merged, Rejection):
                    continue
                replaced = lane[:position] + (merged,) + lane[position + 1 :]
                replaced = tuple(sorted(replaced, key=ScheduledItem.sort_key))
                if lane_ok(replaced, orbit, k):
                    yield schedule.with_lane(opp.orbit_id, replaced)

    best: List = [0, Schedule.empty()]
    nodes = 0

    def search(k: int, schedule: Schedule, profit: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > limits.node_budget:
            raise OracleLimitError(f"Node budget of {limits.node_budget} exhausted.")
        if profit + remaining[k] <= best[0]:
            return
        if k == len(order):
            if all(
                lane_is_feasible(lane, scenario.orbit_params[j]) for j, lane in schedule.lanes.items()
            ):
                best[0], best[1] = profit, schedule
            return
        for child in children(schedule, k):
            search(k + 1, child, profit + weights[order[k]])
        search(k + 1, schedule, profit)

    search(0, Schedule.empty(), 0)
    logger.debug(f"Exact search visited {nodes} nodes; optimum {best[0]}.")
    return best[0], best[1]
