import logging

from ..model import Schedule, ScheduledItem, lane_is_feasible
from ..scenario import Scenario
from ..search import richness

logger = logging.getLogger(__name__)

__all__ = ["hpfs"]


def hpfs(scenario: Scenario) -> Schedule:
    """
    Highest priority first schedule.

    Tasks are taken in descending weight (ties by ascending id) and each is
    inserted alone at the feasible opportunity on the orbit with the most
    remaining resources (ties by orbit id, then window start). A task without a
    feasible opportunity is skipped. Scheduled tasks are never removed and tasks
    are never clustered.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to schedule.

    Returns
    -------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule.
    """
    schedule = Schedule.empty()
    for task_id in scenario.tasks_by_priority:
        weight = scenario.weights[task_id]
        best = None
        for opp in scenario.usable_by_task[task_id]:
            orbit = scenario.orbit_params[opp.orbit_id]
            lane = schedule.lane(opp.orbit_id)
            item = ScheduledItem.singleton(opp, weight)
            extended = tuple(sorted(lane + (item,), key=ScheduledItem.sort_key))
            if not lane_is_feasible(extended, orbit):
                continue
            key = (-richness(lane, orbit), opp.orbit_id, opp.start, opp.end)
            if best is None or key < best[0]:
                best = (key, item, extended)

        if best is not None:
            _, item, extended = best
            schedule = schedule.with_lane(item.orbit_id, extended)

    logger.debug(f"HPFS scheduled {schedule.n_tasks} of {scenario.n_tasks} tasks.")
    return schedule
