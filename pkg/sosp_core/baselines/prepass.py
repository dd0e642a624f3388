import logging
from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from ..clustering import Rejection, ResourceWeights, try_cluster
from ..model import Schedule, ScheduledItem
from ..scenario import Opportunities, Opportunity, Scenario, Tasks

logger = logging.getLogger(__name__)

__all__ = ["PrepassResult", "static_cluster_prepass"]


@dataclass(frozen=True)
class PrepassResult:
    """
    Scenario in which frozen clusters replace the tasks they merge.

    Attributes
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Transformed scenario. Each cluster is a task with a single opportunity.
    members : dict
        Source opportunities keyed by cluster task id.
    """

    scenario: Scenario
    members: Dict[int, Tuple[Opportunity, ...]]

    def expand(self, schedule: Schedule, original: Scenario) -> Schedule:
        """
        Map a schedule of the transformed scenario back onto the original one.

        Every item holding a cluster task is rebuilt from the cluster's source
        opportunities, which reproduces its window and execution angle.

        Parameters
        ----------
        schedule : `~sosp_core.model.items.Schedule`
            Schedule of the transformed scenario.
        original : `~sosp_core.scenario.scenario.Scenario`
            Scenario the prepass was applied to.

        Returns
        -------
        schedule : `~sosp_core.model.items.Schedule`
            Schedule of the original scenario.
        """
        items = []
        for _, _, item in schedule.items():
            if not any(task_id in self.members for task_id in item.member_task_ids):
                items.append(item)
                continue
            sources: List[Opportunity] = []
            for opp in item.members:
                sources.extend(self.members.get(opp.task_id, (opp,)))
            items.append(ScheduledItem.from_members(sources, original.weights))
        return Schedule.from_items(items)


def static_cluster_prepass(scenario: Scenario) -> PrepassResult:
    """
    Cluster tasks before scheduling.

    Each orbit's opportunities are scanned in window start order. An opportunity
    whose task is not clustered yet is paired with the first later opportunity on
    the same orbit that it can be clustered with (angle ranges intersect, merged
    window no longer than the longest cluster duration, resources saved at the
    floor weights of an empty orbit). Both tasks are replaced by one cluster task
    whose weight is their sum and whose only opportunity is the merged one; the
    other opportunities of the two tasks are dropped.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to transform.

    Returns
    -------
    result : `~sosp_core.baselines.prepass.PrepassResult`
        Transformed scenario and the source opportunities of each cluster task.
    """
    weights = ResourceWeights.floor()
    clustered: Set[int] = set()
    clusters: List[ScheduledItem] = []

    for orbit_id in scenario.orbit_ids:
        opps = scenario.opportunities_by_orbit[orbit_id]
        for i, first in enumerate(opps):
            if first.task_id in clustered:
                continue
            seed = ScheduledItem.singleton(first, scenario.weights[first.task_id])
            for second in opps[i + 1 :]:
                if second.start - first.start > scenario.max_cluster_duration:
                    break
                if second.task_id in clustered or second.task_id == first.task_id:
                    continue
                merged = try_cluster(seed, second, scenario, weights)
                if isinstance(merged, Rejection):
                    continue
                clusters.append(merged)
                clustered.update(merged.member_task_ids)
                break

    if not clusters:
        return PrepassResult(scenario=scenario, members={})

    next_id = max(scenario.weights) + 1
    members: Dict[int, Tuple[Opportunity, ...]] = {}
    task_ids, task_weights = [], []
    for task in scenario.task_records:
        if task.task_id not in clustered:
            task_ids.append(task.task_id)
            task_weights.append(task.weight)
    opportunities = [opp for opp in scenario.opportunity_records if opp.task_id not in clustered]

    for k, cluster in enumerate(clusters):
        cluster_id = next_id + k
        members[cluster_id] = cluster.members
        task_ids.append(cluster_id)
        task_weights.append(cluster.weight)
        opportunities.append(
            Opportunity(
                task_id=cluster_id,
                orbit_id=cluster.orbit_id,
                start=cluster.start,
                end=cluster.end,
                angle_lo=cluster.angle_range[0],
                angle_hi=cluster.angle_range[1],
            )
        )

    transformed = Scenario(
        tasks=Tasks.from_kwargs(task_id=task_ids, weight=task_weights),
        orbits=scenario.orbits,
        opportunities=Opportunities.from_records(opportunities),
        horizon_seconds=scenario.horizon_seconds,
        max_cluster_duration=scenario.max_cluster_duration,
    )
    logger.debug(
        f"Static clustering merged {2 * len(clusters)} tasks into {len(clusters)} clusters."
    )
    return PrepassResult(scenario=transformed, members=members)
