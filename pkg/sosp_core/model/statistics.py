from dataclasses import dataclass

import numpy as np

from ..scenario import Scenario
from .feasibility import setup_gap_ok
from .items import ScheduledItem

__all__ = ["ScenarioStatistics", "scenario_statistics"]


@dataclass(frozen=True)
class ScenarioStatistics:
    # number of targets
    n: int
    # number of targets owning at least one time-window
    en: int
    # number of time-windows
    tn: int
    # mean number of setup-time conflicts per opportunity
    mean_conflicts: float


def scenario_statistics(scenario: Scenario) -> ScenarioStatistics:
    """
    Describe how large and how congested a scenario is.

    Two opportunities of different tasks on the same orbit conflict when they
    cannot both be scheduled as singletons because of the setup-time constraint.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to describe.

    Returns
    -------
    statistics : `~sosp_core.model.statistics.ScenarioStatistics`
        Target, visible target and window counts, and the mean conflict count.
    """
    weights = scenario.weights
    conflicts = []
    for orbit_id, opps in scenario.opportunities_by_orbit.items():
        orbit = scenario.orbit_params[orbit_id]
        items = [ScheduledItem.singleton(opp, weights[opp.task_id]) for opp in opps]
        for i, item in enumerate(items):
            count = 0
            for j, other in enumerate(items):
                if i == j or other.member_task_ids == item.member_task_ids:
                    continue
                first, second = (item, other) if item.sort_key() <= other.sort_key() else (other, item)
                if not setup_gap_ok(first, second, orbit):
                    count += 1
            conflicts.append(count)

    en = sum(1 for opps in scenario.opportunities_by_task.values() if len(opps) > 0)
    return ScenarioStatistics(
        n=scenario.n_tasks,
        en=en,
        tn=len(scenario.opportunities),
        mean_conflicts=float(np.mean(conflicts)) if conflicts else 0.0,
    )
