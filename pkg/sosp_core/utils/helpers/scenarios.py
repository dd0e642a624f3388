from importlib.resources import files
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from ...constants import DEFAULTS, S_P_DAY
from ...orbits import Orbits
from ...scenario import Opportunities, Opportunity, Scenario, Tasks, load_scenario


def make_opportunity(
    task_id: int,
    orbit_id: int = 0,
    window: Tuple[int, int] = (0, 10),
    angle_range: Tuple[float, float] = (0.0, 0.0),
) -> Opportunity:
    return Opportunity(
        task_id=task_id,
        orbit_id=orbit_id,
        start=window[0],
        end=window[1],
        angle_lo=float(angle_range[0]),
        angle_hi=float(angle_range[1]),
    )


def make_scenario(
    weights: Mapping[int, int],
    opportunities: Sequence[Opportunity],
    num_orbits: int = 1,
    horizon_seconds: int = S_P_DAY,
    max_cluster_duration: float = DEFAULTS.MAX_CLUSTER_DURATION,
    **orbit_params,
) -> Scenario:
    """
    Returns a `~sosp_core.scenario.scenario.Scenario` built from task weights
    and opportunities. Orbits are numbered 0 to num_orbits - 1 and share the
    default resource parameters.

    Parameters
    ----------
    weights : mapping of int to int
        Task weights by task id.
    opportunities : sequence of `~sosp_core.scenario.opportunities.Opportunity`
        Opportunities of the tasks.
    num_orbits : int, optional
        Number of orbits.
    horizon_seconds : int, optional
        Length of the horizon.
    max_cluster_duration : float, optional
        Longest duration of a cluster-task.
    **orbit_params
        Resource parameters that replace the defaults on every orbit.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario (not validated).
    """
    task_ids = sorted(weights)
    if task_ids:
        tasks = Tasks.from_kwargs(task_id=task_ids, weight=[weights[t] for t in task_ids])
    else:
        tasks = Tasks.empty()
    return Scenario(
        tasks=tasks,
        orbits=Orbits.from_defaults(num_orbits, **orbit_params),
        opportunities=Opportunities.from_records(list(opportunities)),
        horizon_seconds=horizon_seconds,
        max_cluster_duration=max_cluster_duration,
    )


def make_random_scenario(
    num_tasks: int = 10,
    num_orbits: int = 2,
    seed: int = 0,
    span: int = 600,
    max_opportunities: Optional[int] = None,
    **orbit_params,
) -> Scenario:
    """
    Returns a small random `~sosp_core.scenario.scenario.Scenario` with
    crowded windows, so that tasks compete for setup time and can often be
    clustered.

    Parameters
    ----------
    num_tasks : int, optional
        Number of tasks.
    num_orbits : int, optional
        Number of orbits.
    seed : int, optional
        Seed of the random number generator.
    span : int, optional
        Windows start within [0, span) seconds.
    max_opportunities : int, optional
        Upper bound on the total number of opportunities. Tasks keep at least
        one opportunity each while the bound allows.
    **orbit_params
        Resource parameters that replace the defaults on every orbit.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Valid scenario.
    """
    rng = np.random.default_rng(seed)
    weights = {t: int(rng.integers(1, 11)) for t in range(num_tasks)}

    opportunities = []
    for task_id in range(num_tasks):
        for _ in range(int(rng.integers(1, 3))):
            if max_opportunities is not None and len(opportunities) >= max_opportunities:
                break
            start = int(rng.integers(0, span))
            length = int(rng.integers(5, 31))
            center = float(rng.uniform(-20.0, 20.0))
            halfwidth = float(rng.uniform(2.0, 6.0))
            opportunities.append(
                make_opportunity(
                    task_id,
                    orbit_id=int(rng.integers(0, num_orbits)),
                    window=(start, start + length),
                    angle_range=(round(center - halfwidth, 6), round(center + halfwidth, 6)),
                )
            )
    return make_scenario(weights, opportunities, num_orbits=num_orbits, **orbit_params)


def load_minimal_scenario() -> Scenario:
    """
    Returns the scenario stored in minimal_scenario.json: one task of weight 8
    with one opportunity on one orbit.
    """
    return load_scenario(files("sosp_core.utils.helpers.data").joinpath("minimal_scenario.json"))
