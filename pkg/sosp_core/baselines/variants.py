import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..model import Schedule, objective
from ..scenario import Scenario
from ..search import AnnealParams, LoopSettings, RunTrace, anneal_loop, initial_solution, run
from .prepass import static_cluster_prepass

logger = logging.getLogger(__name__)

__all__ = ["VariantMode", "ClassicSAParams", "run_variant", "classic_sa"]


class VariantMode(str, Enum):
    # clusters formed and dissolved during the search
    DTC = "DTC"
    # clusters frozen by a prepass
    STC = "STC"
    # no clustering
    NONTC = "NONTC"


def run_variant(
    scenario: Scenario, mode: VariantMode, params: AnnealParams
) -> Tuple[Schedule, RunTrace]:
    """
    Run adaptive annealing with dynamic, static or no task clustering.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to schedule.
    mode : `~sosp_core.baselines.variants.VariantMode`
        Clustering strategy.
    params : `~sosp_core.search.annealer.AnnealParams`
        Run parameters. Defaults that depend on the task count are resolved
        against the given scenario in every mode.

    Returns
    -------
    best : `~sosp_core.model.items.Schedule`
        Best schedule found, expressed in the tasks of the given scenario.
    trace : `~sosp_core.search.trace.RunTrace`
        One row per iteration.
    """
    mode = VariantMode(mode)
    if mode == VariantMode.DTC:
        return run(scenario, params)

    params = params.resolve(scenario.n_tasks)
    if mode == VariantMode.NONTC:
        return run(scenario, params, allow_clustering=False)

    scenario.validate()
    prepass = static_cluster_prepass(scenario)
    best, trace = run(prepass.scenario, params, allow_clustering=False)
    return prepass.expand(best, scenario), trace


@dataclass(frozen=True)
class ClassicSAParams:
    """
    Parameters of simulated annealing with geometric cooling.

    Parameters
    ----------
    lambda_0 : float
        Starting temperature.
    gamma : float
        Cooling factor in (0, 1]; the temperature of iteration g is lambda_0 * gamma**g.
    max_itr : int, optional
        Number of iterations. Defaults to 200 * N for N tasks.
    rng_seed : int
        Seed of the run's random number generator.
    """

    lambda_0: float = 5.0
    gamma: float = 0.999
    max_itr: Optional[int] = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.lambda_0 <= 0:
            raise ValueError("lambda_0 must be greater than 0.")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie within (0, 1].")
        if self.max_itr is not None and self.max_itr < 0:
            raise ValueError("max_itr must be non-negative.")


def classic_sa(scenario: Scenario, params: ClassicSAParams) -> Tuple[Schedule, RunTrace]:
    """
    Simulated annealing with geometric cooling, fixed equal structure
    probabilities, no tabu list and no clustering.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to schedule. It is validated first.
    params : `~sosp_core.baselines.variants.ClassicSAParams`
        Run parameters.

    Returns
    -------
    best : `~sosp_core.model.items.Schedule`
        Best schedule found.
    trace : `~sosp_core.search.trace.RunTrace`
        One row per iteration.
    """
    scenario.validate()
    max_itr = params.max_itr
    if max_itr is None:
        max_itr = AnnealParams().resolve(scenario.n_tasks).max_itr
    rng = np.random.default_rng(params.rng_seed)

    initial = initial_solution(scenario, None, rng, allow_clustering=False)
    settings = LoopSettings(
        max_itr=max_itr,
        temperature=lambda g, r: params.lambda_0 * params.gamma**g,
        counter_mode="degrading",
        tabu_len=None,
        itr=None,
        eta=1.0,
        pro_1=0.5,
        allow_clustering=False,
    )
    best, trace = anneal_loop(scenario, initial, rng, settings)
    logger.info(f"Classic SA best profit {objective(best, scenario)} after {max_itr} iterations.")
    return best, trace
