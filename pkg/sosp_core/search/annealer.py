import dataclasses
import json
import logging
import math
import os
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from ..clustering import resource_weights, update_resource_weights
from ..constants import ANNEAL_DEFAULTS
from ..model import Schedule, objective
from ..scenario import Scenario
from .neighborhoods import ConflictIndex, Move, insert_task, insertion_removal, migration
from .selection import NeighborhoodStats, Structure, select_structure, update_probabilities
from .trace import RunTrace

logger = logging.getLogger(__name__)

__all__ = [
    "COUNTER_MODES",
    "AnnealParams",
    "temperature",
    "update_counter",
    "accept",
    "initial_solution",
    "run",
    "LoopSettings",
    "anneal_loop",
]

# "degrading": the bad-move counter grows on every proposal worse than the
# current solution. "accepted": only on accepted worse proposals.
COUNTER_MODES = ("degrading", "accepted")

# Tasks per tabu list slot
TASKS_PER_TABU_SLOT = 50
# Iterations per task when no iteration limit is given
ITERATIONS_PER_TASK = 200


@dataclass(frozen=True)
class AnnealParams:
    """
    Parameters of the adaptive annealing run.

    Parameters
    ----------
    lambda_min : float
        Lowest temperature, reached whenever the bad-move counter is 0.
    rho : float
        Temperature rising rate.
    delta : float
        Divisor of the bad-move counter. With delta = 1 the temperature is
        lambda_min + rho * ln(1 + r).
    eta : float
        Reaction factor of the structure probability update, in (0, 1].
    itr : int
        Iterations between structure probability updates.
    tabu_len : int, optional
        Tabu list capacity. Defaults to max(1, N // 50) for N tasks.
    max_itr : int, optional
        Number of iterations. Defaults to 200 * N for N tasks.
    rng_seed : int
        Seed of the run's random number generator.
    counter_mode : str
        One of COUNTER_MODES.
    pro_1 : float
        Initial execution probability of insertion and removal.
    """

    lambda_min: float = ANNEAL_DEFAULTS["lambda_min"]
    rho: float = ANNEAL_DEFAULTS["rho"]
    delta: float = ANNEAL_DEFAULTS["delta"]
    eta: float = ANNEAL_DEFAULTS["eta"]
    itr: int = ANNEAL_DEFAULTS["itr"]
    tabu_len: Optional[int] = None
    max_itr: Optional[int] = None
    rng_seed: int = 0
    counter_mode: str = "degrading"
    pro_1: float = ANNEAL_DEFAULTS["pro_1"]

    def __post_init__(self):
        if self.lambda_min <= 0:
            raise ValueError("lambda_min must be greater than 0.")
        if self.rho <= 0:
            raise ValueError("rho must be greater than 0.")
        if self.delta < 1:
            raise ValueError("delta must be at least 1.")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie within (0, 1].")
        if self.itr < 1:
            raise ValueError("itr must be at least 1.")
        if self.tabu_len is not None and self.tabu_len < 1:
            raise ValueError("tabu_len must be at least 1.")
        if self.max_itr is not None and self.max_itr < 0:
            raise ValueError("max_itr must be non-negative.")
        if self.counter_mode not in COUNTER_MODES:
            raise ValueError(f"counter_mode must be one of {COUNTER_MODES}.")
        if not 0 <= self.pro_1 <= 1:
            raise ValueError("pro_1 must lie within [0, 1].")

    def resolve(self, n_tasks: int) -> "AnnealParams":
        """
        Fill in the tabu list length and iteration limit for a scenario size.
        """
        tabu_len = self.tabu_len
        if tabu_len is None:
            tabu_len = max(1, n_tasks // TASKS_PER_TABU_SLOT)
        max_itr = self.max_itr
        if max_itr is None:
            max_itr = ITERATIONS_PER_TASK * n_tasks
        return dataclasses.replace(self, tabu_len=tabu_len, max_itr=max_itr)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnnealParams":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValueError(f"Unknown anneal parameter keys: {unknown}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: Union[str, os.PathLike]) -> "AnnealParams":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def temperature(r: int, params: AnnealParams) -> float:
    """
    Temperature for a bad-move counter: lambda_min + rho * ln(1 + r / delta).

    Parameters
    ----------
    r : int
        Bad-move counter (>= 0).
    params : `~sosp_core.search.annealer.AnnealParams`
        Supplies lambda_min, rho and delta.

    Returns
    -------
    lambda : float
        Temperature (>= lambda_min).
    """
    return params.lambda_min + params.rho * math.log1p(r / params.delta)


def update_counter(r: int, delta_f: float, accepted: bool, mode: str = "degrading") -> int:
    """
    Update the bad-move counter after a proposal.

    An improving proposal resets the counter and an equal one leaves it
    unchanged. A worse proposal increments it, in "accepted" mode only if the
    proposal was accepted.
    """
    if delta_f > 0:
        return 0
    if delta_f == 0:
        return r
    if mode == "accepted" and not accepted:
        return r
    return r + 1


def accept(delta_f: float, lam: float, rng: np.random.Generator) -> bool:
    """
    Metropolis acceptance under maximization.

    Parameters
    ----------
    delta_f : float
        Profit of the proposal minus profit of the current solution.
    lam : float
        Temperature (> 0).
    rng : `~numpy.random.Generator`
        Random number generator. One draw is made unless delta_f > 0.

    Returns
    -------
    accepted : bool
        True if delta_f > 0, otherwise True when exp(delta_f / lam) exceeds a
        uniform draw from [0, 1).
    """
    if delta_f > 0:
        return True
    return math.exp(delta_f / lam) > rng.random()


def initial_solution(
    scenario: Scenario,
    params: Optional[AnnealParams],
    rng: np.random.Generator,
    allow_clustering: bool = True,
) -> Schedule:
    """
    Greedy construction: every task, in descending weight, is inserted with the
    insertion and removal procedure and the result is kept only if it raises
    the profit.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to schedule.
    params : `~sosp_core.search.annealer.AnnealParams` or None
        Parameters of the run the solution is built for, if any.
    rng : `~numpy.random.Generator`
        Random number generator used to break ties.
    allow_clustering : bool, optional
        If False, tasks are only inserted alone.

    Returns
    -------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule.
    """
    schedule = Schedule.empty()
    profit = 0
    weights = resource_weights(schedule, scenario)
    for task_id in scenario.tasks_by_priority:
        opps = scenario.usable_by_task[task_id]
        if not opps:
            continue
        candidate, _ = insert_task(schedule, task_id, opps, scenario, weights, rng, allow_clustering)
        changed = schedule.differing_orbits(candidate)
        candidate_profit = profit + _profit_change(schedule, candidate, changed)
        if candidate_profit > profit:
            weights = update_resource_weights(weights, candidate, scenario, changed)
            schedule, profit = candidate, candidate_profit
    logger.debug(f"Initial solution schedules {schedule.n_tasks} tasks (profit={profit}).")
    return schedule


def _profit_change(before: Schedule, after: Schedule, orbit_ids: Iterable[int]) -> int:
    return sum(after.lane_weight(j) - before.lane_weight(j) for j in orbit_ids)


@dataclass(frozen=True)
class LoopSettings:
    max_itr: int
    # temperature from (iteration, bad-move counter)
    temperature: Callable[[int, int], float]
    counter_mode: str
    # None disables the tabu list
    tabu_len: Optional[int]
    # None keeps the structure probabilities fixed
    itr: Optional[int]
    eta: float
    pro_1: float
    allow_clustering: bool


def anneal_loop(
    scenario: Scenario,
    initial: Schedule,
    rng: np.random.Generator,
    settings: LoopSettings,
) -> Tuple[Schedule, RunTrace]:
    current = best = initial
    f_current = f_best = objective(initial, scenario)
    weights = resource_weights(initial, scenario)
    index = ConflictIndex(scenario)
    r = 0
    tabu: deque = deque(maxlen=settings.tabu_len or 1)
    stats = NeighborhoodStats.from_probabilities(settings.pro_1, 1.0 - settings.pro_1)

    rows: Dict[str, list] = {
        "g": [],
        "temperature": [],
        "profit_current": [],
        "profit_best": [],
        "structure": [],
        "accepted": [],
        "pro_1": [],
    }
    for g in range(settings.max_itr):
        lam = settings.temperature(g, r)
        structure = select_structure(stats, rng)
        pro_1 = stats.probs[0]

        blocked = set(tabu) if settings.tabu_len else set()
        if structure == Structure.MIGRATE:
            move: Optional[Move] = migration(
                current, scenario, blocked, weights, rng, settings.allow_clustering, index
            )
        else:
            move = insertion_removal(
                current, scenario, blocked, weights, rng, settings.allow_clustering
            )

        accepted = False
        if move is None:
            stats = stats.record(structure, improved=False)
        else:
            changed = current.differing_orbits(move.candidate)
            f_candidate = f_current + _profit_change(current, move.candidate, changed)
            delta_f = f_candidate - f_current
            accepted = accept(delta_f, lam, rng)
            r = update_counter(r, delta_f, accepted, settings.counter_mode)
            stats = stats.record(structure, improved=delta_f > 0)
            if accepted:
                weights = update_resource_weights(weights, move.candidate, scenario, changed)
                current, f_current = move.candidate, f_candidate
                if settings.tabu_len:
                    for task_id in move.removed_task_ids:
                        if task_id not in tabu:
                            tabu.append(task_id)
                if f_current > f_best:
                    best, f_best = current, f_current

        rows["g"].append(g)
        rows["temperature"].append(lam)
        rows["profit_current"].append(f_current)
        rows["profit_best"].append(f_best)
        rows["structure"].append(int(structure))
        rows["accepted"].append(accepted)
        rows["pro_1"].append(pro_1)

        if settings.itr is not None and (g + 1) % settings.itr == 0:
            stats = update_probabilities(stats, settings.eta)

    if settings.max_itr > 0:
        trace = RunTrace.from_kwargs(**rows)
    else:
        trace = RunTrace.empty()
    return best, trace


def run(
    scenario: Scenario, params: AnnealParams, allow_clustering: bool = True
) -> Tuple[Schedule, RunTrace]:
    """
    Adaptive simulated annealing with dynamic task clustering.

    Starting from the greedy initial solution, each iteration picks a
    neighborhood structure by roulette wheel, builds a candidate and accepts it
    with the Metropolis rule at a temperature driven by the bad-move counter.
    Tasks removed by an accepted candidate enter a FIFO tabu list and may not be
    re-inserted while they remain in it. Structure probabilities are updated
    from their success ratios every itr iterations.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario to schedule. It is validated first.
    params : `~sosp_core.search.annealer.AnnealParams`
        Run parameters.
    allow_clustering : bool, optional
        If False, tasks are never clustered (the non-clustering variant).

    Returns
    -------
    best : `~sosp_core.model.items.Schedule`
        Best schedule found.
    trace : `~sosp_core.search.trace.RunTrace`
        One row per iteration.

    Raises
    ------
    ScenarioValidationError : If the scenario breaks an invariant.
    """
    scenario.validate()
    params = params.resolve(scenario.n_tasks)
    rng = np.random.default_rng(params.rng_seed)

    initial = initial_solution(scenario, params, rng, allow_clustering=allow_clustering)
    logger.info(f"Initial profit {objective(initial, scenario)} on {scenario!r}.")

    settings = LoopSettings(
        max_itr=params.max_itr,
        temperature=lambda g, r: temperature(r, params),
        counter_mode=params.counter_mode,
        tabu_len=params.tabu_len,
        itr=params.itr,
        eta=params.eta,
        pro_1=params.pro_1,
        allow_clustering=allow_clustering,
    )
    best, trace = anneal_loop(scenario, initial, rng, settings)
    logger.info(f"Best profit {objective(best, scenario)} after {params.max_itr} iterations.")
    return best, trace
