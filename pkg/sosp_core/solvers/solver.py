import concurrent.futures
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Type

from ..model import Schedule
from ..scenario import Scenario
from ..search import RunTrace
from .utils import _iterate_chunks

logger = logging.getLogger(__name__)

__all__ = ["Solver", "ReplicaOutcome", "replica_worker"]


@dataclass(frozen=True)
class ReplicaOutcome:
    replica: int
    seed: int
    # None when the solver could not handle the scenario
    schedule: Optional[Schedule]
    wall_time: float

    @property
    def available(self) -> bool:
        return self.schedule is not None


def replica_worker(
    solver: "Solver", scenario: Scenario, replicas: Sequence[Tuple[int, int]]
) -> List[ReplicaOutcome]:
    return [solver._run_replica(scenario, replica, seed) for replica, seed in replicas]


class Solver(ABC):
    """
    Class for scheduling a scenario, once or as independent seeded replicas.
    Subclasses should implement the _solve method.

    Important: subclasses should be pickleable! As this class uses
    multiprocessing to run replicas in parallel. This means that subclasses
    should not have any unpickleable attributes.
    """

    #: Name used in result tables
    name: str = ""
    #: Exceptions meaning the scenario is out of the solver's reach
    unavailable_errors: Tuple[Type[Exception], ...] = ()

    @abstractmethod
    def _solve(self, scenario: Scenario, seed: int) -> Tuple[Schedule, Optional[RunTrace]]:
        """
        Schedule a scenario with one seed.

        THIS FUNCTION SHOULD BE DEFINED BY THE USER.
        """
        pass

    def solve(self, scenario: Scenario, seed: int = 0) -> Tuple[Schedule, Optional[RunTrace]]:
        """
        Schedule a scenario.

        Parameters
        ----------
        scenario : `~sosp_core.scenario.scenario.Scenario`
            Scenario to schedule.
        seed : int, optional
            Seed of the run. Deterministic solvers ignore it.

        Returns
        -------
        schedule : `~sosp_core.model.items.Schedule`
            Best schedule found.
        trace : `~sosp_core.search.trace.RunTrace` or None
            Iteration trace for annealing solvers, None otherwise.
        """
        return self._solve(scenario, seed)

    def _run_replica(self, scenario: Scenario, replica: int, seed: int) -> ReplicaOutcome:
        start = time.perf_counter()
        try:
            schedule, _ = self._solve(scenario, seed)
        except self.unavailable_errors as e:
            logger.warning(f"{self.name} is unavailable for replica {replica}: {e}")
            schedule = None
        return ReplicaOutcome(
            replica=replica,
            seed=seed,
            schedule=schedule,
            wall_time=time.perf_counter() - start,
        )

    def solve_replicas(
        self,
        scenario: Scenario,
        seeds: Sequence[int],
        chunk_size: int = 1,
        max_processes: Optional[int] = 1,
    ) -> List[ReplicaOutcome]:
        """
        Run one replica per seed.

        Parameters
        ----------
        scenario : `~sosp_core.scenario.scenario.Scenario`
            Scenario to schedule.
        seeds : sequence of int
            Seed of each replica; replica i runs with seeds[i].
        chunk_size : int, optional
            Number of replicas to send to each job.
        max_processes : int or None, optional
            Maximum number of processes to launch. If None then the number of
            processes will be equal to the number of cores on the machine. If 1
            then no multiprocessing will be used.

        Returns
        -------
        outcomes : list of `~sosp_core.solvers.solver.ReplicaOutcome`
            One outcome per seed, ordered by replica index whatever the order
            in which the workers finished.
        """
        replicas = list(enumerate(seeds))
        if max_processes is None or max_processes > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=max_processes) as executor:
                futures = []
                for chunk in _iterate_chunks(replicas, chunk_size):
                    futures.append(executor.submit(replica_worker, self, scenario, chunk))

                outcomes = []
                for future in concurrent.futures.as_completed(futures):
                    outcomes.extend(future.result())
        else:
            outcomes = replica_worker(self, scenario, replicas)

        outcomes.sort(key=lambda o: o.replica)
        logger.debug(f"{self.name} finished {len(outcomes)} replicas.")
        return outcomes
