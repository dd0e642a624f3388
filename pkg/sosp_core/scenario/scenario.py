import logging
from functools import cached_property
from typing import Dict, List, Tuple

from ..orbits import Orbit, Orbits
from .opportunities import Opportunities, Opportunity
from .tasks import Tasks, TaskSpec

logger = logging.getLogger(__name__)

__all__ = ["Scenario", "ScenarioValidationError"]


class ScenarioValidationError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class Scenario:
    """
    An immutable observation scheduling problem instance: tasks with their profits,
    orbits with their resources, and the observation opportunities linking them.

    The tables are the canonical storage. Row-wise lookups used by the schedulers
    are derived from them on first access and cached.

    Parameters
    ----------
    tasks : `~sosp_core.scenario.tasks.Tasks`
        Tasks (targets) to be observed.
    orbits : `~sosp_core.orbits.orbits.Orbits`
        Orbits and their resource parameters.
    opportunities : `~sosp_core.scenario.opportunities.Opportunities`
        Visibility windows and slewing-angle ranges of tasks from orbits.
    horizon_seconds : int
        Length of the scheduling horizon in seconds.
    max_cluster_duration : float
        Longest duration (seconds) of a cluster-task.
    """

    def __init__(
        self,
        tasks: Tasks,
        orbits: Orbits,
        opportunities: Opportunities,
        horizon_seconds: int,
        max_cluster_duration: float,
    ):
        self.tasks = tasks
        self.orbits = orbits
        self.opportunities = opportunities
        self.horizon_seconds = int(horizon_seconds)
        self.max_cluster_duration = float(max_cluster_duration)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.horizon_seconds == other.horizon_seconds
            and self.max_cluster_duration == other.max_cluster_duration
            and self.tasks.table.equals(other.tasks.table)
            and self.orbits.table.equals(other.orbits.table)
            and self.opportunities.table.equals(other.opportunities.table)
        )

    def __repr__(self) -> str:
        return (
            f"Scenario(tasks={len(self.tasks)}, orbits={len(self.orbits)}, "
            f"opportunities={len(self.opportunities)}, horizon_seconds={self.horizon_seconds})"
        )

    @property
    def n_tasks(self) -> int:
        return len(self.tasks)

    @cached_property
    def task_records(self) -> List[TaskSpec]:
        return self.tasks.to_records()

    @cached_property
    def weights(self) -> Dict[int, int]:
        return {task.task_id: task.weight for task in self.task_records}

    @cached_property
    def orbit_params(self) -> Dict[int, Orbit]:
        return self.orbits.to_dict()

    @cached_property
    def orbit_ids(self) -> List[int]:
        return sorted(self.orbit_params)

    @cached_property
    def opportunity_records(self) -> List[Opportunity]:
        return self.opportunities.to_records()

    @cached_property
    def opportunities_by_task(self) -> Dict[int, Tuple[Opportunity, ...]]:
        by_task: Dict[int, List[Opportunity]] = {t.task_id: [] for t in self.task_records}
        for opp in self.opportunity_records:
            by_task.setdefault(opp.task_id, []).append(opp)
        return {
            task_id: tuple(sorted(opps, key=lambda o: (o.orbit_id, o.start, o.end)))
            for task_id, opps in by_task.items()
        }

    @cached_property
    def opportunities_by_orbit(self) -> Dict[int, Tuple[Opportunity, ...]]:
        by_orbit: Dict[int, List[Opportunity]] = {j: [] for j in self.orbit_ids}
        for opp in self.opportunity_records:
            by_orbit.setdefault(opp.orbit_id, []).append(opp)
        return {
            orbit_id: tuple(sorted(opps, key=lambda o: (o.start, o.end, o.task_id)))
            for orbit_id, opps in by_orbit.items()
        }

    @cached_property
    def opportunity_starts_by_orbit(self) -> Dict[int, List[int]]:
        # Parallel to opportunities_by_orbit, for bisecting by window start
        return {
            orbit_id: [opp.start for opp in opps]
            for orbit_id, opps in self.opportunities_by_orbit.items()
        }

    @cached_property
    def max_window_length(self) -> int:
        return max((opp.length for opp in self.opportunity_records), default=0)

    @cached_property
    def max_abs_angle(self) -> float:
        return max(
            (max(abs(opp.angle_lo), abs(opp.angle_hi)) for opp in self.opportunity_records),
            default=0.0,
        )

    @cached_property
    def usable_by_task(self) -> Dict[int, Tuple[Opportunity, ...]]:
        """
        Opportunities that fit their orbit's energy and memory capacities when
        observed on their own. Other opportunities can never be scheduled.
        """
        usable = {}
        for task_id, opps in self.opportunities_by_task.items():
            keep = []
            for opp in opps:
                orbit = self.orbit_params[opp.orbit_id]
                if (
                    orbit.obs_energy_rate * opp.length <= orbit.energy_capacity
                    and orbit.memory_rate * opp.length <= orbit.memory_capacity
                    and orbit.max_openings >= 1
                ):
                    keep.append(opp)
            usable[task_id] = tuple(keep)
        return usable

    @cached_property
    def tasks_by_priority(self) -> List[int]:
        """
        Task ids sorted by descending weight, ties by ascending id.
        """
        return [
            t.task_id for t in sorted(self.task_records, key=lambda t: (-t.weight, t.task_id))
        ]

    def validate(self) -> None:
        """
        Check every scenario invariant.

        Raises
        ------
        ScenarioValidationError : If an invariant does not hold. The error names
            the offending field.
        """
        if self.max_cluster_duration <= 0:
            raise ScenarioValidationError(
                "meta.max_cluster_duration", "must be greater than 0"
            )
        if self.horizon_seconds <= 0:
            raise ScenarioValidationError("meta.horizon_seconds", "must be greater than 0")

        task_ids = set()
        for i, task in enumerate(self.task_records):
            if task.task_id in task_ids:
                raise ScenarioValidationError(
                    f"tasks[{i}].id", f"duplicate task id {task.task_id}"
                )
            task_ids.add(task.task_id)
            if task.weight < 1:
                raise ScenarioValidationError(f"tasks[{i}].weight", "must be at least 1")

        orbit_ids = set()
        for i, orbit in enumerate(self.orbits.to_records()):
            if orbit.orbit_id in orbit_ids:
                raise ScenarioValidationError(
                    f"orbits[{i}].id", f"duplicate orbit id {orbit.orbit_id}"
                )
            orbit_ids.add(orbit.orbit_id)
            for name in [
                "memory_capacity",
                "memory_rate",
                "energy_capacity",
                "obs_energy_rate",
                "slew_energy_rate",
                "setup_time",
            ]:
                if getattr(orbit, name) < 0:
                    raise ScenarioValidationError(f"orbits[{i}].{name}", "must be non-negative")
            if orbit.slew_velocity <= 0:
                raise ScenarioValidationError(
                    f"orbits[{i}].slew_velocity", "must be greater than 0"
                )
            if orbit.max_openings < 1:
                raise ScenarioValidationError(f"orbits[{i}].max_openings", "must be at least 1")

        for i, opp in enumerate(self.opportunity_records):
            name = f"opportunities[{i}]"
            if opp.task_id not in task_ids:
                raise ScenarioValidationError(
                    f"{name}.task_id", f"unknown task id {opp.task_id}"
                )
            if opp.orbit_id not in orbit_ids:
                raise ScenarioValidationError(
                    f"{name}.orbit_id", f"unknown orbit id {opp.orbit_id}"
                )
            if opp.start >= opp.end:
                raise ScenarioValidationError(
                    f"{name}.window", f"start {opp.start} is not before end {opp.end}"
                )
            if opp.angle_lo > opp.angle_hi:
                raise ScenarioValidationError(
                    f"{name}.angle_range", f"{opp.angle_lo} is greater than {opp.angle_hi}"
                )
        logger.debug(f"Validated {self!r}.")
