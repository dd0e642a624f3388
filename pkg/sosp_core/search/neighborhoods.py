import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..clustering import Rejection, ResourceWeights, try_cluster
from ..constants import WEIGHT_FLOOR
from ..model import (
    Schedule,
    ScheduledItem,
    lane_is_feasible,
    orbit_usage,
    setup_gap_ok,
    slew_time,
)
from ..model.feasibility import CAPACITY_TOLERANCE
from ..orbits import Orbit
from ..scenario import Opportunity, Scenario
from .selection import Structure

logger = logging.getLogger(__name__)

__all__ = [
    "Move",
    "RepairError",
    "richness",
    "insert_task",
    "insertion_removal",
    "migration",
    "ConflictIndex",
    "conflict_counts",
    "repair",
]

# Richness values closer than this are treated as ties
RICHNESS_TOLERANCE = 1e-12

# End of a cluster a component is removed from
_FIRST = "first"
_LAST = "last"


class RepairError(RuntimeError):
    pass


@dataclass(frozen=True)
class Move:
    """
    A candidate schedule produced by one neighborhood structure, and the tasks
    of the previous schedule that it no longer contains.
    """

    kind: Structure
    candidate: Schedule
    removed_task_ids: Tuple[int, ...]


def _weights_for(weights: Mapping[int, ResourceWeights], orbit_id: int) -> ResourceWeights:
    return weights.get(orbit_id, ResourceWeights.floor())


def richness(lane: Sequence[ScheduledItem], orbit: Orbit) -> float:
    """
    Remaining share of an orbit's energy plus remaining share of its memory.
    """
    energy, memory = orbit_usage(lane, orbit)
    value = 0.0
    if orbit.energy_capacity > 0:
        value += (orbit.energy_capacity - energy) / orbit.energy_capacity
    if orbit.memory_capacity > 0:
        value += (orbit.memory_capacity - memory) / orbit.memory_capacity
    return value


def _richest(
    schedule: Schedule, scenario: Scenario, orbit_ids: Iterable[int], rng: np.random.Generator
) -> int:
    orbit_ids = sorted(set(orbit_ids))
    values = [richness(schedule.lane(j), scenario.orbit_params[j]) for j in orbit_ids]
    best = max(values)
    tied = [j for j, v in zip(orbit_ids, values) if v >= best - RICHNESS_TOLERANCE]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def _singleton_conflicts(item: ScheduledItem, opp: Opportunity, orbit: Orbit) -> bool:
    # Same ordering as ScheduledItem.sort_key
    if (opp.start, opp.end) >= (item.start, item.end):
        gap = opp.start - item.end
    else:
        gap = item.start - opp.end
    required = orbit.setup_time + slew_time(item.exec_angle, opp.mid_angle, orbit)
    return gap < required - CAPACITY_TOLERANCE


def _nearby(scenario: Scenario, item: ScheduledItem, orbit: Orbit) -> Sequence[Opportunity]:
    """
    Opportunities on the item's orbit whose windows start close enough to the
    item to possibly break the setup-time constraint with it.
    """
    slack = orbit.setup_time + 2.0 * scenario.max_abs_angle / orbit.slew_velocity + 1.0
    starts = scenario.opportunity_starts_by_orbit.get(item.orbit_id, [])
    lo = bisect_left(starts, item.start - scenario.max_window_length - slack)
    hi = bisect_right(starts, item.end + slack)
    return scenario.opportunities_by_orbit[item.orbit_id][lo:hi]


class ConflictIndex:
    """
    Opportunities that a scheduled item blocks, memoized by the item's orbit,
    window and execution angle, together with the conflict counts of the last
    schedule counted. An index serves one scenario.

    Parameters
    ----------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario the items belong to.
    max_entries : int, optional
        The memo is emptied when it reaches this many entries.
    """

    def __init__(self, scenario: Scenario, max_entries: int = 1 << 16):
        self.scenario = scenario
        self.max_entries = max_entries
        self._blocked: Dict[Tuple[int, Tuple[int, int], float], Tuple[Opportunity, ...]] = {}
        self._schedule: Optional[Schedule] = None
        self._counts: Dict[int, int] = {}

    def blocked(self, item: ScheduledItem) -> Tuple[Opportunity, ...]:
        """
        Opportunities on the item's orbit that, scheduled alone, would break the
        setup-time constraint against the item.
        """
        key = (item.orbit_id, item.window, item.exec_angle)
        found = self._blocked.get(key)
        if found is None:
            if len(self._blocked) >= self.max_entries:
                self._blocked.clear()
            orbit = self.scenario.orbit_params[item.orbit_id]
            found = tuple(
                opp
                for opp in _nearby(self.scenario, item, orbit)
                if _singleton_conflicts(item, opp, orbit)
            )
            self._blocked[key] = found
        return found

    def conflictors(
        self, item: ScheduledItem, scheduled: FrozenSet[int]
    ) -> Dict[int, List[Opportunity]]:
        found: Dict[int, List[Opportunity]] = {}
        for opp in self.blocked(item):
            if opp.task_id not in scheduled:
                found.setdefault(opp.task_id, []).append(opp)
        return found

    def counts(self, schedule: Schedule) -> Dict[int, int]:
        """
        Conflict count of every scheduled task, see `conflict_counts`. The
        returned mapping must not be modified.
        """
        if schedule is not self._schedule:
            scheduled = schedule.task_ids
            counts = {}
            for _, _, item in schedule.items():
                n = len({o.task_id for o in self.blocked(item) if o.task_id not in scheduled})
                for task_id in item.member_task_ids:
                    counts[task_id] = n
            self._schedule, self._counts = schedule, counts
        return self._counts


def conflict_counts(schedule: Schedule, scenario: Scenario) -> Dict[int, int]:
    """
    For every scheduled task, the number of unscheduled tasks having an
    opportunity on the same orbit that, scheduled alone, would break the
    setup-time constraint against the item holding the task.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Current schedule.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.

    Returns
    -------
    counts : dict
        Conflict count keyed by scheduled task id.
    """
    return dict(ConflictIndex(scenario).counts(schedule))


def _evict(
    lane: Tuple[ScheduledItem, ...], position: int, side: str, scenario: Scenario
) -> Tuple[Tuple[ScheduledItem, ...], int]:
    item = lane[position]
    if not item.is_cluster:
        return lane[:position] + lane[position + 1 :], item.members[0].task_id

    # Only the components at either end of a cluster can be removed
    if side == _FIRST:
        member = item.members[0]
    else:
        member = max(item.members, key=lambda m: (m.end, m.start, m.task_id))
    reduced = item.without(member.task_id, scenario.weights)
    rest = lane[:position] + (reduced,) + lane[position + 1 :]
    return tuple(sorted(rest, key=ScheduledItem.sort_key)), member.task_id


@dataclass(frozen=True)
class _Eviction:
    lane: Tuple[ScheduledItem, ...]
    task_id: int
    position: int
    whole: bool
    score: float
    energy_saved: float
    memory_saved: float


def _eviction(
    lane: Tuple[ScheduledItem, ...],
    position: int,
    side: str,
    scenario: Scenario,
    orbit: Orbit,
    weights: ResourceWeights,
) -> _Eviction:
    energy, memory = orbit_usage(lane, orbit)
    new_lane, task_id = _evict(lane, position, side, scenario)
    new_energy, new_memory = orbit_usage(new_lane, orbit)
    energy_saved = energy - new_energy
    memory_saved = memory - new_memory

    energy_share = max(0.0, energy_saved) / orbit.energy_capacity if orbit.energy_capacity > 0 else 0.0
    memory_share = max(0.0, memory_saved) / orbit.memory_capacity if orbit.memory_capacity > 0 else 0.0
    score = scenario.weights[task_id] / (
        weights.alpha * energy_share + weights.beta * memory_share + WEIGHT_FLOOR
    )
    return _Eviction(
        lane=new_lane,
        task_id=task_id,
        position=position,
        whole=not lane[position].is_cluster,
        score=score,
        energy_saved=energy_saved,
        memory_saved=memory_saved,
    )


def _first_setup_conflict(lane: Sequence[ScheduledItem], orbit: Orbit) -> Optional[int]:
    for position, (prev, next) in enumerate(zip(lane[:-1], lane[1:])):
        if not setup_gap_ok(prev, next, orbit):
            return position
    return None


def repair(
    schedule: Schedule,
    orbit_id: int,
    protected: Optional[ScheduledItem],
    scenario: Scenario,
    weights: Mapping[int, ResourceWeights],
) -> Tuple[Schedule, Tuple[int, ...]]:
    """
    Remove tasks from one orbit until it satisfies the setup-time, energy,
    memory and sensor opening constraints again.

    Setup-time conflicts are resolved first: an item too close to the protected
    item loses the component facing it (a single task is removed whole). In a
    conflict between two other items the one with the lower score loses. Then,
    while a capacity is exceeded, the removal with the lowest score
    weight / (alpha * energy share + beta * memory share + 0.01) is applied,
    preferring removals that reduce an exceeded quantity. Cluster windows and
    angles are recomputed after every component removal.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Schedule whose only violations are on orbit_id.
    orbit_id : int
        Orbit to repair.
    protected : `~sosp_core.model.items.ScheduledItem` or None
        Item on orbit_id that must be kept (usually the one just inserted).
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.
    weights : mapping of int to `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights per orbit.

    Returns
    -------
    schedule : `~sosp_core.model.items.Schedule`
        Repaired schedule.
    removed_task_ids : tuple of int
        Tasks removed from the orbit, in removal order.

    Raises
    ------
    RepairError : If the protected item violates the orbit's constraints on its own.
    """
    orbit = scenario.orbit_params[orbit_id]
    w = _weights_for(weights, orbit_id)
    if protected is not None and not lane_is_feasible((protected,), orbit):
        raise RepairError(
            f"Item {protected.member_task_ids} cannot be scheduled on orbit {orbit_id} even alone."
        )

    lane = schedule.lane(orbit_id)
    if lane_is_feasible(lane, orbit):
        return schedule, ()

    removed: List[int] = []
    lane = _resolve_setup_conflicts(lane, protected, scenario, orbit, w, removed)

    while not lane_is_feasible(lane, orbit):
        energy, memory = orbit_usage(lane, orbit)
        over_energy = energy > orbit.energy_capacity + CAPACITY_TOLERANCE
        over_memory = memory > orbit.memory_capacity + CAPACITY_TOLERANCE
        over_openings = len(lane) > orbit.max_openings

        candidates = []
        for position, item in enumerate(lane):
            if item == protected:
                continue
            seen = set()
            for side in [_FIRST, _LAST] if item.is_cluster else [_FIRST]:
                eviction = _eviction(lane, position, side, scenario, orbit, w)
                if eviction.task_id not in seen:
                    seen.add(eviction.task_id)
                    candidates.append(eviction)

        useful = [
            e
            for e in candidates
            if (over_energy and e.energy_saved > CAPACITY_TOLERANCE)
            or (over_memory and e.memory_saved > CAPACITY_TOLERANCE)
            or (over_openings and e.whole)
        ]
        choice = min(useful or candidates, key=lambda e: (e.score, e.position, e.task_id))
        lane = choice.lane
        removed.append(choice.task_id)
        logger.debug(f"Repair removed task {choice.task_id} from orbit {orbit_id} (capacity).")

        # A reduced cluster can change its angle and break a setup time
        lane = _resolve_setup_conflicts(lane, protected, scenario, orbit, w, removed)

    return schedule.with_lane(orbit_id, lane), tuple(removed)


def _resolve_setup_conflicts(
    lane: Tuple[ScheduledItem, ...],
    protected: Optional[ScheduledItem],
    scenario: Scenario,
    orbit: Orbit,
    weights: ResourceWeights,
    removed: List[int],
) -> Tuple[ScheduledItem, ...]:
    position = _first_setup_conflict(lane, orbit)
    while position is not None:
        if lane[position] == protected:
            options = [(position + 1, _FIRST)]
        elif lane[position + 1] == protected:
            options = [(position, _LAST)]
        else:
            # Each item loses the component facing the other
            options = [(position, _LAST), (position + 1, _FIRST)]
        choice = min(
            (_eviction(lane, p, side, scenario, orbit, weights) for p, side in options),
            key=lambda e: (e.score, e.position),
        )
        lane = choice.lane
        removed.append(choice.task_id)
        logger.debug(
            f"Repair removed task {choice.task_id} from orbit {orbit.orbit_id} (setup time)."
        )
        position = _first_setup_conflict(lane, orbit)
    return lane


def _replace(
    schedule: Schedule,
    orbit_id: int,
    old: Optional[ScheduledItem],
    new: Optional[ScheduledItem],
) -> Schedule:
    lane = [item for item in schedule.lane(orbit_id) if item != old]
    if new is not None:
        lane.append(new)
    return schedule.with_lane(orbit_id, lane)


def _removed(before: Schedule, after: Schedule) -> Tuple[int, ...]:
    return tuple(sorted(before.task_ids - after.task_ids))


@dataclass(frozen=True)
class _ClusterOption:
    orbit_id: int
    span: int
    item_weight: int
    position: int
    item: ScheduledItem
    merged: ScheduledItem


def _cluster_options(
    schedule: Schedule,
    opps: Sequence[Opportunity],
    scenario: Scenario,
    weights: Mapping[int, ResourceWeights],
    blocking_only: bool = False,
) -> List[_ClusterOption]:
    # With blocking_only, partners are the items the opportunity cannot sit
    # next to alone, and the resource saving test is skipped
    options = []
    for opp in opps:
        orbit = scenario.orbit_params[opp.orbit_id]
        w = _weights_for(weights, opp.orbit_id)
        for position, item in enumerate(schedule.lane(opp.orbit_id)):
            if max(item.end, opp.end) - min(item.start, opp.start) > scenario.max_cluster_duration:
                continue
            if blocking_only and not _singleton_conflicts(item, opp, orbit):
                continue
            merged = try_cluster(item, opp, scenario, w, check_worth=not blocking_only)
            if isinstance(merged, Rejection) or not lane_is_feasible((merged,), orbit):
                continue
            options.append(
                _ClusterOption(opp.orbit_id, merged.length, item.weight, position, item, merged)
            )
    return options


def insert_task(
    schedule: Schedule,
    task_id: int,
    opps: Sequence[Opportunity],
    scenario: Scenario,
    weights: Mapping[int, ResourceWeights],
    rng: np.random.Generator,
    allow_clustering: bool = True,
) -> Tuple[Schedule, ScheduledItem]:
    """
    Insert a task into a schedule, clustering it with a scheduled item when
    possible, and repair the orbit it lands on.

    Clustering options (angle ranges intersect, merged window no longer than the
    longest cluster duration, resources saved) are preferred. If no merge saves
    resources, merges with the items the task would break a setup time with if
    inserted alone are offered without the saving test. The orbit is the
    one with the most remaining resources among those offering an option; on that
    orbit the partner giving the shortest merged window wins, ties broken by lower
    item weight and then by earlier position. Without clustering options the task
    is inserted alone on the richest orbit among its opportunities. Richness ties
    are broken at random.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule not containing the task.
    task_id : int
        Task to insert.
    opps : sequence of `~sosp_core.scenario.opportunities.Opportunity`
        Opportunities of the task that may be used.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.
    weights : mapping of int to `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights per orbit.
    rng : `~numpy.random.Generator`
        Random number generator used to break ties.
    allow_clustering : bool, optional
        If False, only insert the task alone.

    Returns
    -------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule containing the task.
    item : `~sosp_core.model.items.ScheduledItem`
        The item now holding the task.

    Raises
    ------
    ValueError : If no opportunities are given.
    """
    if len(opps) == 0:
        raise ValueError(f"Task {task_id} has no opportunity to insert it into.")

    if allow_clustering:
        options = _cluster_options(schedule, opps, scenario, weights)
        if not options:
            options = _cluster_options(schedule, opps, scenario, weights, blocking_only=True)
        if options:
            orbit_id = _richest(schedule, scenario, (o.orbit_id for o in options), rng)
            best = min(
                (o for o in options if o.orbit_id == orbit_id),
                key=lambda o: (o.span, o.item_weight, o.position),
            )
            schedule = _replace(schedule, orbit_id, best.item, best.merged)
            schedule, _ = repair(schedule, orbit_id, best.merged, scenario, weights)
            return schedule, best.merged

    orbit_id = _richest(schedule, scenario, (o.orbit_id for o in opps), rng)
    orbit = scenario.orbit_params[orbit_id]
    lane = schedule.lane(orbit_id)
    opp = min(
        (o for o in opps if o.orbit_id == orbit_id),
        key=lambda o: (sum(_singleton_conflicts(item, o, orbit) for item in lane), o.start, o.end),
    )
    item = ScheduledItem.singleton(opp, scenario.weights[task_id])
    schedule = _replace(schedule, orbit_id, None, item)
    schedule, _ = repair(schedule, orbit_id, item, scenario, weights)
    return schedule, item


def _roulette(candidates: Sequence[int], scores: Sequence[float], rng: np.random.Generator) -> int:
    # Probability proportional to score; a lone candidate costs no draw
    if len(candidates) == 1:
        return candidates[0]
    cumulative = np.cumsum(np.asarray(scores, dtype=np.float64))
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return candidates[min(index, len(candidates) - 1)]


def insertion_removal(
    schedule: Schedule,
    scenario: Scenario,
    tabu: Iterable[int],
    weights: Mapping[int, ResourceWeights],
    rng: np.random.Generator,
    allow_clustering: bool = True,
) -> Optional[Move]:
    """
    Insert an unscheduled task that is not tabu, removing scheduled tasks that
    stand in its way.

    The task is drawn by roulette wheel with probability proportional to its
    weight.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.
    tabu : iterable of int
        Task ids that may not be inserted.
    weights : mapping of int to `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights per orbit.
    rng : `~numpy.random.Generator`
        Random number generator used to draw the task and break ties.
    allow_clustering : bool, optional
        If False, the task is only inserted alone.

    Returns
    -------
    move : `~sosp_core.search.neighborhoods.Move` or None
        The move, or None if every insertable task is scheduled or tabu.
    """
    tabu = set(tabu)
    scheduled = schedule.task_ids
    candidates = [
        t
        for t in scenario.tasks_by_priority
        if t not in scheduled and t not in tabu and scenario.usable_by_task[t]
    ]
    if not candidates:
        return None

    task_id = _roulette(candidates, [scenario.weights[t] for t in candidates], rng)
    opps = scenario.usable_by_task[task_id]
    candidate, _ = insert_task(schedule, task_id, opps, scenario, weights, rng, allow_clustering)
    return Move(Structure.INSERT_REMOVE, candidate, _removed(schedule, candidate))


def _alternatives(schedule: Schedule, task_id: int, scenario: Scenario) -> Tuple[Opportunity, ...]:
    orbit_id, position = schedule.locate(task_id)
    item = schedule.lane(orbit_id)[position]
    current = next(m for m in item.members if m.task_id == task_id)
    return tuple(
        o
        for o in scenario.usable_by_task[task_id]
        if (o.orbit_id, o.window) != (current.orbit_id, current.window)
    )


def migration(
    schedule: Schedule,
    scenario: Scenario,
    tabu: Iterable[int],
    weights: Mapping[int, ResourceWeights],
    rng: np.random.Generator,
    allow_clustering: bool = True,
    index: Optional[ConflictIndex] = None,
) -> Optional[Move]:
    """
    Move a scheduled task that blocks unscheduled tasks to another of its
    opportunities, then fill the freed room with the tasks it blocked.

    The task is drawn by roulette wheel among the scheduled tasks having another
    opportunity, with probability proportional to one plus the number of
    unscheduled tasks it blocks. It is removed from its item (a cluster is
    recomputed without it) and inserted with `insert_task` at one of its other
    opportunities, drawn uniformly. Its non-tabu conflictors are then tried alone
    on the source orbit in descending weight, stopping at the first one that
    does not fit. Finally the source orbit is repaired.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.
    tabu : iterable of int
        Task ids that may not be back-filled.
    weights : mapping of int to `~sosp_core.clustering.clustering.ResourceWeights`
        Resource weights per orbit.
    rng : `~numpy.random.Generator`
        Random number generator used to draw the task and its destination and
        to break ties.
    allow_clustering : bool, optional
        If False, the task is only re-inserted alone.
    index : `~sosp_core.search.neighborhoods.ConflictIndex`, optional
        Conflict index of the scenario, reused across calls. A new one is
        built if not given.

    Returns
    -------
    move : `~sosp_core.search.neighborhoods.Move` or None
        The move, or None if no scheduled task has another opportunity.
    """
    tabu = set(tabu)
    index = index if index is not None else ConflictIndex(scenario)
    counts = index.counts(schedule)
    movable = [t for t in sorted(counts) if len(scenario.usable_by_task[t]) > 1]
    while movable:
        task_id = _roulette(movable, [counts[t] + 1 for t in movable], rng)
        alternatives = _alternatives(schedule, task_id, scenario)
        if alternatives:
            break
        movable.remove(task_id)
    else:
        return None

    orbit_id, position = schedule.locate(task_id)
    item = schedule.lane(orbit_id)[position]
    conflictors = index.conflictors(item, schedule.task_ids)
    target = alternatives[0]
    if len(alternatives) > 1:
        target = alternatives[int(rng.integers(len(alternatives)))]

    candidate = _replace(schedule, orbit_id, item, item.without(task_id, scenario.weights))
    candidate, placed = insert_task(
        candidate, task_id, (target,), scenario, weights, rng, allow_clustering
    )

    source = scenario.orbit_params[orbit_id]
    for other in sorted(
        (t for t in conflictors if t not in tabu), key=lambda t: (-scenario.weights[t], t)
    ):
        lane = candidate.lane(orbit_id)
        for opp in conflictors[other]:
            single = ScheduledItem.singleton(opp, scenario.weights[other])
            if lane_is_feasible(sorted(lane + (single,), key=ScheduledItem.sort_key), source):
                candidate = candidate.with_lane(orbit_id, lane + (single,))
                break
        else:
            break

    protected = placed if placed.orbit_id == orbit_id else None
    candidate, _ = repair(candidate, orbit_id, protected, scenario, weights)
    logger.debug(f"Migrated task {task_id} from orbit {orbit_id} to orbit {placed.orbit_id}.")
    return Move(Structure.MIGRATE, candidate, _removed(schedule, candidate))
