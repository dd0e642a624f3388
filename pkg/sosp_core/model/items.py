from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

from ..scenario.opportunities import Opportunity
from .geometry import AngleRange, Window, intersect_ranges, merge_windows, midpoint

__all__ = ["ScheduledItem", "Schedule"]


def _member_key(opp: Opportunity):
    return (opp.start, opp.end, opp.task_id)


@dataclass(frozen=True)
class ScheduledItem:
    """
    One sensor opening on an orbit: a single task or a cluster-task.

    A cluster-task observes all of its member tasks during one merged
    time-window at one execution angle, the midpoint of the intersection of
    the members' angle ranges. A single task is the one-member case.
    """

    orbit_id: int
    members: Tuple[Opportunity, ...]
    weight: int
    window: Window
    angle_range: AngleRange
    exec_angle: float

    @classmethod
    def singleton(cls, opp: Opportunity, weight: int) -> "ScheduledItem":
        return cls(
            orbit_id=opp.orbit_id,
            members=(opp,),
            weight=weight,
            window=opp.window,
            angle_range=opp.angle_range,
            exec_angle=opp.mid_angle,
        )

    @classmethod
    def from_members(
        cls, members: Iterable[Opportunity], weights: Mapping[int, int]
    ) -> "ScheduledItem":
        """
        Build an item from its member opportunities, deriving the merged
        window, the intersected angle range and the execution angle.

        Parameters
        ----------
        members : iterable of `~sosp_core.scenario.opportunities.Opportunity`
            Member opportunities, all on the same orbit.
        weights : mapping of int to int
            Task weights by task id.

        Returns
        -------
        item : `~sosp_core.model.items.ScheduledItem`
            The item.

        Raises
        ------
        ValueError : If there are no members, the members are on different
            orbits, or their angle ranges do not intersect.
        """
        members = tuple(sorted(members, key=_member_key))
        if len(members) == 0:
            raise ValueError("A scheduled item needs at least one member.")
        orbit_ids = {m.orbit_id for m in members}
        if len(orbit_ids) != 1:
            raise ValueError(f"Members span several orbits: {sorted(orbit_ids)}.")

        angle_range = intersect_ranges([m.angle_range for m in members])
        if angle_range is None:
            raise ValueError("Member angle ranges do not intersect.")

        return cls(
            orbit_id=members[0].orbit_id,
            members=members,
            weight=sum(weights[m.task_id] for m in members),
            window=merge_windows([m.window for m in members]),
            angle_range=angle_range,
            exec_angle=midpoint(angle_range),
        )

    @property
    def member_task_ids(self) -> Tuple[int, ...]:
        return tuple(m.task_id for m in self.members)

    @property
    def start(self) -> int:
        return self.window[0]

    @property
    def end(self) -> int:
        return self.window[1]

    @property
    def length(self) -> int:
        return self.window[1] - self.window[0]

    @property
    def is_cluster(self) -> bool:
        return len(self.members) > 1

    def with_member(self, opp: Opportunity, weights: Mapping[int, int]) -> "ScheduledItem":
        return ScheduledItem.from_members(self.members + (opp,), weights)

    def without(self, task_id: int, weights: Mapping[int, int]) -> Optional["ScheduledItem"]:
        """
        Remove a member task and recompute the window and angles.

        Returns
        -------
        item : `~sosp_core.model.items.ScheduledItem` or None
            The reduced item, or None if the removed task was the only member.
        """
        remaining = [m for m in self.members if m.task_id != task_id]
        if len(remaining) == len(self.members):
            raise ValueError(f"Task {task_id} is not a member of this item.")
        if len(remaining) == 0:
            return None
        return ScheduledItem.from_members(remaining, weights)

    def sort_key(self):
        return (self.window[0], self.window[1], self.member_task_ids)


@dataclass(frozen=True)
class Schedule:
    """
    Per-orbit sequences of scheduled items, each sorted by window start.

    Schedules are values: every modification returns a new schedule. Orbits
    without items are not stored.
    """

    lanes: Mapping[int, Tuple[ScheduledItem, ...]] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "Schedule":
        return cls({})

    @classmethod
    def from_items(cls, items: Iterable[ScheduledItem]) -> "Schedule":
        grouped: Dict[int, list] = {}
        for item in items:
            grouped.setdefault(item.orbit_id, []).append(item)
        return cls(
            {
                orbit_id: tuple(sorted(grouped[orbit_id], key=ScheduledItem.sort_key))
                for orbit_id in sorted(grouped)
            }
        )

    def lane(self, orbit_id: int) -> Tuple[ScheduledItem, ...]:
        return self.lanes.get(orbit_id, ())

    def lane_weight(self, orbit_id: int) -> int:
        return sum(item.weight for item in self.lane(orbit_id))

    def differing_orbits(self, other: "Schedule") -> List[int]:
        """
        Orbits whose lanes differ between this schedule and another, in
        ascending order.
        """
        orbit_ids = set(self.lanes) | set(other.lanes)
        return sorted(
            j for j in orbit_ids if self.lane(j) is not other.lane(j) and self.lane(j) != other.lane(j)
        )

    def with_lane(self, orbit_id: int, items: Iterable[ScheduledItem]) -> "Schedule":
        lanes = dict(self.lanes)
        items = tuple(sorted(items, key=ScheduledItem.sort_key))
        if items:
            lanes[orbit_id] = items
        else:
            lanes.pop(orbit_id, None)
        return Schedule({j: lanes[j] for j in sorted(lanes)})

    def items(self) -> Iterator[Tuple[int, int, ScheduledItem]]:
        """
        Iterate over (orbit_id, position, item) in orbit then time order.
        """
        for orbit_id, lane in self.lanes.items():
            for position, item in enumerate(lane):
                yield orbit_id, position, item

    @cached_property
    def _locations(self) -> Dict[int, Tuple[int, int]]:
        locations = {}
        for orbit_id, position, item in self.items():
            for task_id in item.member_task_ids:
                locations.setdefault(task_id, (orbit_id, position))
        return locations

    @property
    def task_ids(self) -> FrozenSet[int]:
        return frozenset(self._locations)

    def locate(self, task_id: int) -> Optional[Tuple[int, int]]:
        """
        Orbit id and lane position of the item containing a task, or None if
        the task is not scheduled.
        """
        return self._locations.get(task_id)

    @property
    def n_items(self) -> int:
        return sum(len(lane) for lane in self.lanes.values())

    @property
    def n_clusters(self) -> int:
        return sum(1 for _, _, item in self.items() if item.is_cluster)

    @property
    def n_tasks(self) -> int:
        return sum(len(item.members) for _, _, item in self.items())
