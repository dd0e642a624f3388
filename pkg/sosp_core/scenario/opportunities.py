from dataclasses import dataclass
from typing import List, Tuple

from quivr import Float64Column, Int64Column, Table

__all__ = ["Opportunity", "Opportunities"]


@dataclass(frozen=True)
class Opportunity:
    """
    One visibility of a task from an orbit: a time-window in whole seconds from the
    start of the horizon and the range of sensor slewing angles (degrees) that can
    observe the task during that window.
    """

    task_id: int
    orbit_id: int
    start: int
    end: int
    angle_lo: float
    angle_hi: float

    @property
    def window(self) -> Tuple[int, int]:
        return (self.start, self.end)

    @property
    def angle_range(self) -> Tuple[float, float]:
        return (self.angle_lo, self.angle_hi)

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def mid_angle(self) -> float:
        return 0.5 * (self.angle_lo + self.angle_hi)


class Opportunities(Table):

    task_id = Int64Column(nullable=False)
    orbit_id = Int64Column(nullable=False)
    # TW = [ts, te]
    start = Int64Column(nullable=False)
    end = Int64Column(nullable=False)
    # [theta_lo, theta_hi]
    angle_lo = Float64Column(nullable=False)
    angle_hi = Float64Column(nullable=False)

    def to_records(self) -> List[Opportunity]:
        columns = [
            getattr(self, name).to_pylist()
            for name in ["task_id", "orbit_id", "start", "end", "angle_lo", "angle_hi"]
        ]
        return [Opportunity(*row) for row in zip(*columns)]

    @classmethod
    def from_records(cls, records: List[Opportunity]) -> "Opportunities":
        if len(records) == 0:
            return cls.empty()
        return cls.from_kwargs(
            task_id=[r.task_id for r in records],
            orbit_id=[r.orbit_id for r in records],
            start=[r.start for r in records],
            end=[r.end for r in records],
            angle_lo=[float(r.angle_lo) for r in records],
            angle_hi=[float(r.angle_hi) for r in records],
        )
