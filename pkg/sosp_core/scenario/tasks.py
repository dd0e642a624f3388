from dataclasses import dataclass
from typing import List

import numpy as np
from quivr import Int64Column, Table

__all__ = ["TaskSpec", "Tasks"]


@dataclass(frozen=True)
class TaskSpec:
    task_id: int
    weight: int


class Tasks(Table):

    task_id = Int64Column(nullable=False)
    # profit p_i
    weight = Int64Column(nullable=False)

    def to_records(self) -> List[TaskSpec]:
        ids = self.task_id.to_pylist()
        weights = self.weight.to_pylist()
        return [TaskSpec(task_id=i, weight=w) for i, w in zip(ids, weights)]

    @property
    def total_weight(self) -> int:
        return int(np.sum(self.weight.to_numpy()))
