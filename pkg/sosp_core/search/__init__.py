# flake8: noqa: F401
from .annealer import (
    COUNTER_MODES,
    AnnealParams,
    LoopSettings,
    accept,
    anneal_loop,
    initial_solution,
    run,
    temperature,
    update_counter,
)
from .neighborhoods import (
    ConflictIndex,
    Move,
    RepairError,
    conflict_counts,
    insert_task,
    insertion_removal,
    migration,
    repair,
    richness,
)
from .selection import NeighborhoodStats, Structure, select_structure, update_probabilities
from .trace import TRACE_CSV_COLUMNS, RunTrace
