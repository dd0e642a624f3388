# flake8: noqa: F401
from .feasibility import (
    ConstraintId,
    InstanceMismatchError,
    OrbitUsage,
    Violation,
    lane_is_feasible,
    lane_violations,
    objective,
    orbit_usage,
    schedule_usage,
    setup_gap_ok,
    slew_time,
    validate,
)
from .geometry import intersect_ranges, merge_windows, midpoint
from .io import load_schedule, save_schedule
from .items import Schedule, ScheduledItem
from .statistics import ScenarioStatistics, scenario_statistics
