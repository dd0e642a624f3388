import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from ..constants import DEFAULTS, MAX_SLEW_ANGLE, S_P_DAY
from ..orbits import Orbits
from .opportunities import Opportunities
from .scenario import Scenario
from .tasks import Tasks

logger = logging.getLogger(__name__)

__all__ = [
    "GeneratorConfig",
    "generate",
    "WIDE_LAT_BOUNDS",
    "WIDE_LON_BOUNDS",
    "DENSE_LAT_BOUNDS",
    "DENSE_LON_BOUNDS",
]

# Targets spread over the reference box. Orbit ground tracks and the time a pass
# spends over the box are laid out relative to it.
WIDE_LAT_BOUNDS = (-30.0, 60.0)
WIDE_LON_BOUNDS = (0.0, 150.0)
# Densely distributed targets (emergency regime)
DENSE_LAT_BOUNDS = (30.0, 60.0)
DENSE_LON_BOUNDS = (90.0, 120.0)

# Seconds a pass spends crossing the reference box from its lowest to its
# highest latitude
PASS_CROSSING_SECONDS = 900
# Angle phases cycle this many times across the reference box longitudes
ANGLE_CYCLES = 4.0


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Parameters of a synthetic scenario.

    Orbits are not propagated. Each orbit is one pass with the default resource
    parameters; passes follow each other through the horizon and each one has a
    ground-track longitude inside the reference box. A target is seen from the
    passes whose track lies inside the configured longitude bounds, at a time
    within the pass set by its latitude and with a slewing angle set by its
    longitude. Shrinking the area therefore concentrates windows on fewer passes
    and into shorter stretches of each pass.
    """

    n_targets: int = 100
    lat_bounds: Tuple[float, float] = WIDE_LAT_BOUNDS
    lon_bounds: Tuple[float, float] = WIDE_LON_BOUNDS
    # four satellites times fourteen orbits a day
    n_orbits: int = 56
    horizon_seconds: int = S_P_DAY
    windows_per_visible_target: float = 2.8
    visibility_prob: float = 0.92
    window_len_bounds: Tuple[int, int] = (8, 30)
    angle_range_halfwidth_bounds: Tuple[float, float] = (2.0, 6.0)
    weight_bounds: Tuple[int, int] = (2, 10)
    max_cluster_duration: float = DEFAULTS.MAX_CLUSTER_DURATION
    seed: int = 0
    orbit_params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_targets < 0:
            raise ValueError("n_targets must be non-negative.")
        if self.n_orbits < 1:
            raise ValueError("n_orbits must be at least 1.")
        for name in [
            "lat_bounds",
            "lon_bounds",
            "window_len_bounds",
            "angle_range_halfwidth_bounds",
            "weight_bounds",
        ]:
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} must be ordered, got {(lo, hi)}.")
        if not (-90.0 <= self.lat_bounds[0] and self.lat_bounds[1] <= 90.0):
            raise ValueError("lat_bounds must lie within [-90, 90].")
        if not 0.0 <= self.visibility_prob <= 1.0:
            raise ValueError("visibility_prob must lie within [0, 1].")
        if self.windows_per_visible_target < 1.0:
            raise ValueError("windows_per_visible_target must be at least 1.")
        if self.window_len_bounds[0] < 1:
            raise ValueError("window_len_bounds must be at least 1 second.")
        if self.window_len_bounds[1] > self.horizon_seconds:
            raise ValueError("window_len_bounds cannot exceed the horizon.")
        if self.angle_range_halfwidth_bounds[0] < 0:
            raise ValueError("angle_range_halfwidth_bounds must be non-negative.")
        if self.angle_range_halfwidth_bounds[1] > MAX_SLEW_ANGLE:
            raise ValueError(f"angle ranges must lie within [-{MAX_SLEW_ANGLE}, {MAX_SLEW_ANGLE}].")
        if self.weight_bounds[0] < 1:
            raise ValueError("weight_bounds must be at least 1.")
        if self.max_cluster_duration <= 0:
            raise ValueError("max_cluster_duration must be greater than 0.")
        if self.pass_seconds < PASS_CROSSING_SECONDS + self.window_len_bounds[1]:
            raise ValueError(
                "horizon_seconds / n_orbits is too short to hold a pass over the target area."
            )

    @property
    def pass_seconds(self) -> int:
        return self.horizon_seconds // self.n_orbits

    @classmethod
    def wide(cls, n_targets: int, **kwargs) -> "GeneratorConfig":
        return cls(n_targets=n_targets, lat_bounds=WIDE_LAT_BOUNDS, lon_bounds=WIDE_LON_BOUNDS, **kwargs)

    @classmethod
    def dense(cls, n_targets: int, **kwargs) -> "GeneratorConfig":
        return cls(
            n_targets=n_targets, lat_bounds=DENSE_LAT_BOUNDS, lon_bounds=DENSE_LON_BOUNDS, **kwargs
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            k: list(v) if isinstance(v, tuple) else v for k, v in dataclasses.asdict(self).items()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratorConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ValueError(f"Unknown generator config keys: {unknown}")
        kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path: Union[str, os.PathLike]) -> "GeneratorConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _normalize(values: np.ndarray, bounds: Tuple[float, float]) -> np.ndarray:
    return np.clip((values - bounds[0]) / (bounds[1] - bounds[0]), 0.0, 1.0)


def generate(config: GeneratorConfig) -> Scenario:
    """
    Generate a synthetic scenario.

    Parameters
    ----------
    config : `~sosp_core.scenario.generator.GeneratorConfig`
        Generator parameters. The scenario is a pure function of the config.

    Returns
    -------
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario with integer task and orbit ids starting at 0.
    """
    rng = np.random.default_rng(config.seed)
    n = config.n_targets

    orbits = Orbits.from_defaults(config.n_orbits, **config.orbit_params)

    # Ground-track longitude and angle phase of each pass
    track_lon = WIDE_LON_BOUNDS[0] + (np.arange(config.n_orbits) + 0.5) * (
        (WIDE_LON_BOUNDS[1] - WIDE_LON_BOUNDS[0]) / config.n_orbits
    )
    angle_phase = rng.random(config.n_orbits)
    pass_start = np.arange(config.n_orbits) * config.pass_seconds
    lead_in = (config.pass_seconds - PASS_CROSSING_SECONDS - config.window_len_bounds[1]) // 2

    # Passes able to see the target area; at least enough for the mean window count
    eligible = np.flatnonzero(
        (track_lon >= config.lon_bounds[0]) & (track_lon <= config.lon_bounds[1])
    )
    n_min = min(config.n_orbits, int(np.ceil(config.windows_per_visible_target)) + 1)
    if len(eligible) < n_min:
        centre = 0.5 * (config.lon_bounds[0] + config.lon_bounds[1])
        eligible = np.sort(np.argsort(np.abs(track_lon - centre), kind="stable")[:n_min])

    lat = rng.uniform(config.lat_bounds[0], config.lat_bounds[1], n)
    lon = rng.uniform(config.lon_bounds[0], config.lon_bounds[1], n)
    weights = rng.integers(config.weight_bounds[0], config.weight_bounds[1] + 1, n)
    visible = rng.random(n) < config.visibility_prob
    n_windows = 1 + rng.poisson(config.windows_per_visible_target - 1.0, n)

    lat_offset = _normalize(lat, WIDE_LAT_BOUNDS) * PASS_CROSSING_SECONDS
    lon_phase = _normalize(lon, WIDE_LON_BOUNDS) * ANGLE_CYCLES

    columns: Dict[str, list] = {
        "task_id": [],
        "orbit_id": [],
        "start": [],
        "end": [],
        "angle_lo": [],
        "angle_hi": [],
    }
    for i in range(n):
        if not visible[i]:
            continue
        k = min(int(n_windows[i]), len(eligible))
        chosen = np.sort(rng.choice(eligible, size=k, replace=False))
        lengths = rng.integers(config.window_len_bounds[0], config.window_len_bounds[1] + 1, k)
        jitter = rng.integers(0, 30, k)
        halfwidths = rng.uniform(*config.angle_range_halfwidth_bounds, k)
        for j, length, dt, hw in zip(chosen, lengths, jitter, halfwidths):
            start = int(pass_start[j] + lead_in + lat_offset[i] + dt)
            start = min(start, config.horizon_seconds - int(length))
            # Nearby targets seen from the same pass need similar slewing angles
            phase = (lon_phase[i] + angle_phase[j]) % 1.0
            centre = -MAX_SLEW_ANGLE + hw + phase * 2.0 * (MAX_SLEW_ANGLE - hw)
            columns["task_id"].append(i)
            columns["orbit_id"].append(int(j))
            columns["start"].append(start)
            columns["end"].append(start + int(length))
            columns["angle_lo"].append(float(max(-MAX_SLEW_ANGLE, centre - hw)))
            columns["angle_hi"].append(float(min(MAX_SLEW_ANGLE, centre + hw)))

    tasks = Tasks.from_kwargs(task_id=np.arange(n, dtype=np.int64), weight=weights.astype(np.int64))
    if columns["task_id"]:
        opportunities = Opportunities.from_kwargs(**columns)
    else:
        opportunities = Opportunities.empty()

    scenario = Scenario(
        tasks=tasks,
        orbits=orbits,
        opportunities=opportunities,
        horizon_seconds=config.horizon_seconds,
        max_cluster_duration=config.max_cluster_duration,
    )
    logger.info(
        f"Generated {scenario!r} with {int(visible.sum())} visible targets (seed={config.seed})."
    )
    return scenario
