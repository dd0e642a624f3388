import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from quivr import Float64Column, Int64Column, Table

from ..constants import DEFAULTS

logger = logging.getLogger(__name__)

__all__ = ["Orbit", "Orbits", "ORBIT_COLS"]

ORBIT_COLS = [
    "orbit_id",
    "memory_capacity",
    "memory_rate",
    "energy_capacity",
    "obs_energy_rate",
    "slew_energy_rate",
    "slew_velocity",
    "setup_time",
    "max_openings",
]


@dataclass(frozen=True)
class Orbit:
    """
    One orbit (a single pass of a satellite) treated as an independent resource.
    """

    orbit_id: int
    memory_capacity: float
    memory_rate: float
    energy_capacity: float
    obs_energy_rate: float
    slew_energy_rate: float
    slew_velocity: float
    setup_time: float
    max_openings: int


class Orbits(Table):

    orbit_id = Int64Column(nullable=False)
    # W_j, w_j
    memory_capacity = Float64Column(nullable=False)
    memory_rate = Float64Column(nullable=False)
    # E_j, eo_j, es_j
    energy_capacity = Float64Column(nullable=False)
    obs_energy_rate = Float64Column(nullable=False)
    slew_energy_rate = Float64Column(nullable=False)
    # v_j, a_j, c_j
    slew_velocity = Float64Column(nullable=False)
    setup_time = Float64Column(nullable=False)
    max_openings = Int64Column(nullable=False)

    @classmethod
    def from_defaults(
        cls, num_orbits: int, orbit_ids: Optional[List[int]] = None, **overrides
    ) -> "Orbits":
        """
        Create orbits that all share the default resource parameters.

        Parameters
        ----------
        num_orbits : int
            Number of orbits to create.
        orbit_ids : list of int, optional
            Orbit identifiers. Defaults to 0, 1, ..., num_orbits - 1.
        **overrides
            Resource parameters (by column name) that replace the defaults.

        Returns
        -------
        orbits : `~sosp_core.orbits.orbits.Orbits`
            Orbits with identical resource parameters.

        Raises
        ------
        ValueError : If an override does not name an orbit resource parameter.
        """
        unknown = set(overrides) - set(DEFAULTS.ORBIT_DEFAULTS)
        if unknown:
            raise ValueError(f"Unknown orbit parameters: {sorted(unknown)}")

        if orbit_ids is None:
            orbit_ids = list(range(num_orbits))
        if len(orbit_ids) != num_orbits:
            raise ValueError("orbit_ids must have num_orbits entries.")

        params = {**DEFAULTS.ORBIT_DEFAULTS, **overrides}
        data = {name: np.full(num_orbits, value) for name, value in params.items()}
        data["max_openings"] = data["max_openings"].astype(np.int64)
        return cls.from_kwargs(orbit_id=np.asarray(orbit_ids, dtype=np.int64), **data)

    def to_records(self) -> List[Orbit]:
        """
        Row-wise view of the orbits.

        Returns
        -------
        records : list of `~sosp_core.orbits.orbits.Orbit`
            One record per orbit, in table order.
        """
        columns = {name: getattr(self, name).to_pylist() for name in ORBIT_COLS}
        return [
            Orbit(**{name: columns[name][i] for name in ORBIT_COLS})
            for i in range(len(self))
        ]

    def to_dict(self) -> Dict[int, Orbit]:
        return {orbit.orbit_id: orbit for orbit in self.to_records()}
