__all__ = [
    "S_P_DAY",
    "MAX_SLEW_ANGLE",
    "WEIGHT_FLOOR",
    "ANGLE_TOLERANCE",
    "Constants",
    "DEFAULTS",
    "ANNEAL_DEFAULTS",
]

# seconds in a day
S_P_DAY = 86400
# sensors slew laterally within [-33, 33] degrees
MAX_SLEW_ANGLE = 33.0
# floor applied to the energy and memory weights of the clustering test
WEIGHT_FLOOR = 0.01
# intersections narrower than this (degrees) are empty
ANGLE_TOLERANCE = 1e-9


class _Constants:
    def __init__(
        self,
        max_cluster_duration=None,
        memory_capacity=None,
        memory_rate=None,
        energy_capacity=None,
        obs_energy_rate=None,
        slew_energy_rate=None,
        slew_velocity=None,
        setup_time=None,
        max_openings=None,
    ):
        self.MAX_CLUSTER_DURATION = max_cluster_duration
        self.MEMORY_CAPACITY = memory_capacity
        self.MEMORY_RATE = memory_rate
        self.ENERGY_CAPACITY = energy_capacity
        self.OBS_ENERGY_RATE = obs_energy_rate
        self.SLEW_ENERGY_RATE = slew_energy_rate
        self.SLEW_VELOCITY = slew_velocity
        self.SETUP_TIME = setup_time
        self.MAX_OPENINGS = max_openings

        # Orbit resource parameters keyed by Orbits column name
        self.ORBIT_DEFAULTS = {
            "memory_capacity": self.MEMORY_CAPACITY,
            "memory_rate": self.MEMORY_RATE,
            "energy_capacity": self.ENERGY_CAPACITY,
            "obs_energy_rate": self.OBS_ENERGY_RATE,
            "slew_energy_rate": self.SLEW_ENERGY_RATE,
            "slew_velocity": self.SLEW_VELOCITY,
            "setup_time": self.SETUP_TIME,
            "max_openings": self.MAX_OPENINGS,
        }
        return


DEFAULT_CONSTANTS = {
    # Longest duration of a cluster-task : s
    "max_cluster_duration": 120.0,
    # Memory storage capacity per orbit : memory units
    "memory_capacity": 1000.0,
    # Memory consumed per second of observation : memory units / s
    "memory_rate": 1.0,
    # Energy capacity per orbit : energy units
    "energy_capacity": 1500.0,
    # Energy consumed per second of observation : energy units / s
    "obs_energy_rate": 1.0,
    # Energy consumed per second of slewing : energy units / s
    "slew_energy_rate": 1.0,
    # Slewing velocity : degrees / s
    "slew_velocity": 1.0,
    # Sensor opening and calibration time : s
    "setup_time": 10.0,
    # Maximum number of sensor openings per orbit
    "max_openings": 10,
}
Constants = DEFAULTS = _Constants(**DEFAULT_CONSTANTS)

# Adaptive annealing parameters. The tabu length is N / 50 for N tasks and
# is resolved per scenario.
ANNEAL_DEFAULTS = {
    "lambda_min": 0.5,
    "rho": 1.0,
    "delta": 10.0,
    "eta": 0.8,
    "itr": 10,
    "pro_1": 0.5,
    "pro_2": 0.5,
}
