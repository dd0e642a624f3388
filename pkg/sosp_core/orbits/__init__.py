# flake8: noqa: F401
from .orbits import ORBIT_COLS, Orbit, Orbits
