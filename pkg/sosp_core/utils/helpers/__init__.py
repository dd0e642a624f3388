# flake8: noqa: F401
from .scenarios import load_minimal_scenario, make_opportunity, make_random_scenario, make_scenario
