import dataclasses
from typing import Optional, Tuple

from ..baselines import ClassicSAParams, VariantMode, classic_sa, hpfs, run_variant
from ..model import Schedule
from ..oracle import OracleLimitError, OracleLimits, exact_solve
from ..scenario import Scenario
from ..search import AnnealParams, RunTrace
from .solver import Solver

__all__ = [
    "ALGORITHMS",
    "AnnealSolver",
    "ClassicSASolver",
    "HPFSSolver",
    "OracleSolver",
    "make_solver",
]

ALGORITHMS = ["ASA-DTC", "ASA-STC", "ASA-NONTC", "CLASSIC-SA", "HPFS", "ORACLE"]


class AnnealSolver(Solver):
    def __init__(self, mode: VariantMode = VariantMode.DTC, params: AnnealParams = AnnealParams()):
        self.mode = VariantMode(mode)
        self.params = params
        self.name = f"ASA-{self.mode.value}"

    def _solve(self, scenario: Scenario, seed: int) -> Tuple[Schedule, Optional[RunTrace]]:
        params = dataclasses.replace(self.params, rng_seed=seed)
        return run_variant(scenario, self.mode, params)


class ClassicSASolver(Solver):
    name = "CLASSIC-SA"

    def __init__(self, params: ClassicSAParams = ClassicSAParams()):
        self.params = params

    def _solve(self, scenario: Scenario, seed: int) -> Tuple[Schedule, Optional[RunTrace]]:
        params = dataclasses.replace(self.params, rng_seed=seed)
        return classic_sa(scenario, params)


class HPFSSolver(Solver):
    name = "HPFS"

    def _solve(self, scenario: Scenario, seed: int) -> Tuple[Schedule, Optional[RunTrace]]:
        scenario.validate()
        return hpfs(scenario), None


class OracleSolver(Solver):
    name = "ORACLE"
    unavailable_errors = (OracleLimitError,)

    def __init__(self, limits: OracleLimits = OracleLimits()):
        self.limits = limits

    def _solve(self, scenario: Scenario, seed: int) -> Tuple[Schedule, Optional[RunTrace]]:
        _, schedule = exact_solve(scenario, self.limits)
        return schedule, None


def make_solver(
    algorithm: str,
    anneal_params: AnnealParams = AnnealParams(),
    classic_params: ClassicSAParams = ClassicSAParams(),
    oracle_limits: OracleLimits = OracleLimits(),
) -> Solver:
    """
    Build the solver for an algorithm name of ALGORITHMS.

    Raises
    ------
    ValueError : If the algorithm name is unknown.
    """
    if algorithm.startswith("ASA-") and algorithm in ALGORITHMS:
        return AnnealSolver(VariantMode(algorithm[len("ASA-") :]), anneal_params)
    if algorithm == "CLASSIC-SA":
        return ClassicSASolver(classic_params)
    if algorithm == "HPFS":
        return HPFSSolver()
    if algorithm == "ORACLE":
        return OracleSolver(oracle_limits)
    raise ValueError(f"Unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}.")
