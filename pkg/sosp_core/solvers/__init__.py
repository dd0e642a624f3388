# flake8: noqa: F401
from .solver import ReplicaOutcome, Solver, replica_worker
from .solvers import (
    ALGORITHMS,
    AnnealSolver,
    ClassicSASolver,
    HPFSSolver,
    OracleSolver,
    make_solver,
)
from .utils import _iterate_chunks, replica_seeds
