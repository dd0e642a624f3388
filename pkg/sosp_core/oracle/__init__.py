# flake8: noqa: F401
from .oracle import OracleLimitError, OracleLimits, exact_solve
