# flake8: noqa: F401
from .experiment import (
    DEFAULT_ALGORITHMS,
    SUMMARY_COLUMNS,
    ExperimentConfig,
    ExperimentResult,
    ExperimentSummary,
    ReplicaResults,
    run_experiment,
    summarize,
    summary_text,
    write_outputs,
)
from .stats import SIGNIFICANCE_LEVEL, improvement, resource_ratios, welch_t
