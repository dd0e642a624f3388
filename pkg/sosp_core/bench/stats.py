import logging
from typing import Sequence, Tuple

import numpy as np
import scipy.stats

from ..model import Schedule, objective, schedule_usage
from ..scenario import Scenario

logger = logging.getLogger(__name__)

__all__ = ["SIGNIFICANCE_LEVEL", "welch_t", "resource_ratios", "improvement"]

# one-tailed
SIGNIFICANCE_LEVEL = 0.05


def welch_t(
    samples_a: Sequence[float], samples_b: Sequence[float], alpha: float = SIGNIFICANCE_LEVEL
) -> Tuple[float, bool]:
    """
    One-tailed Welch t-test of mean(a) > mean(b).

    Parameters
    ----------
    samples_a, samples_b : sequence of float
        Samples with at least two values each.
    alpha : float, optional
        Significance level.

    Returns
    -------
    t : float
        Welch t statistic. If neither sample varies, 0 for equal means and
        +/- infinity otherwise.
    significant : bool
        True if mean(a) > mean(b) at the given level.

    Raises
    ------
    ValueError : If a sample has fewer than two values.
    """
    a = np.asarray(samples_a, dtype=np.float64)
    b = np.asarray(samples_b, dtype=np.float64)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("Each sample needs at least two values.")

    if a.var(ddof=1) == 0 and b.var(ddof=1) == 0:
        diff = a.mean() - b.mean()
        if diff == 0:
            return 0.0, False
        return (np.inf, True) if diff > 0 else (-np.inf, False)

    result = scipy.stats.ttest_ind(a, b, equal_var=False, alternative="greater")
    return float(result.statistic), bool(result.pvalue < alpha)


def resource_ratios(schedule: Schedule, scenario: Scenario) -> Tuple[float, float]:
    """
    Profit per unit of consumed memory and per unit of consumed energy, with
    consumption summed over all orbits.

    Parameters
    ----------
    schedule : `~sosp_core.model.items.Schedule`
        Feasible schedule.
    scenario : `~sosp_core.scenario.scenario.Scenario`
        Scenario of the schedule.

    Returns
    -------
    profit_memory : float
        Profit / consumed memory, 0 if nothing was consumed.
    profit_energy : float
        Profit / consumed energy, 0 if nothing was consumed.
    """
    profit = objective(schedule, scenario)
    usage = schedule_usage(schedule, scenario).values()
    memory = sum(u.memory for u in usage)
    energy = sum(u.energy for u in usage)
    profit_memory = profit / memory if memory > 0 else 0.0
    profit_energy = profit / energy if energy > 0 else 0.0
    return profit_memory, profit_energy


def improvement(mean: float, reference_mean: float) -> float:
    """
    Relative improvement (mean - reference_mean) / reference_mean.
    """
    if reference_mean == 0:
        return 0.0 if mean == 0 else np.copysign(np.inf, mean)
    return (mean - reference_mean) / reference_mean
