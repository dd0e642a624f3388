import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

import numpy as np

from ..constants import ANNEAL_DEFAULTS

logger = logging.getLogger(__name__)

__all__ = ["Structure", "NeighborhoodStats", "select_structure", "update_probabilities"]

PROBABILITY_TOLERANCE = 1e-12


class Structure(IntEnum):
    INSERT_REMOVE = 1
    MIGRATE = 2


@dataclass(frozen=True)
class NeighborhoodStats:
    """
    Selection and success counts of the two neighborhood structures since the
    last probability update, and their current execution probabilities.

    Counts and probabilities are indexed by structure - 1.
    """

    sel: Tuple[int, int] = (0, 0)
    suc: Tuple[int, int] = (0, 0)
    probs: Tuple[float, float] = (ANNEAL_DEFAULTS["pro_1"], ANNEAL_DEFAULTS["pro_2"])

    def __post_init__(self):
        if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(f"probs must be non-negative and sum to 1, got {self.probs}.")
        if any(s < 0 for s in self.sel + self.suc):
            raise ValueError("sel and suc must be non-negative.")
        if any(s > n for s, n in zip(self.suc, self.sel)):
            raise ValueError("suc cannot exceed sel.")

    @classmethod
    def from_probabilities(cls, pro_1: float, pro_2: float) -> "NeighborhoodStats":
        return cls(probs=(pro_1, pro_2))

    def record(self, structure: Structure, improved: bool) -> "NeighborhoodStats":
        """
        Count one selection of a structure, and one success if it improved the
        current solution.
        """
        i = int(structure) - 1
        sel = list(self.sel)
        suc = list(self.suc)
        sel[i] += 1
        if improved:
            suc[i] += 1
        return NeighborhoodStats(sel=tuple(sel), suc=tuple(suc), probs=self.probs)


def select_structure(stats: NeighborhoodStats, rng: np.random.Generator) -> Structure:
    """
    Roulette wheel choice of a neighborhood structure.

    Parameters
    ----------
    stats : `~sosp_core.search.selection.NeighborhoodStats`
        Current execution probabilities.
    rng : `~numpy.random.Generator`
        Random number generator of the run. Exactly one draw is made.

    Returns
    -------
    structure : `~sosp_core.search.selection.Structure`
        INSERT_REMOVE with probability pro_1, otherwise MIGRATE.
    """
    if rng.random() < stats.probs[0]:
        return Structure.INSERT_REMOVE
    return Structure.MIGRATE


def update_probabilities(stats: NeighborhoodStats, eta: float) -> NeighborhoodStats:
    """
    Blend each structure's probability with its recent success ratio and
    renormalize, then reset the counters.

    pro'_i = eta * pro_i + (1 - eta) * suc_i / sel_i, and the results are divided by
    their sum. A structure that was never selected contributes a ratio of 0.

    Parameters
    ----------
    stats : `~sosp_core.search.selection.NeighborhoodStats`
        Counts and probabilities of the last period.
    eta : float
        Reaction factor in (0, 1]. With eta = 1 the probabilities are unchanged.

    Returns
    -------
    stats : `~sosp_core.search.selection.NeighborhoodStats`
        Zeroed counts and the updated probabilities.
    """
    ratios = [s / n if n > 0 else 0.0 for s, n in zip(stats.suc, stats.sel)]
    blended = [eta * p + (1.0 - eta) * q for p, q in zip(stats.probs, ratios)]
    total = sum(blended)
    if total <= 0:
        probs = stats.probs
    else:
        probs = (blended[0] / total, 1.0 - blended[0] / total)
    logger.debug(
        f"Structure probabilities {stats.probs} -> {probs} (sel={stats.sel}, suc={stats.suc})."
    )
    return NeighborhoodStats(probs=probs)
