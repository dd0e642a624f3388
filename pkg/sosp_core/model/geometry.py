from typing import Optional, Sequence, Tuple

from ..constants import ANGLE_TOLERANCE

__all__ = ["AngleRange", "Window", "intersect_ranges", "merge_windows", "midpoint"]

AngleRange = Tuple[float, float]
Window = Tuple[int, int]


def intersect_ranges(ranges: Sequence[AngleRange]) -> Optional[AngleRange]:
    """
    Intersect slewing-angle ranges.

    Parameters
    ----------
    ranges : sequence of (float, float)
        Angle ranges [lo, hi] in degrees, each with lo <= hi.

    Returns
    -------
    intersection : (float, float) or None
        The range [max of los, min of his], or None when the ranges do not
        overlap by more than ANGLE_TOLERANCE.

    Raises
    ------
    ValueError : If no ranges are given.
    """
    if len(ranges) == 0:
        raise ValueError("Cannot intersect an empty collection of angle ranges.")

    lo = max(r[0] for r in ranges)
    hi = min(r[1] for r in ranges)
    if lo - hi > ANGLE_TOLERANCE:
        return None
    if lo > hi:
        # Overlap within tolerance collapses to a single angle
        lo = hi = 0.5 * (lo + hi)
    return (lo, hi)


def merge_windows(windows: Sequence[Window]) -> Window:
    """
    Smallest window containing every given window.

    Parameters
    ----------
    windows : sequence of (int, int)
        Time-windows [ts, te] in seconds.

    Returns
    -------
    window : (int, int)
        [min ts, max te].
    """
    return (min(w[0] for w in windows), max(w[1] for w in windows))


def midpoint(angle_range: AngleRange) -> float:
    return 0.5 * (angle_range[0] + angle_range[1])
