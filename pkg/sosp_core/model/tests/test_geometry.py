import numpy as np
import pytest

from ..geometry import intersect_ranges, merge_windows, midpoint


def test_intersect_ranges():
    assert intersect_ranges([(-5.0, 10.0)]) == (-5.0, 10.0)
    assert intersect_ranges([(-5.0, 10.0), (0.0, 20.0)]) == (0.0, 10.0)
    assert intersect_ranges([(-5.0, 10.0), (0.0, 20.0), (8.0, 9.0)]) == (8.0, 9.0)
    assert intersect_ranges([(0.0, 5.0), (6.0, 9.0)]) is None


def test_intersect_ranges_touching():
    assert intersect_ranges([(0.0, 5.0), (5.0, 9.0)]) == (5.0, 5.0)


def test_intersect_ranges_brute_force():
    rng = np.random.default_rng(42)
    grid = np.arange(-330, 331) / 10.0
    for _ in range(200):
        ranges = []
        for _ in range(rng.integers(1, 4)):
            lo = float(rng.integers(-33, 33))
            ranges.append((lo, min(33.0, lo + float(rng.integers(0, 20)))))
        inside = np.ones_like(grid, dtype=bool)
        for lo, hi in ranges:
            inside &= (grid >= lo) & (grid <= hi)

        result = intersect_ranges(ranges)
        if result is None:
            assert not inside.any()
        else:
            assert inside.any()
            assert grid[inside].min() == result[0]
            assert grid[inside].max() == result[1]
        # Order does not matter
        assert intersect_ranges(ranges[::-1]) == result


def test_intersect_ranges_raises():
    with pytest.raises(ValueError):
        intersect_ranges([])


def test_merge_windows():
    assert merge_windows([(0, 10)]) == (0, 10)
    assert merge_windows([(0, 10), (20, 30)]) == (0, 30)
    assert merge_windows([(5, 8), (0, 3), (7, 12)]) == (0, 12)


def test_midpoint():
    assert midpoint((10.0, 20.0)) == 15.0
    assert midpoint((-4.0, -4.0)) == -4.0
