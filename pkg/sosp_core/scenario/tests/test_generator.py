import numpy as np
import pytest

from ...constants import MAX_SLEW_ANGLE
from ...model import scenario_statistics
from ..generator import DENSE_LAT_BOUNDS, DENSE_LON_BOUNDS, GeneratorConfig, generate


def test_generate_deterministic():
    config = GeneratorConfig(n_targets=50, seed=11)
    assert generate(config) == generate(config)
    assert generate(config) != generate(GeneratorConfig(n_targets=50, seed=12))


def test_generate_valid():
    for seed in range(5):
        scenario = generate(GeneratorConfig.dense(80, seed=seed))
        scenario.validate()
        assert scenario.n_tasks == 80
        for opp in scenario.opportunity_records:
            assert 0 <= opp.start < opp.end <= scenario.horizon_seconds
            assert -MAX_SLEW_ANGLE <= opp.angle_lo <= opp.angle_hi <= MAX_SLEW_ANGLE
            assert 8 <= opp.length <= 30
        for task in scenario.task_records:
            assert 2 <= task.weight <= 10


def test_generate_density_ratios():
    en_n, tn_en = [], []
    for seed in range(50):
        stats = scenario_statistics(generate(GeneratorConfig(n_targets=100, seed=seed)))
        en_n.append(stats.en / stats.n)
        tn_en.append(stats.tn / stats.en)
    assert 0.85 <= np.mean(en_n) <= 0.97
    assert 2.2 <= np.mean(tn_en) <= 3.2


def test_generate_dense_area_has_more_conflicts():
    wide, dense = [], []
    for seed in range(5):
        wide.append(scenario_statistics(generate(GeneratorConfig.wide(100, seed=seed))).mean_conflicts)
        dense.append(scenario_statistics(generate(GeneratorConfig.dense(100, seed=seed))).mean_conflicts)
    assert np.mean(dense) > np.mean(wide)


def test_generate_no_targets():
    scenario = generate(GeneratorConfig(n_targets=0))
    scenario.validate()
    assert scenario.n_tasks == 0
    assert len(scenario.opportunities) == 0


def test_GeneratorConfig_presets():
    config = GeneratorConfig.dense(300, seed=4)
    assert config.lat_bounds == DENSE_LAT_BOUNDS
    assert config.lon_bounds == DENSE_LON_BOUNDS
    assert config.seed == 4


def test_GeneratorConfig_dict_round_trip():
    config = GeneratorConfig.dense(30, seed=2, orbit_params={"energy_capacity": 200.0})
    assert GeneratorConfig.from_dict(config.to_dict()) == config


def test_GeneratorConfig_raises():
    # Window longer than the horizon
    with pytest.raises(ValueError):
        GeneratorConfig(horizon_seconds=20, n_orbits=1, window_len_bounds=(8, 30))

    # Unordered bounds
    with pytest.raises(ValueError):
        GeneratorConfig(weight_bounds=(10, 2))

    # Angle ranges wider than the slewing limit
    with pytest.raises(ValueError):
        GeneratorConfig(angle_range_halfwidth_bounds=(2.0, 40.0))

    with pytest.raises(ValueError):
        GeneratorConfig(visibility_prob=1.5)

    with pytest.raises(ValueError):
        GeneratorConfig.from_dict({"n_targets": 10, "area": "dense"})
