from fractions import Fraction as Q

import numpy as np
import pytest

from ergolab.poisson import (
    PoissonModel,
    poisson_count_covariance,
    poisson_gof,
    poisson_wh_experiment,
)
from ergolab.tower import (
    ConstructionParams,
    FinitarySwap,
    LevelSet,
    RationalInterval,
    correlation_interval,
    supp_level_set,
)
from ergolab.constructions import builtin_params, rigid_mixing_pair


@pytest.fixture(scope="module")
def band_model():
    params = rigid_mixing_pair().t_params
    return PoissonModel(params, LevelSet(2, range(700)), depth=2)


def test_window_bookkeeping(band_model):
    assert band_model.n_levels == 700
    assert band_model.level_width == Q(1, 128)
    assert band_model.intensity == Q(700, 128)
    with pytest.raises(ValueError):
        band_model.member_slots(LevelSet(2, [699, 700]))


def test_window_size_is_capped():
    params = builtin_params("chacon")
    with pytest.raises(ValueError):
        PoissonModel(params, LevelSet(11, range(250_000)), depth=11)


def test_configuration_sampler_stays_inside_the_window(band_model):
    rng = np.random.default_rng(4)
    sizes = []
    for _ in range(50):
        config = band_model.sample_configuration(rng)
        sizes.append(len(config))
        for level, offset in config:
            assert 0 <= level < 700
            assert 0.0 <= offset < 1.0
    assert 1 <= np.mean(sizes) <= 12


def test_autocovariance_at_zero_is_the_measure(band_model):
    a = LevelSet(2, range(100, 150))
    r = poisson_count_covariance(band_model, 0, a, a, 10**4, seed=1)
    assert r.exact == RationalInterval(Q(25, 64), Q(25, 64))
    assert r.lost_mass == 0
    assert r.within_five_se


def test_covariance_tracks_the_exact_interval(band_model):
    a = LevelSet(2, range(100, 150))
    b = LevelSet(2, range(90, 200))
    for n in (3, 17, 73):
        r = poisson_count_covariance(band_model, n, a, b, 10**4, seed=n)
        assert r.exact == correlation_interval(
            band_model.params, -n, a, b, 2
        )
        assert r.lost_mass == 0
        assert r.within_five_se, (n, r)


def test_disjoint_sets_have_zero_covariance(band_model):
    a = LevelSet(2, range(100, 150))
    b = LevelSet(2, range(400, 450))
    r = poisson_count_covariance(band_model, 0, a, b, 10**4, seed=2)
    assert r.exact == RationalInterval(Q(0), Q(0))
    assert abs(r.estimate.value) <= 5 * r.estimate.stderr


def test_lost_mass_counts_preimages_that_leave_the_tower(band_model):
    a = LevelSet(2, range(0, 30))
    b = LevelSet(2, range(0, 700))
    r = poisson_count_covariance(band_model, 10, a, b, 10**4, seed=3)
    assert r.lost_mass == Q(10, 128)


def test_covariance_requires_window_membership(band_model):
    outside = LevelSet(2, range(690, 710))
    with pytest.raises(ValueError):
        poisson_count_covariance(band_model, 0, outside, outside, 10**4)


def test_covariance_is_seed_reproducible(band_model):
    a = LevelSet(2, range(100, 150))
    b = LevelSet(2, range(90, 200))
    r1 = poisson_count_covariance(band_model, 3, a, b, 10**4, seed=7)
    r2 = poisson_count_covariance(band_model, 3, a, b, 10**4, seed=7)
    assert r1 == r2


def test_gof_accepts_the_simulator(band_model):
    a = LevelSet(2, range(100, 150))
    g = poisson_gof(band_model, a, 2 * 10**4, seed=5)
    assert g.mean == pytest.approx(25 / 64)
    assert g.n_bins >= 2
    assert g.passed()
    again = poisson_gof(band_model, a, 2 * 10**4, seed=5)
    assert again.p_value == g.p_value


def test_gof_handles_a_sparse_window(band_model):
    g = poisson_gof(band_model, LevelSet(2, [5]), 2 * 10**4, seed=6)
    assert g.mean == pytest.approx(1 / 128)
    assert g.passed()


def test_gof_needs_enough_mass():
    params = rigid_mixing_pair().t_params
    model = PoissonModel(params, LevelSet(2, [5]), depth=2)
    with pytest.raises(ValueError):
        poisson_gof(model, LevelSet(2, [5]), 200, seed=1)


def test_wh_statistic_sits_below_its_majorant(band_model):
    swap = FinitarySwap(stage=1, pair=(1, 3))
    a = LevelSet(2, range(50, 350))
    for n_terms in (50, 100):
        r = poisson_wh_experiment(
            band_model, swap, a, n_terms, 10**4, seed=n_terms
        )
        assert r.lost_mass == 0
        assert r.estimate.value > 0.0
        assert r.below_majorant, r
        assert r.majorant == 2 * float(r.wh_interval.hi)


def test_wh_swap_outside_the_window_is_exactly_silent(band_model):
    swap = FinitarySwap(stage=2, pair=(1200, 1205))
    assert supp_level_set(band_model.params, swap).stage == 2
    a = LevelSet(2, range(50, 350))
    r = poisson_wh_experiment(band_model, swap, a, 50, 10**4, seed=1)
    assert r.estimate.value == 0.0
    assert r.majorant == 0.0


def test_wh_on_the_odometer_band():
    params = builtin_params("odometer")
    model = PoissonModel(params, LevelSet(9, range(300)), depth=9)
    swap = FinitarySwap(stage=3, pair=(2, 5))
    a = LevelSet(9, range(0, 200))
    r = poisson_wh_experiment(model, swap, a, 50, 10**4, seed=8)
    assert r.lost_mass == 0
    assert r.below_majorant


def test_wh_is_seed_reproducible(band_model):
    swap = FinitarySwap(stage=1, pair=(1, 3))
    a = LevelSet(2, range(50, 350))
    r1 = poisson_wh_experiment(band_model, swap, a, 50, 10**4, seed=4)
    r2 = poisson_wh_experiment(band_model, swap, a, 50, 10**4, seed=4)
    assert r1 == r2
