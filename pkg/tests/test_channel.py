import numpy as np
import pytest
from scipy import stats

from mmwv2v.channel import (
    ChannelParams,
    fspl_intercept,
    normalized_noise,
    path_loss,
    sample_fading,
)
from mmwv2v.exceptions import ConfigError, InvalidArgument

from oracles import (
    FROZEN_C_28GHZ,
    FROZEN_PL_RATIO_100_200,
    FROZEN_SIGMA_NF0,
    FROZEN_SIGMA_NF9,
    oracle_path_loss,
    regularized_lower_gamma,
)


class TestIntercept:
    def test_matches_frozen_28ghz_value(self):
        assert fspl_intercept(28e9) == pytest.approx(FROZEN_C_28GHZ, rel=1e-12)

    def test_default_params_derive_it(self):
        p = ChannelParams()
        assert p.pathloss_intercept == pytest.approx(FROZEN_C_28GHZ, rel=1e-12)

    def test_scales_with_inverse_square_of_frequency(self):
        assert fspl_intercept(56e9) == pytest.approx(FROZEN_C_28GHZ / 4.0, rel=1e-12)

    def test_nonpositive_frequency_rejected(self):
        with pytest.raises(InvalidArgument):
            fspl_intercept(0.0)


class TestPathLoss:
    def test_saturates_at_unity_below_knee(self):
        p = ChannelParams()
        # knee where C r^-alpha crosses 1: C^(1/alpha) ~ 4.353 mm
        assert path_loss(4e-3, p) == 1.0
        assert path_loss(5e-3, p) < 1.0

    def test_distance_doubling_ratio(self):
        p = ChannelParams()
        ratio = path_loss(100.0, p) / path_loss(200.0, p)
        assert ratio == pytest.approx(2.0 ** 2.6, rel=1e-12)
        assert ratio == pytest.approx(FROZEN_PL_RATIO_100_200, rel=1e-12)

    def test_agrees_with_reference_formula(self):
        p = ChannelParams()
        for r in (0.01, 1.0, 25.0, 100.0, 3_000.0):
            assert path_loss(r, p) == pytest.approx(
                oracle_path_loss(r, FROZEN_C_28GHZ, 2.6), rel=1e-12
            )

    def test_vectorized_matches_scalar(self):
        p = ChannelParams()
        r = np.array([0.001, 0.5, 10.0, 400.0])
        out = path_loss(r, p)
        assert out.shape == r.shape
        for k in range(len(r)):
            assert out[k] == path_loss(float(r[k]), p)

    def test_nonpositive_distance_rejected(self):
        p = ChannelParams()
        with pytest.raises(InvalidArgument):
            path_loss(0.0, p)
        with pytest.raises(InvalidArgument):
            path_loss(np.array([1.0, -2.0]), p)


class TestFading:
    @pytest.mark.parametrize("m", [1.0, 2.0, 3.0, 5.0])
    def test_literal_gamma_moments(self, m, rng):
        # Gamma(shape=m, scale=1): mean m, variance m
        n = 200_000
        draws = sample_fading(m, rng, size=n)
        se_mean = np.sqrt(m / n)
        assert abs(draws.mean() - m) < 3 * se_mean
        se_var = np.sqrt((2 * m * m + 6 * m) / n)
        assert abs(draws.var() - m) < 3 * se_var

    def test_unit_mean_mode(self, rng):
        n = 200_000
        draws = sample_fading(3.0, rng, size=n, unit_mean=True)
        se = np.sqrt((1.0 / 3.0) / n)
        assert abs(draws.mean() - 1.0) < 3 * se

    def test_m_equal_one_is_rayleigh_power(self, rng):
        draws = sample_fading(1.0, rng, size=200_000)
        stat = stats.kstest(draws, "expon").statistic
        assert stat < 0.01

    def test_cdf_matches_gamma_law(self, rng):
        m = 3.0
        draws = sample_fading(m, rng, size=100_000)
        empirical = (draws <= 3.0).mean()
        assert empirical == pytest.approx(regularized_lower_gamma(m, 3.0), abs=0.005)

    def test_small_shape_rejected(self, rng):
        with pytest.raises(InvalidArgument):
            sample_fading(0.3, rng)
        with pytest.raises(ConfigError):
            ChannelParams(nakagami_m=0.3)


class TestNoise:
    def test_frozen_values(self):
        assert normalized_noise(ChannelParams(noise_figure_db=0.0)) == pytest.approx(
            FROZEN_SIGMA_NF0, rel=1e-9
        )
        assert normalized_noise(ChannelParams()) == pytest.approx(FROZEN_SIGMA_NF9, rel=1e-12)

    def test_ten_db_is_factor_ten(self):
        lo = normalized_noise(ChannelParams(noise_figure_db=0.0))
        hi = normalized_noise(ChannelParams(noise_figure_db=10.0))
        assert hi == pytest.approx(10.0 * lo, rel=1e-12)

    def test_doubling_power_halves_normalized_noise(self):
        base = normalized_noise(ChannelParams())
        loud = normalized_noise(ChannelParams(tx_power=2.0))
        assert loud == pytest.approx(base / 2.0, rel=1e-12)

    def test_property_matches_function(self):
        p = ChannelParams(noise_figure_db=4.0)
        assert p.normalized_noise == normalized_noise(p)


class TestValidation:
    def test_errors_are_aggregated(self):
        with pytest.raises(ConfigError) as err:
            ChannelParams(bandwidth=-1.0, pathloss_exponent=0.0, tx_power=0.0)
        assert len(err.value.errors) == 3

    def test_explicit_intercept_kept(self):
        p = ChannelParams(pathloss_intercept=1e-6)
        assert p.pathloss_intercept == 1e-6
