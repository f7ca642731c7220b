"""
Unit tests for spectral efficiency, power gain, RxMER and radiation patterns.
"""

import numpy as np
import pytest

from models.data_models import MeasurementStatus, PatternSample, RisGeometry
from models.exceptions import MetricError
from services.channel_model import complex_gaussian
from services.link_metrics import (
    corrected_noise, find_pattern_peaks, frame_rxmer, half_power_beamwidth, pattern_arrays,
    power_gain_db, radiation_pattern, received_power, rxmer, rxmer_db, spectral_efficiency
)


@pytest.fixture
def linear_array():
    """32 half-wavelength elements along y."""
    return RisGeometry(n_y=32, n_z=1, d_y=0.5, d_z=0.5, wavelength=1.0)


class TestSpectralEfficiency:

    def test_zero_snr(self):
        assert spectral_efficiency([0.0, 0.0]) == 0.0

    def test_sum_over_users(self):
        assert spectral_efficiency([1.0, 3.0]) == pytest.approx(3.0)

    def test_negative_snr_rejected(self):
        with pytest.raises(MetricError):
            spectral_efficiency([1.0, -0.1])


class TestPower:

    def test_received_power(self):
        assert received_power(np.array([1.0, 1j, -2.0])) == pytest.approx(2.0)

    def test_empty_frame_rejected(self):
        with pytest.raises(MetricError):
            received_power(np.array([]))

    def test_gain_values(self):
        assert power_gain_db(1e-3, 1e-3) == 0.0
        assert power_gain_db(100.0, 1.0) == pytest.approx(20.0)

    def test_measured_gain(self):
        p_off = 10 ** (-51.5 / 10)
        p_on = 10 ** (-24.9 / 10)
        assert power_gain_db(p_on, p_off) == pytest.approx(26.6)

    def test_gain_is_antisymmetric(self):
        assert power_gain_db(3.0, 0.7) == pytest.approx(-power_gain_db(0.7, 3.0))

    def test_non_positive_power_rejected(self):
        with pytest.raises(MetricError):
            power_gain_db(0.0, 1.0)


class TestRxmer:

    def test_matches_inverse_noise_power(self):
        rng = np.random.default_rng(21)
        reference = np.exp(2j * np.pi * rng.uniform(size=100_000))
        measured = reference + complex_gaussian(rng, 100_000, 0.1)
        result = rxmer(measured, reference)
        assert result.status is MeasurementStatus.OK
        assert result.ratio == pytest.approx(10.0, rel=0.03)
        assert rxmer_db(result) == pytest.approx(10.0, abs=0.15)

    def test_zero_error_is_unbounded(self):
        reference = np.ones(8, dtype=complex)
        result = rxmer(reference.copy(), reference)
        assert result.status is MeasurementStatus.UNBOUNDED
        assert result.ratio is None
        assert rxmer_db(result) is None

    def test_length_mismatch_rejected(self):
        with pytest.raises(MetricError):
            rxmer(np.ones(3), np.ones(4))

    def test_frame_rxmer_equalizes_gain(self):
        rng = np.random.default_rng(22)
        pilots = np.ones(50_000, dtype=complex)
        samples = (0.5 - 0.5j) * pilots + complex_gaussian(rng, 50_000, 0.05)
        # |gain|^2 = 0.5, so the ratio is 0.5 / 0.05
        assert frame_rxmer(samples, pilots).ratio == pytest.approx(10.0, rel=0.03)

    def test_noiseless_frame_is_unbounded(self):
        pilots = np.ones(16, dtype=complex)
        assert not frame_rxmer(2.0 * pilots, pilots).is_bounded

    def test_corrected_noise(self):
        assert corrected_noise(2.0, 4.0) == pytest.approx(0.5)

    def test_correction_recovers_noise_power(self):
        rng = np.random.default_rng(23)
        pilots = np.ones(100_000, dtype=complex)
        samples = pilots + complex_gaussian(rng, 100_000, 0.2)
        sigma2 = corrected_noise(received_power(samples), frame_rxmer(samples, pilots).ratio)
        # p_r / RxMER = (1 + sigma^2) sigma^2
        assert sigma2 == pytest.approx(1.2 * 0.2, rel=0.03)

    @pytest.mark.parametrize('p_r, ratio', [(1.0, 0.0), (1.0, -2.0), (-1.0, 2.0), (1.0, None)])
    def test_correction_preconditions(self, p_r, ratio):
        with pytest.raises(MetricError):
            corrected_noise(p_r, ratio)


class TestRadiationPattern:

    def test_uniform_codeword_points_broadside(self, linear_array):
        pattern = radiation_pattern(linear_array, np.ones(32))
        azimuth, gain = pattern_arrays(pattern)
        assert azimuth.size == 1801
        assert gain.max() == 0.0
        assert azimuth[np.argmax(gain)] == 0.0
        assert find_pattern_peaks(pattern) == [0.0]

    def test_custom_grid(self, linear_array):
        pattern = radiation_pattern(linear_array, np.ones(32), grid_deg=[-10.0, 0.0, 10.0])
        assert [p.azimuth_deg for p in pattern] == [-10.0, 0.0, 10.0]
        assert isinstance(pattern[0], PatternSample)

    def test_steered_codeword(self, linear_array):
        target = np.deg2rad(20.0)
        theta = np.exp(2j * np.pi * 0.5 * np.sin(target) * np.arange(32))
        peaks = find_pattern_peaks(radiation_pattern(linear_array, theta), floor_db=-6.0)
        assert peaks == [pytest.approx(20.0, abs=0.1)]

    def test_silent_codeword_rejected(self, linear_array):
        with pytest.raises(MetricError):
            radiation_pattern(linear_array, np.zeros(32))

    def test_empty_grid_rejected(self, linear_array):
        with pytest.raises(MetricError):
            radiation_pattern(linear_array, np.ones(32), grid_deg=[])


class TestBeamwidth:

    def test_coarse_grid_matches_fine_reference(self, linear_array):
        coarse = radiation_pattern(linear_array, np.ones(32), grid_deg=np.arange(-90.0, 91.0, 1.0))
        fine = radiation_pattern(linear_array, np.ones(32), grid_deg=np.round(np.arange(-2000, 2001) * 0.01, 2))
        reference = half_power_beamwidth(fine, 0.0)
        measured = half_power_beamwidth(coarse, 0.0)
        assert reference.status is MeasurementStatus.OK
        assert reference.width_deg == pytest.approx(3.17, abs=0.02)
        assert measured.width_deg == pytest.approx(reference.width_deg, rel=0.10)
        assert measured.left_deg < 0 < measured.right_deg

    def test_grid_too_coarse_is_unresolved(self, linear_array):
        pattern = radiation_pattern(linear_array, np.ones(32), grid_deg=[-1.0, 0.0, 1.0])
        result = half_power_beamwidth(pattern, 0.0)
        assert result.status is MeasurementStatus.UNRESOLVED
        assert result.width_deg is None

    def test_empty_pattern_rejected(self):
        with pytest.raises(MetricError):
            half_power_beamwidth([], 0.0)

    def test_peak_floor(self):
        pattern = [PatternSample(az, g) for az, g in
                   [(-2.0, -20.0), (-1.0, -8.0), (0.0, -12.0), (1.0, 0.0), (2.0, -4.0), (3.0, -30.0)]]
        assert find_pattern_peaks(pattern, floor_db=-6.0) == [1.0]
        assert find_pattern_peaks(pattern, floor_db=-10.0) == [-1.0, 1.0]
