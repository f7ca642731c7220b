"""
Link metrics service for the RIS Beamforming Simulator.

Spectral efficiency, received power and power gain, the receive modulation
error ratio (RxMER) with the noise-power correction derived from it, and the
computed far-field radiation pattern of a codeword with its half-power beamwidth.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from models.data_models import (
    BeamwidthResult, MeasurementStatus, PatternSample, RisGeometry, RxmerResult
)
from models.exceptions import MetricError
from services.array_geometry import steering_vector

logger = logging.getLogger('RisBeamformingSim.link_metrics')

HALF_POWER_DB = 3.0
_PATTERN_FLOOR = 1e-30


def spectral_efficiency(gamma: Sequence[float]) -> float:
    """Sum over users of log2(1 + gamma_k) in bits/s/Hz."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise MetricError("SNR values must be non-negative", metric="spectral_efficiency")
    return float(np.sum(np.log2(1.0 + gamma)))


def received_power(samples: np.ndarray) -> float:
    """Average power of a frame, mean |x_i|^2 in watts."""
    samples = np.asarray(samples)
    if samples.size == 0:
        raise MetricError("Cannot measure the power of an empty frame", metric="received_power")
    return float(np.mean(np.abs(samples) ** 2))


def power_gain_db(p_on: float, p_off: float) -> float:
    """10 log10(p_on / p_off)."""
    if p_on <= 0 or p_off <= 0:
        raise MetricError(f"Powers must be positive, got {p_on} and {p_off}", metric="power_gain_db")
    return float(10.0 * np.log10(p_on / p_off))


def rxmer(measured: np.ndarray, reference: np.ndarray) -> RxmerResult:
    """
    Receive modulation error ratio sum|R|^2 / sum|S - R|^2.

    Zero error energy yields an UNBOUNDED result rather than a number.
    """
    measured = np.asarray(measured)
    reference = np.asarray(reference)
    if measured.shape != reference.shape or measured.size == 0:
        raise MetricError("Measured and reference frames must have the same non-zero length",
                          metric="rxmer")
    error_energy = float(np.sum(np.abs(measured - reference) ** 2))
    if error_energy == 0.0:
        return RxmerResult(ratio=None, status=MeasurementStatus.UNBOUNDED)
    return RxmerResult(ratio=float(np.sum(np.abs(reference) ** 2)) / error_energy,
                       status=MeasurementStatus.OK)


def rxmer_db(result: RxmerResult) -> Optional[float]:
    """dB form of a bounded RxMER; None when unbounded."""
    if not result.is_bounded:
        return None
    return float(10.0 * np.log10(result.ratio))


def frame_rxmer(samples: np.ndarray, pilots: np.ndarray) -> RxmerResult:
    """
    RxMER of a pilot frame against its equalized reference.

    The reference is the least-squares channel estimate of the frame times the
    known pilots, as a receiver forms it after equalization.
    """
    pilots = np.asarray(pilots, dtype=complex)
    samples = np.asarray(samples, dtype=complex)
    energy = float(np.sum(np.abs(pilots) ** 2))
    if energy == 0.0:
        raise MetricError("Reference pilots are all zero", metric="frame_rxmer")
    gain = np.vdot(pilots, samples) / energy
    return rxmer(samples, gain * pilots)


def corrected_noise(p_r: float, rxmer_value: float) -> float:
    """Noise-power correction p_r / RxMER in watts."""
    if rxmer_value is None or rxmer_value <= 0:
        raise MetricError(f"RxMER must be positive, got {rxmer_value}", metric="corrected_noise")
    if p_r < 0:
        raise MetricError(f"Received power must be non-negative, got {p_r}", metric="corrected_noise")
    return float(p_r / rxmer_value)


def radiation_pattern(geom: RisGeometry, theta: np.ndarray, incident_azimuth: float = 0.0,
                      incident_elevation: float = np.pi / 2,
                      grid_deg: Optional[Sequence[float]] = None) -> List[PatternSample]:
    """
    Normalized azimuth cut of the reflected array factor at elevation pi/2.

    gain(psi) is proportional to |sum_n theta_n a_n(incident) a_n(psi)|^2 with
    isotropic elements, normalized so the maximum is 0 dB.

    Args:
        geom: Array geometry
        theta: Codeword, length N
        incident_azimuth: Incidence azimuth in radians
        incident_elevation: Incidence elevation in radians
        grid_deg: Observation azimuths in degrees; -90..90 in 0.1 degree steps by default

    Returns:
        One PatternSample per grid azimuth
    """
    if grid_deg is None:
        grid_deg = np.round(np.arange(-900, 901) * 0.1, 1)
    grid_deg = np.asarray(grid_deg, dtype=float)
    if grid_deg.size == 0:
        raise MetricError("Pattern grid must be non-empty", metric="radiation_pattern")

    illuminated = np.asarray(theta) * steering_vector(geom, incident_azimuth, incident_elevation)
    observation = np.vstack([steering_vector(geom, np.deg2rad(az), np.pi / 2) for az in grid_deg])
    power = np.abs(observation @ illuminated) ** 2
    peak = float(power.max())
    if peak <= 0:
        raise MetricError("Codeword radiates no power", metric="radiation_pattern")
    gain_db = 10.0 * np.log10(np.maximum(power / peak, _PATTERN_FLOOR))
    return [PatternSample(float(az), float(g)) for az, g in zip(grid_deg, gain_db)]


def pattern_arrays(pattern: Sequence[PatternSample]) -> Tuple[np.ndarray, np.ndarray]:
    """Split a pattern into (azimuth_deg, gain_db) arrays."""
    return (np.array([p.azimuth_deg for p in pattern]),
            np.array([p.gain_db for p in pattern]))


def find_pattern_peaks(pattern: Sequence[PatternSample], floor_db: float = -6.0) -> List[float]:
    """Azimuths of local maxima whose gain is at least floor_db."""
    azimuth, gain = pattern_arrays(pattern)
    peaks = []
    for i in range(gain.size):
        left = gain[i - 1] if i > 0 else -np.inf
        right = gain[i + 1] if i + 1 < gain.size else -np.inf
        if gain[i] >= left and gain[i] > right and gain[i] >= floor_db:
            peaks.append(float(azimuth[i]))
    return peaks


def _crossing(az_inside: float, g_inside: float, az_outside: float, g_outside: float,
              threshold: float) -> float:
    fraction = (g_inside - threshold) / (g_inside - g_outside)
    return az_inside + fraction * (az_outside - az_inside)


def half_power_beamwidth(pattern: Sequence[PatternSample], peak_azimuth: float) -> BeamwidthResult:
    """
    Width between the -3 dB crossings around a peak, linearly interpolated.

    Args:
        pattern: Pattern sorted by azimuth
        peak_azimuth: Azimuth of the lobe in degrees

    Returns:
        BeamwidthResult; UNRESOLVED when either side never drops 3 dB within the grid
    """
    azimuth, gain = pattern_arrays(pattern)
    if azimuth.size == 0:
        raise MetricError("Pattern is empty", metric="half_power_beamwidth")
    peak = int(np.argmin(np.abs(azimuth - peak_azimuth)))
    threshold = gain[peak] - HALF_POWER_DB

    left = peak
    while left > 0 and gain[left - 1] > threshold:
        left -= 1
    right = peak
    while right < gain.size - 1 and gain[right + 1] > threshold:
        right += 1
    if left == 0 or right == gain.size - 1:
        logger.warning("Half-power beamwidth unresolved around %.2f deg", peak_azimuth)
        return BeamwidthResult(width_deg=None, status=MeasurementStatus.UNRESOLVED)

    left_deg = _crossing(azimuth[left], gain[left], azimuth[left - 1], gain[left - 1], threshold)
    right_deg = _crossing(azimuth[right], gain[right], azimuth[right + 1], gain[right + 1], threshold)
    return BeamwidthResult(
        width_deg=float(right_deg - left_deg),
        status=MeasurementStatus.OK,
        left_deg=float(left_deg),
        right_deg=float(right_deg),
    )
