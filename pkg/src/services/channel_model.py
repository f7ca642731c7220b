"""
Channel synthesis service for the RIS Beamforming Simulator.

This module draws Saleh-Valenzuela path sets, builds BS-RIS, RIS-user and
cascaded channels, and evaluates the narrowband received-signal model
y = (h_d + theta^T h) s + n with circularly symmetric Gaussian noise.

Randomness always comes from an explicit numpy Generator so concurrent
workers on distinct streams never interfere.
"""

import logging
from typing import Optional

import numpy as np

from models.data_models import (
    ChannelRealization, PathSet, RisGeometry, ScenarioConfig, SensingPlan, TransmitterDescriptor
)
from models.exceptions import ChannelModelError
from services.array_geometry import spherical_steering_vector, steering_vector

logger = logging.getLogger('RisBeamformingSim.channel_model')

# Angular spread of the scatterers around the panel broadside
SCATTER_AZIMUTH_RANGE = (-np.pi / 2, np.pi / 2)
SCATTER_ELEVATION_RANGE = (np.pi / 3, 2 * np.pi / 3)


def complex_gaussian(rng: np.random.Generator, size, variance: float = 1.0) -> np.ndarray:
    """Draw CN(0, variance) samples."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def _path_sum(geom: RisGeometry, paths: PathSet, dominant_distance: Optional[float] = None) -> np.ndarray:
    vectors = [steering_vector(geom, az, el) for az, el in zip(paths.azimuths, paths.elevations)]
    if dominant_distance is not None:
        vectors[0] = spherical_steering_vector(geom, paths.azimuths[0], paths.elevations[0],
                                               dominant_distance)
    return np.column_stack(vectors) @ paths.gains


def generate_bs_ris_channel(geom: RisGeometry, paths: PathSet,
                            dominant_distance: Optional[float] = None) -> np.ndarray:
    """
    BS-to-RIS channel g = sum_l beta_l a(azimuth_l, elevation_l).

    Args:
        geom: Array geometry
        paths: Path gains and angles
        dominant_distance: When given, the first path uses a spherical wavefront
            from a source at this distance

    Returns:
        Complex vector of length N
    """
    return _path_sum(geom, paths, dominant_distance)


def generate_ris_user_channel(geom: RisGeometry, paths: PathSet,
                              dominant_distance: Optional[float] = None) -> np.ndarray:
    """RIS-to-user channel h_r, stored as a length-N vector."""
    return _path_sum(geom, paths, dominant_distance)


def cascade(h_r: np.ndarray, g: np.ndarray) -> np.ndarray:
    """
    Cascaded channel diag(h_r) g.

    Raises:
        ChannelModelError: If the vectors differ in length
    """
    h_r = np.asarray(h_r, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if h_r.shape[-1] != g.shape[-1]:
        raise ChannelModelError(
            f"Cannot cascade vectors of length {h_r.shape[-1]} and {g.shape[-1]}",
            operation="cascade",
        )
    return h_r * g


def received_signal(theta: Optional[np.ndarray], h_d: complex, h: np.ndarray, s,
                    sigma2: float, rng: Optional[np.random.Generator] = None):
    """
    Received sample(s) y = (h_d + theta^T h) s + n.

    Args:
        theta: Reflection vector, or None for the absorbing (RIS-off) state
        h_d: Direct-link scalar
        h: Cascaded channel, length N
        s: Transmitted symbol or array of symbols
        sigma2: Noise power; 0 returns the noiseless value without touching rng
        rng: Noise generator, required when sigma2 > 0

    Returns:
        Complex scalar, or array shaped like s
    """
    if sigma2 < 0:
        raise ChannelModelError(f"Noise power must be non-negative, got {sigma2}",
                                operation="received_signal")
    effective = h_d if theta is None else h_d + np.dot(theta, h)
    y = effective * np.asarray(s)
    if sigma2 > 0:
        if rng is None:
            raise ChannelModelError("A random generator is required for noisy samples",
                                    operation="received_signal")
        y = y + complex_gaussian(rng, np.shape(y), sigma2)
    return y[()] if isinstance(y, np.ndarray) and y.ndim == 0 else y


def transmit_frame(theta: Optional[np.ndarray], h_d: complex, h: np.ndarray, pilots: np.ndarray,
                   noise: np.ndarray) -> np.ndarray:
    """
    A frame of received samples with a caller-supplied noise draw.

    Sharing one noise draw between the RIS-off and RIS-on frames makes their
    power ratio depend only on the codeword.
    """
    pilots = np.asarray(pilots)
    if noise.shape != pilots.shape:
        raise ChannelModelError("Noise and pilot frames must have the same length",
                                operation="transmit_frame")
    return received_signal(theta, h_d, h, pilots, 0.0) + noise


def measure_sensing_slots(plan: SensingPlan, h_d: complex, h: np.ndarray,
                          noise_power: float, rng: np.random.Generator) -> np.ndarray:
    """
    Slot measurements y_p = (h_d + theta_p^T h) s_p + n_p for every sensing pattern.

    Returns:
        Complex vector of length P
    """
    effective = h_d + plan.theta.T @ h
    return effective * plan.pilots + complex_gaussian(rng, plan.n_slots, noise_power)


def draw_path_set(n_paths: int, link_gain: float, azimuth: float, elevation: float,
                  mode: str, rician_factor: float, rng: np.random.Generator) -> PathSet:
    """
    Draw one link's path set.

    The first path points at the descriptor angle; the rest are scatterers with
    uniformly drawn angles. In 'multipath' mode every gain is CN(0, rho/L). In
    'los' mode the first path carries rho*kappa/(kappa+1) with a uniform phase and
    the scatterers share the remainder.

    Args:
        n_paths: Path count L
        link_gain: Link-budget scale rho
        azimuth: Dominant azimuth in radians
        elevation: Dominant elevation in radians
        mode: 'multipath' or 'los'
        rician_factor: kappa, used in 'los' mode
        rng: Random generator

    Returns:
        PathSet with L paths
    """
    if n_paths < 1:
        raise ChannelModelError(f"Path count must be at least 1, got {n_paths}", operation="draw_path_set")
    azimuths = np.empty(n_paths)
    elevations = np.empty(n_paths)
    azimuths[0], elevations[0] = azimuth, elevation
    azimuths[1:] = rng.uniform(*SCATTER_AZIMUTH_RANGE, size=n_paths - 1)
    elevations[1:] = rng.uniform(*SCATTER_ELEVATION_RANGE, size=n_paths - 1)

    if mode == 'multipath':
        gains = complex_gaussian(rng, n_paths, link_gain / n_paths)
    elif mode == 'los':
        gains = np.empty(n_paths, dtype=complex)
        if n_paths == 1:
            dominant_power = link_gain
        else:
            dominant_power = link_gain * rician_factor / (rician_factor + 1.0)
            scatter_power = link_gain / ((rician_factor + 1.0) * (n_paths - 1))
            gains[1:] = complex_gaussian(rng, n_paths - 1, scatter_power)
        gains[0] = np.sqrt(dominant_power) * np.exp(2j * np.pi * rng.uniform())
    else:
        raise ChannelModelError(f"Unknown channel mode: {mode}", operation="draw_path_set")
    return PathSet(gains, azimuths, elevations)


def _descriptor_channel(config: ScenarioConfig, descriptor: TransmitterDescriptor,
                        n_paths: int, rng: np.random.Generator) -> np.ndarray:
    paths = draw_path_set(
        n_paths,
        descriptor.link_gain,
        np.deg2rad(descriptor.azimuth_deg),
        np.deg2rad(descriptor.elevation_deg),
        config.channel_mode,
        config.rician_factor,
        rng,
    )
    distance = descriptor.distance_m if config.wavefront == 'spherical' else None
    return _path_sum(config.geometry, paths, distance)


def draw_scenario(config: ScenarioConfig, rng: Optional[np.random.Generator] = None) -> ChannelRealization:
    """
    Draw every channel of the scenario.

    Args:
        config: Scenario description
        rng: Generator; defaults to one seeded with config.seed

    Returns:
        ChannelRealization with cascaded vectors populated
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)

    g = _descriptor_channel(config, config.transmitter, config.bs_paths, rng)
    h_r = np.empty((config.n_users, config.geometry.n_elements), dtype=complex)
    h_d = np.empty(config.n_users, dtype=complex)
    for k, user in enumerate(config.users):
        h_r[k] = _descriptor_channel(config, user, config.user_paths, rng)
        h_d[k] = np.sqrt(user.direct_power) * complex_gaussian(rng, None)

    realization = ChannelRealization(g=g, h_r=h_r, h_d=h_d, h=cascade(h_r, g))
    logger.debug(
        "Drew scenario: K=%d, N=%d, mean cascaded power %.3e",
        config.n_users, config.geometry.n_elements, float(np.mean(np.abs(realization.h) ** 2)),
    )
    return realization
