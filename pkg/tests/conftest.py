"""
Shared fixtures for the RIS Beamforming Simulator test suite.
"""

import os
import sys

import numpy as np
import pytest

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from models.data_models import ExperimentConfig, RisGeometry, ScenarioConfig, UserDescriptor  # noqa: E402


@pytest.fixture
def rng():
    """Deterministic generator for a single test."""
    return np.random.default_rng(12345)


@pytest.fixture
def half_wave_geometry():
    """4 x 4 half-wavelength panel with 1-bit phases."""
    return RisGeometry(n_y=4, n_z=4, d_y=0.5, d_z=0.5, wavelength=1.0, tau=1)


@pytest.fixture
def sparse_geometry():
    """16 x 16 half-wavelength panel, N = 256, for the recovery checks."""
    return RisGeometry(n_y=16, n_z=16, d_y=0.5, d_z=0.5, wavelength=1.0, tau=1)


@pytest.fixture
def small_scenario(half_wave_geometry):
    """Two LoS users on the 4 x 4 panel with a visible direct link."""
    return ScenarioConfig(
        geometry=half_wave_geometry,
        users=[
            UserDescriptor(azimuth_deg=-28.0, link_gain=1.0, direct_power=0.5),
            UserDescriptor(azimuth_deg=21.0, link_gain=1.0, direct_power=0.5),
        ],
        noise_power=0.1,
        channel_mode='los',
    )


@pytest.fixture
def small_config(small_scenario, tmp_path):
    """3 pilot counts x 2 power levels x 5 trials on the small scenario."""
    return ExperimentConfig(
        scenario=small_scenario,
        pilot_counts=[4, 8, 12],
        tx_power_db=[0.0, 10.0],
        trials=5,
        seed=2024,
        t_max=20,
        frame_length=64,
        output_path=str(tmp_path / 'results.csv'),
    )
