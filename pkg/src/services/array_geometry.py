"""
Array geometry service for the RIS Beamforming Simulator.

This module provides steering vectors of the uniform planar RIS, the unitary
two-dimensional DFT that maps element-domain channels to the angular domain,
the near-field boundary distance, and the discrete phase alphabet.

All functions are pure and safe to call from concurrent workers.
"""

from functools import lru_cache

import numpy as np
import scipy.fft
import scipy.linalg

from models.data_models import PhaseAlphabet, RisGeometry
from models.exceptions import GeometryError

SPEED_OF_LIGHT = 299_792_458.0

# Laboratory panel: 32 columns along y, 16 rows along z, 5.8 GHz carrier
LAB_PANEL_FREQUENCY_HZ = 5.8e9
LAB_PANEL_SPACING_Y_M = 14.3e-3
LAB_PANEL_SPACING_Z_M = 10.27e-3


def lab_panel_geometry(tau: int = 1) -> RisGeometry:
    """Return the 16 x 32 laboratory panel geometry with the given phase bits."""
    return RisGeometry(
        n_y=32,
        n_z=16,
        d_y=LAB_PANEL_SPACING_Y_M,
        d_z=LAB_PANEL_SPACING_Z_M,
        wavelength=SPEED_OF_LIGHT / LAB_PANEL_FREQUENCY_HZ,
        tau=tau,
    )


def steering_vector(geom: RisGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """
    Far-field steering vector alpha_y kron alpha_z.

    Args:
        geom: Array geometry
        azimuth: Azimuth in radians
        elevation: Elevation in radians, pi/2 being the horizontal plane

    Returns:
        Complex vector of length N, y-index major, first entry exactly 1
    """
    m = np.arange(geom.n_y)
    n = np.arange(geom.n_z)
    phase_y = -2j * np.pi * geom.d_y / geom.wavelength * np.sin(azimuth) * np.sin(elevation)
    phase_z = -2j * np.pi * geom.d_z / geom.wavelength * np.cos(elevation)
    return np.kron(np.exp(phase_y * m), np.exp(phase_z * n))


def element_positions(geom: RisGeometry) -> np.ndarray:
    """Element coordinates (x, y, z) in meters, shape (N, 3), panel in the x = 0 plane."""
    y, z = np.meshgrid(np.arange(geom.n_y) * geom.d_y,
                       np.arange(geom.n_z) * geom.d_z, indexing='ij')
    return np.column_stack([np.zeros(geom.n_elements), y.ravel(), z.ravel()])


def spherical_steering_vector(geom: RisGeometry, azimuth: float, elevation: float,
                              distance: float) -> np.ndarray:
    """
    Exact-path-length response to a point source at finite distance.

    The phase of every element is taken relative to element (0, 0), so the
    vector converges to steering_vector as the distance grows.

    Args:
        geom: Array geometry
        azimuth: Source azimuth in radians
        elevation: Source elevation in radians
        distance: Distance from element (0, 0) in meters

    Returns:
        Complex vector of length N with unit-modulus entries
    """
    if distance <= 0:
        raise GeometryError(f"Source distance must be positive, got {distance}", field_name="distance")
    direction = np.array([
        np.cos(azimuth) * np.sin(elevation),
        np.sin(azimuth) * np.sin(elevation),
        np.cos(elevation),
    ])
    source = distance * direction
    path_lengths = np.linalg.norm(source[np.newaxis, :] - element_positions(geom), axis=1)
    return np.exp(2j * np.pi * (path_lengths - path_lengths[0]) / geom.wavelength)


@lru_cache(maxsize=8)
def angular_transform(geom: RisGeometry) -> np.ndarray:
    """
    Unitary angular-domain transform D_N = D_Ny kron D_Nz.

    Each DFT factor is scaled by 1/sqrt(dim). The returned matrix is cached
    per geometry and marked read-only.
    """
    transform = np.kron(scipy.linalg.dft(geom.n_y, scale='sqrtn'),
                        scipy.linalg.dft(geom.n_z, scale='sqrtn'))
    transform.setflags(write=False)
    return transform


def to_angular_domain(h: np.ndarray, geom: RisGeometry) -> np.ndarray:
    """Apply D_N to one channel (length N) or a stack of channels (K x N) via the 2-D FFT."""
    h = np.asarray(h, dtype=complex)
    grid = h.reshape(h.shape[:-1] + (geom.n_y, geom.n_z))
    return scipy.fft.fft2(grid, norm='ortho').reshape(h.shape)


def to_element_domain(h_a: np.ndarray, geom: RisGeometry) -> np.ndarray:
    """Apply D_N^H to one angular vector (length N) or a stack (K x N)."""
    h_a = np.asarray(h_a, dtype=complex)
    if h_a.shape[-1] != geom.n_elements:
        raise GeometryError(
            f"Angular vector has length {h_a.shape[-1]}, expected {geom.n_elements}",
            field_name="h_a",
        )
    grid = h_a.reshape(h_a.shape[:-1] + (geom.n_y, geom.n_z))
    return scipy.fft.ifft2(grid, norm='ortho').reshape(h_a.shape)


def near_field_boundary(geom: RisGeometry) -> float:
    """Near-field boundary B = 2 N_y N_z d_y d_z / lambda in meters."""
    return 2.0 * geom.n_y * geom.n_z * geom.d_y * geom.d_z / geom.wavelength


def phase_alphabet(tau: int) -> PhaseAlphabet:
    """
    Discrete reflection alphabet of a tau-bit RIS.

    Args:
        tau: Quantization bits

    Returns:
        PhaseAlphabet with 2^tau values ordered by phase

    Raises:
        GeometryError: If tau is not positive
    """
    if tau < 1:
        raise GeometryError(f"Quantization bits must be at least 1, got {tau}", field_name="tau")
    angles = 2.0 * np.pi * np.arange(2 ** tau) / 2 ** tau
    # Snap rounding residue so 1, j, -1, -j are exact
    real = np.cos(angles)
    imag = np.sin(angles)
    real[np.abs(real) < 1e-12] = 0.0
    imag[np.abs(imag) < 1e-12] = 0.0
    return PhaseAlphabet(real + 1j * imag)
