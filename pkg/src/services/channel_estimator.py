"""
Channel estimation service for the RIS Beamforming Simulator.

This module builds Rademacher sensing plans, estimates the direct link by
least squares while the RIS absorbs, and recovers the sparse angular-domain
cascaded channel with EM-GAMP: sum-product GAMP with scalar variances, a
Bernoulli-complex-Gaussian prior, and expectation-maximization learning of the
activity rate, active variance and noise variance.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft
from scipy.special import expit

from models.data_models import (
    AngularChannelEstimate, EstimationStatus, GampOptions, RisGeometry, SensingPlan
)
from models.exceptions import EstimationError
from models.interfaces import ChannelEstimatorInterface
from services.array_geometry import to_element_domain

logger = logging.getLogger('RisBeamformingSim.channel_estimator')

_SPARSITY_FLOOR = 1e-6
_VARIANCE_FLOOR = 1e-30


def sensing_matrix(theta: np.ndarray, geom: RisGeometry) -> np.ndarray:
    """
    M = Theta^T D_N^H for a real reflection matrix, computed with the 2-D FFT.

    For real theta_p, theta_p^T D_N^H is the conjugate of D_N theta_p.
    """
    n_slots = theta.shape[1]
    patterns = theta.T.reshape(n_slots, geom.n_y, geom.n_z)
    return np.conj(scipy.fft.fft2(patterns, norm='ortho')).reshape(n_slots, geom.n_elements)


def generate_sensing_plan(geom: RisGeometry, n_slots: int, rng: np.random.Generator,
                          pilots: Optional[np.ndarray] = None) -> SensingPlan:
    """
    Draw an i.i.d. Rademacher sensing plan.

    Args:
        geom: Array geometry
        n_slots: Slot count P
        rng: Random generator
        pilots: Optional unit-modulus pilots; all ones by default

    Returns:
        SensingPlan with Theta (N x P), pilots and M (P x N)
    """
    if n_slots < 1:
        raise EstimationError(f"Slot count must be at least 1, got {n_slots}")
    theta = 2.0 * rng.integers(0, 2, size=(geom.n_elements, n_slots)) - 1.0
    if pilots is None:
        pilots = np.ones(n_slots, dtype=complex)
    pilots = np.asarray(pilots, dtype=complex)
    if pilots.size != n_slots or not np.allclose(np.abs(pilots), 1.0):
        raise EstimationError("Pilots must be P unit-modulus symbols")
    return SensingPlan(theta=theta, pilots=pilots, sensing_matrix=sensing_matrix(theta, geom))


def estimate_direct_ls(pilots: np.ndarray, y_off: np.ndarray) -> complex:
    """
    Least-squares direct-link estimate from a RIS-off frame.

    Raises:
        EstimationError: If the lengths differ or every pilot is zero
    """
    pilots = np.asarray(pilots, dtype=complex)
    y_off = np.asarray(y_off, dtype=complex)
    if pilots.shape != y_off.shape or pilots.size == 0:
        raise EstimationError("Pilots and RIS-off samples must have the same non-zero length")
    energy = float(np.sum(np.abs(pilots) ** 2))
    if energy == 0.0:
        raise EstimationError("Cannot estimate the direct link from all-zero pilots")
    return complex(np.vdot(pilots, y_off) / energy)


def remove_direct(y: np.ndarray, h_d: complex, pilots: np.ndarray) -> np.ndarray:
    """Subtract the direct-link contribution h_d * s_p from every slot."""
    y = np.asarray(y, dtype=complex)
    pilots = np.asarray(pilots, dtype=complex)
    if y.shape != pilots.shape:
        raise EstimationError("Measurements and pilots must have the same length")
    return y - h_d * pilots


class _DivergenceGuard:
    """Counts consecutive sweeps whose residual exceeds factor x the initial residual."""

    def __init__(self, initial_residual: float, factor: float, patience: int):
        self.limit = factor * initial_residual
        self.patience = patience
        self.strikes = 0

    def update(self, residual: float) -> bool:
        """Record one sweep; True once the patience is exhausted."""
        if not np.isfinite(residual) or residual > self.limit:
            self.strikes += 1
        else:
            self.strikes = 0
        return self.strikes >= self.patience


def _bernoulli_gaussian_posterior(r: np.ndarray, vr: float, sparsity: float,
                                  active_variance: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Posterior of x given r = x + CN(0, vr) under the Bernoulli-CN(0, phi) prior.

    Returns:
        Tuple of (activity probabilities, active posterior means, active posterior variance)
    """
    total = active_variance + vr
    log_odds = (np.log(sparsity / (1.0 - sparsity)) + np.log(vr / total)
                + np.abs(r) ** 2 * (active_variance / (vr * total)))
    activity = expit(log_odds)
    gain = active_variance / total
    return activity, gain * r, np.full(r.shape, gain * vr)


def initial_active_variance(M: np.ndarray, y: np.ndarray, sparsity: float) -> float:
    """
    Active variance whose prior energy matches the measurements.

    Solves ||y||^2 = sparsity * phi * ||M||_F^2 for phi. With unit-norm rows
    this is ||y||^2 / (P * sparsity); Rademacher rows through the unitary DFT
    have squared norm N, which the Frobenius norm accounts for.
    """
    frobenius2 = float(np.sum(np.abs(M) ** 2))
    if frobenius2 == 0.0:
        return 0.0
    return float(np.vdot(y, y).real) / (frobenius2 * sparsity)


def em_gamp_recover(M: np.ndarray, y: np.ndarray, init_noise: float,
                    opts: Optional[GampOptions] = None) -> AngularChannelEstimate:
    """
    Recover a sparse vector x from y = M x + n with EM-GAMP.

    Args:
        M: P x N sensing matrix
        y: Measurements, length P
        init_noise: Starting noise variance, must be positive
        opts: Tuning constants

    Returns:
        AngularChannelEstimate; divergence is reported through its status

    Raises:
        EstimationError: If the dimensions disagree or init_noise is not positive
    """
    opts = opts or GampOptions()
    M = np.asarray(M, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n_slots, n_elements = M.shape
    if y.shape != (n_slots,):
        raise EstimationError(f"Expected {n_slots} measurements, got shape {y.shape}")
    if init_noise <= 0:
        raise EstimationError(f"init_noise must be positive, got {init_noise}")

    y_energy = float(np.vdot(y, y).real)
    frobenius2 = float(np.sum(np.abs(M) ** 2))
    if y_energy == 0.0 or frobenius2 == 0.0:
        return AngularChannelEstimate(
            h_a=np.zeros(n_elements, dtype=complex),
            variances=np.zeros(n_elements),
            sparsity_rate=opts.initial_sparsity,
            active_variance=0.0,
            noise_variance=init_noise,
            iterations=0,
            residual=float(np.sqrt(y_energy)),
            status=EstimationStatus.CONVERGED,
        )

    row_norm2 = frobenius2 / n_slots
    col_norm2 = frobenius2 / n_elements
    noise_floor = max(1e-12 * y_energy / n_slots, _VARIANCE_FLOOR)

    sparsity = opts.initial_sparsity
    active_variance = initial_active_variance(M, y, sparsity)
    noise_variance = init_noise

    x = np.zeros(n_elements, dtype=complex)
    vx = sparsity * active_variance
    s = np.zeros(n_slots, dtype=complex)
    guard = _DivergenceGuard(np.sqrt(y_energy), opts.divergence_factor, opts.divergence_patience)
    status = EstimationStatus.MAX_ITERATIONS
    damp = opts.damping
    activity = np.zeros(n_elements)
    means = np.zeros(n_elements, dtype=complex)
    post_var = np.zeros(n_elements)
    iteration = 0

    for iteration in range(1, opts.max_iterations + 1):
        # Output side
        vp = max(row_norm2 * vx, _VARIANCE_FLOOR)
        p = M @ x - vp * s
        s_new = (y - p) / (vp + noise_variance)
        vs = 1.0 / (vp + noise_variance)
        s = damp * s_new + (1.0 - damp) * s

        # Input side
        vr = max(1.0 / (col_norm2 * vs), _VARIANCE_FLOOR)
        r = x + vr * (M.conj().T @ s)
        activity, means, post_var = _bernoulli_gaussian_posterior(r, vr, sparsity, active_variance)
        x_new = activity * means
        second_moment = activity * (np.abs(means) ** 2 + post_var)
        vx_new = float(np.mean(np.maximum(second_moment - np.abs(x_new) ** 2, 0.0)))

        x_old = x
        x = damp * x_new + (1.0 - damp) * x
        vx = damp * vx_new + (1.0 - damp) * vx

        # EM hyperparameter updates
        sparsity = float(np.clip(np.mean(activity), _SPARSITY_FLOOR, 1.0 - _SPARSITY_FLOOR))
        active_mass = float(np.sum(activity))
        if active_mass > 0:
            active_variance = max(float(np.sum(second_moment)) / active_mass, _VARIANCE_FLOOR)
        z_hat = (vp * y + noise_variance * p) / (vp + noise_variance)
        vz = vp * noise_variance / (vp + noise_variance)
        noise_variance = max(float(np.mean(np.abs(y - z_hat) ** 2)) + vz, noise_floor)

        residual = float(np.linalg.norm(y - M @ x))
        logger.debug("GAMP iter %d: residual %.3e, rate %.3e, noise %.3e",
                     iteration, residual, sparsity, noise_variance)
        if guard.update(residual):
            status = EstimationStatus.DIVERGED
            logger.warning("EM-GAMP diverged after %d iterations (residual %.3e)", iteration, residual)
            break

        change = np.linalg.norm(x - x_old)
        if change <= opts.tolerance * max(np.linalg.norm(x), _VARIANCE_FLOOR):
            status = EstimationStatus.CONVERGED
            break

    variances = np.maximum(activity * (np.abs(means) ** 2 + post_var) - np.abs(activity * means) ** 2, 0.0)
    return AngularChannelEstimate(
        h_a=x,
        variances=variances,
        sparsity_rate=sparsity,
        active_variance=active_variance,
        noise_variance=noise_variance,
        iterations=iteration,
        residual=float(np.linalg.norm(y - M @ x)),
        status=status,
    )


class EmGampEstimator(ChannelEstimatorInterface):
    """EM-GAMP recovery of one user's angular cascaded channel."""

    def __init__(self, opts: Optional[GampOptions] = None):
        self.opts = opts or GampOptions()

    def estimate(self, plan: SensingPlan, measurements: np.ndarray,
                 init_noise: float) -> AngularChannelEstimate:
        return em_gamp_recover(plan.sensing_matrix, measurements, init_noise, self.opts)


def estimate_user_channel(estimator: ChannelEstimatorInterface, plan: SensingPlan,
                          measurements: np.ndarray, h_d_hat: complex, init_noise: float,
                          geom: RisGeometry) -> Tuple[np.ndarray, AngularChannelEstimate]:
    """
    Element-domain cascaded channel estimate for one user.

    Removes the estimated direct link, runs the estimator and maps the result
    back to the element domain. A diverged estimate falls back to the zero
    channel.

    Returns:
        Tuple of (cascaded channel estimate of length N, angular estimate)
    """
    residual_slots = remove_direct(measurements, h_d_hat, plan.pilots)
    estimate = estimator.estimate(plan, residual_slots, init_noise)
    if estimate.failed:
        logger.warning("Falling back to the zero channel after EM-GAMP divergence")
        return np.zeros(geom.n_elements, dtype=complex), estimate
    return to_element_domain(estimate.h_a, geom), estimate


def per_user_nmse(truth: Sequence[np.ndarray], estimates: Sequence[np.ndarray]) -> List[float]:
    """
    ||h_k - h_hat_k||^2 / ||h_k||^2 for every user.

    Raises:
        EstimationError: On shape mismatch or a zero-norm true channel
    """
    if len(truth) != len(estimates):
        raise EstimationError("Need one estimate per true channel")
    ratios = []
    for h, h_hat in zip(truth, estimates):
        h = np.asarray(h)
        h_hat = np.asarray(h_hat)
        if h.shape != h_hat.shape:
            raise EstimationError(f"Shape mismatch: {h.shape} vs {h_hat.shape}")
        energy = float(np.vdot(h, h).real)
        if energy == 0.0:
            raise EstimationError("NMSE is undefined for a zero-norm true channel")
        ratios.append(float(np.vdot(h - h_hat, h - h_hat).real) / energy)
    return ratios


def nmse(truth: Sequence[np.ndarray], estimates: Sequence[np.ndarray]) -> float:
    """Normalized mean squared error averaged over users."""
    return float(np.mean(per_user_nmse(truth, estimates)))
