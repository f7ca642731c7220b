"""
Beamforming engine for the RIS Beamforming Simulator.

This module implements the quadratic-transform low-rank multi-user beamformer
(QTLM): a Lagrangian-dual step that fixes alpha = gamma, a quadratic-transform
step that fixes epsilon, a concave quadratic subproblem over the unit polydisc
solved through the K x K Gram eigendecomposition, and closest-point projection
onto the discrete phase alphabet guarded by an acceptance test. The design
entry point wraps QTLM between an unquantized warm start and an element-wise
refinement, since at one or two phase bits the projected candidate rarely beats
the incumbent and the loop would otherwise stop at its random start. It also
holds the single-user MRT baseline and an exhaustive oracle for small instances.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from models.data_models import (
    BeamformingProblem, PhaseAlphabet, QtlmState, QtlmStopReason, QuadraticForm
)
from models.exceptions import BeamformingError, InstanceTooLargeError
from models.interfaces import BeamformerInterface

logger = logging.getLogger('RisBeamformingSim.beamforming_engine')

MAX_ORACLE_BITS = 20
MAX_REFINE_SWEEPS = 100
RELAXED_TOLERANCE = 1e-4
_ORACLE_CHUNK = 1 << 16
_REFINE_MARGIN = 1e-12


def effective_channels(theta: np.ndarray, problem: BeamformingProblem) -> np.ndarray:
    """h_d,k + theta^T h_k for every user."""
    return problem.h_d + problem.h @ theta


def snr_per_user(theta: np.ndarray, problem: BeamformingProblem) -> np.ndarray:
    """gamma_k = |h_d,k + theta^T h_k|^2 / sigma^2."""
    return np.abs(effective_channels(theta, problem)) ** 2 / problem.sigma2


def update_alpha(gamma: np.ndarray) -> np.ndarray:
    """Optimal Lagrangian-dual auxiliaries, alpha_k = gamma_k."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise BeamformingError("SNR values must be non-negative", operation="update_alpha")
    return gamma.copy()


def update_epsilon(theta: np.ndarray, alpha: np.ndarray, problem: BeamformingProblem) -> np.ndarray:
    """Optimal quadratic-transform auxiliaries for the current codeword."""
    effective = effective_channels(theta, problem)
    return np.sqrt(1.0 + alpha) * effective / (problem.sigma2 + np.abs(effective) ** 2)


def assemble_quadratic(alpha: np.ndarray, epsilon: np.ndarray,
                       problem: BeamformingProblem) -> QuadraticForm:
    """
    Collect f_2b = -theta^T U theta^* + 2 Re(theta^T v) + C.

    U = A A^H is never formed; A holds |eps_k| h_k as columns.
    """
    weight = np.sqrt(1.0 + alpha)
    magnitude2 = np.abs(epsilon) ** 2
    factor = problem.h.T * np.abs(epsilon)[np.newaxis, :]
    v = problem.h.T @ (weight * np.conj(epsilon) - magnitude2 * np.conj(problem.h_d))
    constant = float(np.sum(
        2.0 * weight * np.real(np.conj(epsilon) * problem.h_d)
        - magnitude2 * problem.sigma2
        - magnitude2 * np.abs(problem.h_d) ** 2
    ))
    return QuadraticForm(factor=factor, v=v, constant=constant)


def objective_f1(theta: np.ndarray, problem: BeamformingProblem) -> float:
    """Sum spectral efficiency in bits/s/Hz."""
    return float(np.sum(np.log2(1.0 + snr_per_user(theta, problem))))


def objective_f1a(theta: np.ndarray, alpha: np.ndarray, problem: BeamformingProblem) -> float:
    """Lagrangian-dual objective; equals objective_f1 when alpha = gamma."""
    gamma = snr_per_user(theta, problem)
    return float(np.sum(np.log2(1.0 + alpha) - alpha + (1.0 + alpha) * gamma / (1.0 + gamma)))


def objective_f2a(theta: np.ndarray, alpha: np.ndarray, epsilon: np.ndarray,
                  problem: BeamformingProblem) -> float:
    """Quadratic-transform objective in (theta, epsilon) for fixed alpha."""
    effective = effective_channels(theta, problem)
    return float(np.sum(
        2.0 * np.sqrt(1.0 + alpha) * np.real(np.conj(epsilon) * effective)
        - np.abs(epsilon) ** 2 * (problem.sigma2 + np.abs(effective) ** 2)
    ))


def objective_f2b(theta: np.ndarray, qf: QuadraticForm) -> float:
    """Evaluate the quadratic surrogate through its factor."""
    z = qf.factor.T @ theta
    return float(-np.vdot(z, z).real + 2.0 * np.real(np.dot(theta, qf.v)) + qf.constant)


def _clamp_to_disc(theta: np.ndarray) -> np.ndarray:
    return theta / np.maximum(np.abs(theta), 1.0)


def _complete_basis(lifted: np.ndarray, n_elements: int) -> np.ndarray:
    """Orthonormal basis whose leading columns are the lifted eigenvectors."""
    if lifted.shape[1] == 0:
        return np.eye(n_elements, dtype=complex)
    basis, _ = np.linalg.qr(np.hstack([lifted, np.eye(n_elements, dtype=complex)]))
    basis[:, :lifted.shape[1]] = lifted
    return basis


def _disc_closed_form(b: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Per-coordinate maximizer of -d|w|^2 + 2 Re(w^* b) on the unit disc."""
    magnitude = np.abs(b)
    # Null-space coordinates with no usable phase take omega = 1
    significant = magnitude > 1e-12 * max(float(magnitude.max(initial=0.0)), 1e-300)
    phase = np.where(significant, b / np.where(significant, magnitude, 1.0), 1.0)
    positive = d > 0
    scale = np.ones_like(magnitude)
    scale[positive] = np.minimum(magnitude[positive] / d[positive], 1.0)
    return scale * phase


def _polish(theta: np.ndarray, qf: QuadraticForm, lipschitz: float,
            max_iterations: int, tolerance: float) -> np.ndarray:
    """Accelerated projected gradient ascent on the factor form, restarted whenever f_2b drops."""
    step = 1.0 / lipschitz
    factor, v = qf.factor, qf.v
    x = theta
    fx = objective_f2b(x, qf)
    y = x
    t = 1.0
    for _ in range(max_iterations):
        z = factor.T @ y
        gradient = np.conj(v - factor @ np.conj(z))
        x_new = _clamp_to_disc(y + step * gradient)
        f_new = objective_f2b(x_new, qf)
        if f_new < fx:
            if t == 1.0:
                break
            y, t = x, 1.0
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = x_new + ((t - 1.0) / t_new) * (x_new - x)
        moved = float(np.max(np.abs(x_new - x)))
        x, fx, t = x_new, f_new, t_new
        if moved <= tolerance:
            break
    return x


def solve_lowrank(qf: QuadraticForm, problem: BeamformingProblem) -> np.ndarray:
    """
    Maximize f_2b over the closed unit polydisc.

    The K x K Gram matrix of the factor is eigendecomposed and its eigenvectors
    lifted to length N; standard basis columns complete the orthonormal basis Q.
    In the rotated variables omega = Q^H theta^* the surrogate separates and the
    clamped closed form gives a starting point, which is clamped back into the
    polydisc and refined by projected gradient steps that only touch the N x K
    factor.

    Args:
        qf: Quadratic surrogate
        problem: Supplies eig_zero_tol and the polish limits

    Returns:
        Complex vector of length N with every |theta_n| <= 1
    """
    factor, v = qf.factor, qf.v
    n_elements = qf.n_elements
    gram = factor.conj().T @ factor
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues, eigenvectors = eigenvalues[order], eigenvectors[:, order]
    d_max = float(eigenvalues[0]) if eigenvalues.size else 0.0

    if d_max > 0:
        keep = eigenvalues > problem.eig_zero_tol * d_max
    else:
        keep = np.zeros(eigenvalues.size, dtype=bool)
    lifted = factor @ eigenvectors[:, keep] / np.sqrt(eigenvalues[keep])
    basis = _complete_basis(lifted, n_elements)

    d = np.zeros(n_elements)
    d[:lifted.shape[1]] = eigenvalues[keep]
    omega = _disc_closed_form(basis.conj().T @ v, d)
    closed_form = _clamp_to_disc(np.conj(basis @ omega))

    if d_max <= 0:
        return closed_form
    start = closed_form if objective_f2b(closed_form, qf) >= qf.constant else np.zeros(n_elements, dtype=complex)
    return _polish(start, qf, d_max, problem.polish_iterations, problem.polish_tolerance)


def project_alphabet(theta_c: np.ndarray, alphabet: PhaseAlphabet) -> np.ndarray:
    """Closest alphabet value per entry, ties to the lowest index."""
    return alphabet.values[codeword_indices(theta_c, alphabet)]


def codeword_indices(theta: np.ndarray, alphabet: PhaseAlphabet) -> np.ndarray:
    """Index of the closest alphabet value for every entry."""
    distances = np.abs(np.asarray(theta)[:, np.newaxis] - alphabet.values[np.newaxis, :])
    return np.argmin(distances, axis=1)


def codeword_from_indices(indices, alphabet: PhaseAlphabet) -> np.ndarray:
    """Map alphabet indices back to reflection coefficients."""
    indices = np.asarray(indices, dtype=int)
    if np.any(indices < 0) or np.any(indices >= len(alphabet)):
        raise BeamformingError(f"Codeword indices must lie in [0, {len(alphabet)})",
                               operation="codeword_from_indices")
    return alphabet.values[indices]


def random_codeword(alphabet: PhaseAlphabet, n_elements: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random codeword over the alphabet."""
    return alphabet.values[rng.integers(0, len(alphabet), size=n_elements)]


def _in_alphabet(theta: np.ndarray, alphabet: PhaseAlphabet) -> bool:
    distances = np.abs(theta[:, np.newaxis] - alphabet.values[np.newaxis, :])
    return bool(np.all(distances.min(axis=1) < 1e-9))


def qtlm(problem: BeamformingProblem, theta0: Optional[np.ndarray],
         rng: Optional[np.random.Generator] = None) -> Tuple[np.ndarray, QtlmState]:
    """
    Run QTLM from an alphabet codeword.

    Each iteration updates alpha and epsilon at the incumbent, solves the
    surrogate, projects onto the alphabet and accepts the candidate only if it
    raises f_2b above the incumbent. The loop ends at the first rejection or
    after t_max iterations.

    Args:
        problem: Beamforming problem
        theta0: Starting codeword over the alphabet, or None for a uniform random one
        rng: Draws theta0 when it is None

    Returns:
        Tuple of (best codeword, iteration trace)

    Raises:
        BeamformingError: If theta0 has the wrong length or leaves the alphabet,
            or if theta0 is None and no rng is given
    """
    if theta0 is None:
        if rng is None:
            raise BeamformingError("qtlm needs theta0 or an rng to draw it", operation="qtlm")
        theta0 = random_codeword(problem.alphabet, problem.n_elements, rng)
    theta_star = np.asarray(theta0, dtype=complex).copy()
    if theta_star.shape != (problem.n_elements,):
        raise BeamformingError(f"theta0 must have length {problem.n_elements}", operation="qtlm")
    if not _in_alphabet(theta_star, problem.alphabet):
        raise BeamformingError("theta0 entries must lie in the phase alphabet", operation="qtlm")

    state = QtlmState(
        theta_best=theta_star,
        theta_current=theta_star,
        objective_history=[objective_f1(theta_star, problem)],
    )
    for iteration in range(1, problem.t_max + 1):
        alpha = update_alpha(snr_per_user(theta_star, problem))
        epsilon = update_epsilon(theta_star, alpha, problem)
        qf = assemble_quadratic(alpha, epsilon, problem)
        theta_c = solve_lowrank(qf, problem)
        candidate = project_alphabet(theta_c, problem.alphabet)

        state.iterations = iteration
        state.alpha, state.epsilon = alpha, epsilon
        state.theta_continuous, state.theta_current = theta_c, candidate

        f_candidate = objective_f2b(candidate, qf)
        f_incumbent = objective_f2b(theta_star, qf)
        if f_candidate > f_incumbent:
            theta_star = candidate
            state.objective_history.append(objective_f1(theta_star, problem))
            state.f2b_history.append(f_candidate)
        else:
            state.stop_reason = QtlmStopReason.REJECTED
            break
    else:
        if problem.t_max > 0:
            state.stop_reason = QtlmStopReason.MAX_ITERATIONS

    state.theta_best = theta_star
    logger.debug("QTLM stopped after %d iterations (%s), f1 = %.4f",
                 state.iterations, state.stop_reason.value, state.objective_history[-1])
    return theta_star, state


def relaxed_start(problem: BeamformingProblem, theta0: np.ndarray) -> np.ndarray:
    """
    Alphabet codeword found along the unquantized QTLM path from theta0.

    The auxiliaries are refreshed at the continuous iterate instead of the
    projected one, and each step maximizes f_2b over the unit polydisc by
    projected gradient ascent from that iterate, so f_1 of the iterates never
    decreases. Every iterate is projected and the projection with the highest
    f_1 is returned, or theta0 when none beats it. The path stops after t_max
    steps or once f_1 gains less than RELAXED_TOLERANCE relative to its value.
    """
    theta_c = np.asarray(theta0, dtype=complex).copy()
    best = theta_c.copy()
    best_f1 = objective_f1(best, problem)
    previous = best_f1
    for step in range(1, problem.t_max + 1):
        alpha = update_alpha(snr_per_user(theta_c, problem))
        epsilon = update_epsilon(theta_c, alpha, problem)
        qf = assemble_quadratic(alpha, epsilon, problem)
        lipschitz = float(np.linalg.norm(qf.factor, 2) ** 2)
        if lipschitz <= 0:
            break
        theta_c = _polish(theta_c, qf, lipschitz, problem.polish_iterations, problem.polish_tolerance)

        projected = project_alphabet(theta_c, problem.alphabet)
        f_projected = objective_f1(projected, problem)
        if f_projected > best_f1:
            best, best_f1 = projected, f_projected
        current = objective_f1(theta_c, problem)
        logger.debug("Relaxed step %d: f1 %.4f, projected %.4f", step, current, f_projected)
        if current - previous <= RELAXED_TOLERANCE * max(abs(previous), 1.0):
            break
        previous = current
    return best


def refine_elementwise(theta: np.ndarray, problem: BeamformingProblem) -> Tuple[np.ndarray, int]:
    """
    Element-by-element ascent of f_1 over the alphabet.

    Each sweep visits the elements in order and sets each one to the alphabet
    value with the highest f_1 given all others. Sweeps repeat until one
    changes nothing or MAX_REFINE_SWEEPS is reached.

    Returns:
        Tuple of (refined codeword, sweeps run)
    """
    theta = np.asarray(theta, dtype=complex).copy()
    values = problem.alphabet.values
    effective = effective_channels(theta, problem)
    current = objective_f1(theta, problem)
    sweeps = 0
    changed = True
    while changed and sweeps < MAX_REFINE_SWEEPS:
        changed = False
        sweeps += 1
        for n in range(problem.n_elements):
            column = problem.h[:, n]
            others = effective - column * theta[n]
            trials = others[np.newaxis, :] + values[:, np.newaxis] * column[np.newaxis, :]
            se = np.sum(np.log2(1.0 + np.abs(trials) ** 2 / problem.sigma2), axis=1)
            j = int(np.argmax(se))
            if se[j] > current + _REFINE_MARGIN * max(abs(current), 1.0):
                theta[n] = values[j]
                effective = trials[j]
                current = float(se[j])
                changed = True
    return theta, sweeps


def qtlm_multistart(problem: BeamformingProblem, n_starts: int, rng: np.random.Generator,
                    warm_start: bool = True, refine: bool = True) -> Tuple[np.ndarray, QtlmState]:
    """
    Design from n_starts random codewords and keep the best f_1 (earliest wins ties).

    Per start: relaxed_start (when warm_start), qtlm, then refine_elementwise
    (when refine). A refinement that raises f_1 is appended to the state's
    objective history.
    """
    if n_starts < 1:
        raise BeamformingError(f"n_starts must be at least 1, got {n_starts}", operation="qtlm_multistart")
    best: Optional[Tuple[np.ndarray, QtlmState]] = None
    for _ in range(n_starts):
        theta0 = random_codeword(problem.alphabet, problem.n_elements, rng)
        if warm_start:
            theta0 = relaxed_start(problem, theta0)
        theta, state = qtlm(problem, theta0, rng)
        if refine:
            theta, state.refine_sweeps = refine_elementwise(theta, problem)
            refined = objective_f1(theta, problem)
            if refined > state.objective_history[-1]:
                state.objective_history.append(refined)
            state.theta_best = theta
        if best is None or state.objective_history[-1] > best[1].objective_history[-1]:
            best = (theta, state)
    return best


def single_user_mrt(h_d: complex, h_r: np.ndarray) -> np.ndarray:
    """
    Phase-aligning single-user codeword (h_d/|h_d|) h_r^* / ||h_r||.

    The leading unit factor is 1 when h_d = 0.

    Raises:
        BeamformingError: If h_r is the zero vector
    """
    h_r = np.asarray(h_r, dtype=complex)
    norm = np.linalg.norm(h_r)
    if norm == 0:
        raise BeamformingError("MRT needs a non-zero reflected channel", operation="single_user_mrt")
    unit = h_d / abs(h_d) if h_d != 0 else 1.0
    return unit * np.conj(h_r) / norm


def exhaustive_oracle(problem: BeamformingProblem) -> Tuple[np.ndarray, float]:
    """
    Globally optimal codeword by enumeration.

    Codewords are enumerated in lexicographic index order with element 0 most
    significant; the first maximizer wins.

    Raises:
        InstanceTooLargeError: If N * tau exceeds 20 bits
    """
    n_elements = problem.n_elements
    size = len(problem.alphabet)
    bits = n_elements * problem.alphabet.tau
    if bits > MAX_ORACLE_BITS:
        raise InstanceTooLargeError(
            f"Exhaustive search over {bits} bits exceeds the {MAX_ORACLE_BITS}-bit cap", bits=bits
        )
    total = size ** n_elements
    place_values = size ** np.arange(n_elements - 1, -1, -1)
    best_se = -np.inf
    best_digits = None
    for start in range(0, total, _ORACLE_CHUNK):
        index = np.arange(start, min(total, start + _ORACLE_CHUNK))
        digits = (index[:, np.newaxis] // place_values[np.newaxis, :]) % size
        codewords = problem.alphabet.values[digits]
        effective = problem.h_d[np.newaxis, :] + codewords @ problem.h.T
        se = np.sum(np.log2(1.0 + np.abs(effective) ** 2 / problem.sigma2), axis=1)
        j = int(np.argmax(se))
        if se[j] > best_se:
            best_se = float(se[j])
            best_digits = digits[j]
    return problem.alphabet.values[best_digits], best_se


class QtlmBeamformer(BeamformerInterface):
    """QTLM from one or more random starting codewords."""

    def __init__(self, multi_start: int = 1, warm_start: bool = True, refine: bool = True):
        self.multi_start = multi_start
        self.warm_start = warm_start
        self.refine = refine

    def design(self, problem: BeamformingProblem,
               rng: np.random.Generator) -> Tuple[np.ndarray, Optional[QtlmState]]:
        return qtlm_multistart(problem, self.multi_start, rng, self.warm_start, self.refine)


class MrtBeamformer(BeamformerInterface):
    """Single-user phase alignment projected onto the alphabet."""

    def design(self, problem: BeamformingProblem,
               rng: np.random.Generator) -> Tuple[np.ndarray, Optional[QtlmState]]:
        if problem.n_users != 1:
            raise BeamformingError("MRT serves exactly one user", operation="design")
        if not np.any(problem.h[0]):
            return np.full(problem.n_elements, problem.alphabet.values[0]), None
        theta = single_user_mrt(problem.h_d[0], problem.h[0])
        return project_alphabet(theta, problem.alphabet), None
