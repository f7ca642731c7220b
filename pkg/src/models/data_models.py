"""
Core data models for the RIS Beamforming Simulator.

This module contains the primary data structures used throughout the simulator
for representing array geometry, channel realizations, sensing plans, channel
estimates, beamforming problems, and experiment configurations and results.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np


class EstimationStatus(Enum):
    """Termination status of an EM-GAMP recovery."""
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    DIVERGED = "diverged"


class MeasurementStatus(Enum):
    """Outcome of a link measurement that may not produce a finite number."""
    OK = "ok"
    UNBOUNDED = "unbounded"
    UNRESOLVED = "unresolved"


class QtlmStopReason(Enum):
    """Why the QTLM loop stopped."""
    NOT_STARTED = "not_started"
    REJECTED = "rejected"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class RisGeometry:
    """
    Uniform planar array geometry of the RIS panel.

    Elements are indexed y-major: element (m, n) with m along y and n along z
    sits at flat index m * n_z + n.

    Attributes:
        n_y: Element count along the y axis
        n_z: Element count along the z axis
        d_y: Element spacing along y in meters
        d_z: Element spacing along z in meters
        wavelength: Carrier wavelength in meters
        tau: Phase quantization bits
    """
    n_y: int
    n_z: int
    d_y: float
    d_z: float
    wavelength: float
    tau: int = 1

    def __post_init__(self):
        """Validate geometry after initialization."""
        if self.n_y < 1 or self.n_z < 1:
            raise ValueError(f"Element counts must be positive, got n_y={self.n_y}, n_z={self.n_z}")
        if self.d_y <= 0 or self.d_z <= 0:
            raise ValueError(f"Element spacings must be positive, got d_y={self.d_y}, d_z={self.d_z}")
        if self.wavelength <= 0:
            raise ValueError(f"Wavelength must be positive, got {self.wavelength}")
        if self.tau < 1:
            raise ValueError(f"Quantization bits must be at least 1, got {self.tau}")

    @property
    def n_elements(self) -> int:
        """Total element count N = n_y * n_z."""
        return self.n_y * self.n_z


@dataclass
class PhaseAlphabet:
    """
    Ordered set of 2^tau unit-modulus reflection coefficients.

    Attributes:
        values: Complex values e^{j m 2 pi / 2^tau}, m = 0 .. 2^tau - 1
    """
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        size = self.values.size
        if size < 2 or size & (size - 1):
            raise ValueError(f"Alphabet size must be a power of two >= 2, got {size}")
        if not np.allclose(np.abs(self.values), 1.0, atol=1e-12):
            raise ValueError("Alphabet values must have unit modulus")

    @property
    def tau(self) -> int:
        return int(self.values.size).bit_length() - 1

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass
class PathSet:
    """
    Saleh-Valenzuela path description of one link.

    Attributes:
        gains: Complex path gains beta_l
        azimuths: Path azimuths in radians
        elevations: Path elevations in radians
    """
    gains: np.ndarray
    azimuths: np.ndarray
    elevations: np.ndarray

    def __post_init__(self):
        self.gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        self.azimuths = np.atleast_1d(np.asarray(self.azimuths, dtype=float))
        self.elevations = np.atleast_1d(np.asarray(self.elevations, dtype=float))
        if self.gains.size < 1:
            raise ValueError("A path set needs at least one path")
        if not (self.gains.size == self.azimuths.size == self.elevations.size):
            raise ValueError("Path gains, azimuths and elevations must have equal lengths")

    @classmethod
    def from_paths(cls, paths: Sequence[Tuple[complex, float, float]]) -> 'PathSet':
        """Build a path set from (gain, azimuth, elevation) tuples."""
        if not paths:
            raise ValueError("A path set needs at least one path")
        gains, azimuths, elevations = zip(*paths)
        return cls(np.array(gains), np.array(azimuths), np.array(elevations))

    def concatenate(self, other: 'PathSet') -> 'PathSet':
        return PathSet(
            np.concatenate([self.gains, other.gains]),
            np.concatenate([self.azimuths, other.azimuths]),
            np.concatenate([self.elevations, other.elevations]),
        )

    def __len__(self) -> int:
        return int(self.gains.size)


@dataclass
class ChannelRealization:
    """
    One draw of every link in the scenario.

    Attributes:
        g: BS-to-RIS vector, length N
        h_r: RIS-to-user vectors, shape (K, N)
        h_d: Direct-link scalars, length K
        h: Cascaded vectors h_k = h_r,k * g, shape (K, N)
    """
    g: np.ndarray
    h_r: np.ndarray
    h_d: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        self.g = np.asarray(self.g, dtype=complex)
        self.h_r = np.atleast_2d(np.asarray(self.h_r, dtype=complex))
        self.h_d = np.atleast_1d(np.asarray(self.h_d, dtype=complex))
        self.h = np.atleast_2d(np.asarray(self.h, dtype=complex))
        if self.h_r.shape != self.h.shape or self.h.shape[1] != self.g.size:
            raise ValueError("Channel vectors must all have length N")
        if self.h_d.size != self.h.shape[0]:
            raise ValueError("One direct-link scalar is required per user")
        if not np.allclose(self.h, self.h_r * self.g[np.newaxis, :]):
            raise ValueError("Cascaded channels must equal h_r * g elementwise")

    @property
    def n_users(self) -> int:
        return int(self.h.shape[0])

    def with_tx_gain(self, gain_db: float) -> 'ChannelRealization':
        """Scale every link amplitude by a transmit gain given in dB."""
        amplitude = np.sqrt(10.0 ** (gain_db / 10.0))
        return ChannelRealization(
            g=self.g * amplitude,
            h_r=self.h_r.copy(),
            h_d=self.h_d * amplitude,
            h=self.h * amplitude,
        )


@dataclass
class TransmitterDescriptor:
    """
    Base-station position as seen from the RIS.

    Attributes:
        azimuth_deg: Azimuth of the BS at the RIS in degrees
        elevation_deg: Elevation of the BS at the RIS in degrees
        distance_m: BS-RIS distance in meters, metadata unless the wavefront is spherical
        link_gain: Link-budget scale rho_g of the BS-RIS channel
    """
    azimuth_deg: float = 0.0
    elevation_deg: float = 90.0
    distance_m: Optional[float] = None
    link_gain: float = 1.0

    def __post_init__(self):
        if self.link_gain < 0:
            raise ValueError(f"link_gain must be non-negative, got {self.link_gain}")
        if self.distance_m is not None and self.distance_m <= 0:
            raise ValueError(f"distance_m must be positive, got {self.distance_m}")


@dataclass
class UserDescriptor(TransmitterDescriptor):
    """
    User position and per-user link budget.

    Attributes:
        direct_power: Variance sigma_k^2 of the direct link h_d,k in watts
    """
    direct_power: float = 0.0

    def __post_init__(self):
        super().__post_init__()
        if self.direct_power < 0:
            raise ValueError(f"direct_power must be non-negative, got {self.direct_power}")


@dataclass
class ScenarioConfig:
    """
    Description of the simulated deployment.

    Attributes:
        geometry: RIS geometry
        users: One descriptor per user (K = len(users))
        transmitter: BS descriptor
        bs_paths: Path count L_g of the BS-RIS link
        user_paths: Path count L_k of every RIS-user link
        noise_power: Thermal noise power sigma^2 in watts
        impairment_power: Extra RF-impairment noise power invisible to the noise floor
        channel_mode: 'multipath' (equal-power paths) or 'los' (dominant path plus scatterers)
        rician_factor: Power ratio of the dominant path to the scatterers in 'los' mode
        wavefront: 'planar' or 'spherical' for the dominant paths
        seed: Seed used when no generator is passed to draw_scenario
    """
    geometry: RisGeometry
    users: List[UserDescriptor]
    transmitter: TransmitterDescriptor = field(default_factory=TransmitterDescriptor)
    bs_paths: int = 1
    user_paths: int = 1
    noise_power: float = 1.0
    impairment_power: float = 0.0
    channel_mode: str = 'los'
    rician_factor: float = 10.0
    wavefront: str = 'planar'
    seed: int = 0

    def __post_init__(self):
        """Validate scenario after initialization."""
        if len(self.users) < 1:
            raise ValueError("At least one user is required")
        if self.bs_paths < 1 or self.user_paths < 1:
            raise ValueError("Path counts must be at least 1")
        if self.noise_power <= 0:
            raise ValueError(f"noise_power must be positive, got {self.noise_power}")
        if self.impairment_power < 0:
            raise ValueError(f"impairment_power must be non-negative, got {self.impairment_power}")
        if self.channel_mode not in ['multipath', 'los']:
            raise ValueError(f"Invalid channel_mode: {self.channel_mode}. Must be 'multipath' or 'los'")
        if self.rician_factor < 0:
            raise ValueError(f"rician_factor must be non-negative, got {self.rician_factor}")
        if self.wavefront not in ['planar', 'spherical']:
            raise ValueError(f"Invalid wavefront: {self.wavefront}. Must be 'planar' or 'spherical'")
        if self.wavefront == 'spherical':
            located = [self.transmitter] + list(self.users)
            if any(item.distance_m is None for item in located):
                raise ValueError("Spherical wavefronts need distance_m for the BS and every user")

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def effective_noise_power(self) -> float:
        """Noise actually present at the receiver (thermal plus impairment)."""
        return self.noise_power + self.impairment_power


@dataclass
class SensingPlan:
    """
    Rademacher reflection patterns used during channel sensing.

    Attributes:
        theta: Reflection matrix Theta of shape (N, P) with entries +-1
        pilots: Unit-modulus pilot symbols, length P
        sensing_matrix: M = Theta^T D_N^H of shape (P, N)
    """
    theta: np.ndarray
    pilots: np.ndarray
    sensing_matrix: np.ndarray

    def __post_init__(self):
        if not np.all(np.abs(self.theta) == 1) or np.iscomplexobj(self.theta):
            raise ValueError("Sensing reflection entries must be +1 or -1")
        if self.pilots.size != self.theta.shape[1]:
            raise ValueError("One pilot symbol is required per slot")
        if self.sensing_matrix.shape != (self.theta.shape[1], self.theta.shape[0]):
            raise ValueError("Sensing matrix must have shape (P, N)")

    @property
    def n_slots(self) -> int:
        return int(self.theta.shape[1])


@dataclass
class GampOptions:
    """
    Tuning constants of EM-GAMP.

    Attributes:
        damping: Weight of the new iterate in the damped update
        max_iterations: Iteration cap
        tolerance: Relative estimate change that counts as converged
        initial_sparsity: Starting Bernoulli activity rate
        divergence_factor: Residual growth over the initial residual treated as divergent
        divergence_patience: Consecutive divergent sweeps before giving up
    """
    damping: float = 0.7
    max_iterations: int = 200
    tolerance: float = 1e-6
    initial_sparsity: float = 0.1
    divergence_factor: float = 10.0
    divergence_patience: int = 10

    def __post_init__(self):
        if not 0 < self.damping <= 1:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if not 0 < self.initial_sparsity < 1:
            raise ValueError(f"initial_sparsity must lie in (0, 1), got {self.initial_sparsity}")
        if self.divergence_factor <= 1 or self.divergence_patience < 1:
            raise ValueError("Divergence guard needs factor > 1 and patience >= 1")


@dataclass
class AngularChannelEstimate:
    """
    EM-GAMP posterior of one angular-domain cascaded channel.

    Attributes:
        h_a: Posterior mean, length N
        variances: Per-entry posterior variances
        sparsity_rate: Learned Bernoulli activity rate
        active_variance: Learned variance of active coefficients
        noise_variance: Learned measurement noise variance
        iterations: GAMP iterations executed
        residual: ||y - M h_a||_2
        status: Termination status
    """
    h_a: np.ndarray
    variances: np.ndarray
    sparsity_rate: float
    active_variance: float
    noise_variance: float
    iterations: int
    residual: float
    status: EstimationStatus = EstimationStatus.CONVERGED

    def __post_init__(self):
        if np.any(self.variances < 0):
            raise ValueError("Posterior variances must be non-negative")
        if not 0 < self.sparsity_rate < 1:
            raise ValueError(f"sparsity_rate must lie in (0, 1), got {self.sparsity_rate}")

    @property
    def failed(self) -> bool:
        return self.status is EstimationStatus.DIVERGED


@dataclass
class BeamformingProblem:
    """
    Multi-user spectral-efficiency maximization over a discrete alphabet.

    Attributes:
        h_d: Direct-link scalars, length K
        h: Cascaded channels, shape (K, N)
        sigma2: Noise power used in every SNR
        alphabet: Allowed reflection coefficients
        t_max: QTLM iteration cap
        eig_zero_tol: Relative threshold under which Gram eigenvalues count as zero
        polish_iterations: Iteration cap of the low-rank polish in solve_lowrank
        polish_tolerance: Step size under which the polish stops
    """
    h_d: np.ndarray
    h: np.ndarray
    sigma2: float
    alphabet: PhaseAlphabet
    t_max: int = 50
    eig_zero_tol: float = 1e-10
    polish_iterations: int = 3000
    polish_tolerance: float = 1e-10

    def __post_init__(self):
        self.h = np.atleast_2d(np.asarray(self.h, dtype=complex))
        self.h_d = np.atleast_1d(np.asarray(self.h_d, dtype=complex))
        if self.sigma2 <= 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if self.h.shape[0] < 1 or self.h_d.size != self.h.shape[0]:
            raise ValueError("Need one direct scalar and one cascaded vector per user")
        if self.t_max < 0:
            raise ValueError(f"t_max must be non-negative, got {self.t_max}")

    @property
    def n_users(self) -> int:
        return int(self.h.shape[0])

    @property
    def n_elements(self) -> int:
        return int(self.h.shape[1])


@dataclass
class QuadraticForm:
    """
    Concave quadratic f_2b(theta) = -theta^T U theta^* + 2 Re(theta^T v) + C.

    U is kept implicit as factor @ factor^H.

    Attributes:
        factor: N x K matrix whose columns are |eps_k| h_k
        v: Linear coefficient, length N
        constant: Real offset C
    """
    factor: np.ndarray
    v: np.ndarray
    constant: float

    @property
    def n_elements(self) -> int:
        return int(self.v.size)


@dataclass
class QtlmState:
    """
    Trace of one QTLM run.

    Attributes:
        theta_best: Best accepted codeword
        theta_current: Last projected candidate
        theta_continuous: Last pre-projection solution of the relaxed subproblem
        alpha: Last Lagrangian-dual auxiliaries
        epsilon: Last quadratic-transform auxiliaries
        objective_history: f_1 of every accepted codeword, starting with theta0
        f2b_history: f_2b of every accepted codeword under the surrogate it beat
        refine_sweeps: Element-wise refinement sweeps run after the loop
        iterations: Iterations executed
        stop_reason: Why the loop ended
    """
    theta_best: np.ndarray
    theta_current: np.ndarray
    theta_continuous: Optional[np.ndarray] = None
    alpha: Optional[np.ndarray] = None
    epsilon: Optional[np.ndarray] = None
    objective_history: List[float] = field(default_factory=list)
    f2b_history: List[float] = field(default_factory=list)
    refine_sweeps: int = 0
    iterations: int = 0
    stop_reason: QtlmStopReason = QtlmStopReason.NOT_STARTED


@dataclass
class PatternSample:
    """One azimuth sample of a normalized radiation pattern."""
    azimuth_deg: float
    gain_db: float


@dataclass
class BeamwidthResult:
    """
    Half-power beamwidth of one lobe.

    Attributes:
        width_deg: Width between the -3 dB crossings, None when unresolved
        status: OK or UNRESOLVED
        left_deg: Interpolated crossing below the peak
        right_deg: Interpolated crossing above the peak
    """
    width_deg: Optional[float]
    status: MeasurementStatus
    left_deg: Optional[float] = None
    right_deg: Optional[float] = None


@dataclass
class RxmerResult:
    """Receive modulation error ratio, linear, or an UNBOUNDED status."""
    ratio: Optional[float]
    status: MeasurementStatus

    @property
    def is_bounded(self) -> bool:
        return self.status is MeasurementStatus.OK


@dataclass(frozen=True)
class SweepPoint:
    """Coordinates of one sweep cell."""
    pilot_count: int
    tx_power_db: float


@dataclass
class ExperimentConfig:
    """
    Full description of a sweep.

    Attributes:
        scenario: Deployment to simulate
        pilot_counts: Slot counts P to sweep
        tx_power_db: Transmit gains in dB to sweep, relative to the scenario link budget
        trials: Trials per sweep point
        seed: Master seed
        gamp: EM-GAMP options
        t_max: QTLM iteration cap
        multi_start: QTLM starting points per codeword
        warm_start: Start each QTLM run from the best projection of its unquantized path
        refine: Finish each QTLM run with element-wise refinement
        eig_zero_tol: Zero-eigenvalue threshold of the low-rank solve
        beamformer: 'qtlm' or 'mrt'
        noise_estimate: 'rxmer' or 'floor'
        frame_length: Samples per evaluation and calibration frame
        output_path: Where results are written
        output_format: 'csv' or 'json'
        threads: Worker threads for the sweep
        include_timing: Emit wall-clock and memory columns
    """
    scenario: ScenarioConfig
    pilot_counts: List[int]
    tx_power_db: List[float] = field(default_factory=lambda: [0.0])
    trials: int = 1
    seed: int = 0
    gamp: GampOptions = field(default_factory=GampOptions)
    t_max: int = 50
    multi_start: int = 1
    warm_start: bool = True
    refine: bool = True
    eig_zero_tol: float = 1e-10
    beamformer: str = 'qtlm'
    noise_estimate: str = 'rxmer'
    frame_length: int = 256
    output_path: str = 'results.csv'
    output_format: str = 'csv'
    threads: int = 1
    include_timing: bool = False

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not self.pilot_counts or not self.tx_power_db:
            raise ValueError("Sweep axes must be non-empty")
        if any(p < 1 for p in self.pilot_counts):
            raise ValueError("Pilot counts must be at least 1")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.t_max < 0 or self.multi_start < 1:
            raise ValueError("t_max must be >= 0 and multi_start >= 1")
        if not isinstance(self.warm_start, bool) or not isinstance(self.refine, bool):
            raise ValueError("warm_start and refine must be true or false")
        if self.beamformer not in ['qtlm', 'mrt']:
            raise ValueError(f"Invalid beamformer: {self.beamformer}. Must be 'qtlm' or 'mrt'")
        if self.beamformer == 'mrt' and self.scenario.n_users != 1:
            raise ValueError("The 'mrt' beamformer serves exactly one user")
        if self.noise_estimate not in ['rxmer', 'floor']:
            raise ValueError(f"Invalid noise_estimate: {self.noise_estimate}. Must be 'rxmer' or 'floor'")
        if self.frame_length < 1:
            raise ValueError(f"frame_length must be positive, got {self.frame_length}")
        if self.output_format not in ['csv', 'json']:
            raise ValueError(f"Invalid output_format: {self.output_format}. Must be 'csv' or 'json'")
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")

    def sweep_points(self) -> List[SweepPoint]:
        """Sweep cells in deterministic (pilot count major) order."""
        return [SweepPoint(p, float(power)) for p in self.pilot_counts for power in self.tx_power_db]


@dataclass
class ResultRecord:
    """
    Outcome of one pipeline run.

    Per-user lists are indexed by user. Timing fields do not take part in
    equality so reruns compare equal.

    Attributes:
        pilot_count: Slot count P
        tx_power_db: Transmit gain of the sweep point
        trial: Trial index
        seed: Record seed derived from the master seed and coordinates
        power_off_w: Received power with the RIS absorbing, per user
        power_on_w: Received power with the codeword applied, per user
        gain_db: Power gain, per user
        nmse: Channel-estimate NMSE per user, None when the channel is zero
        gamp_status: EM-GAMP status per user
        gamp_iterations: EM-GAMP iterations per user
        se_off: Spectral efficiency with the RIS absorbing
        se_on: Spectral efficiency with the codeword applied
        mean_nmse: Mean NMSE over users with a defined NMSE
        qtlm_iterations: Beamformer iterations
        noise_estimate_w: Noise power handed to the beamformer
        fallback_users: Users whose estimate fell back to the zero channel
        codeword: Alphabet indices of the applied codeword
        wall_clock_s: Seconds spent in the pipeline
        peak_memory_mb: Highest resident memory of the process sampled during the pipeline
    """
    pilot_count: int
    tx_power_db: float
    trial: int
    seed: int
    power_off_w: List[float]
    power_on_w: List[float]
    gain_db: List[float]
    nmse: List[Optional[float]]
    gamp_status: List[str]
    gamp_iterations: List[int]
    se_off: float
    se_on: float
    mean_nmse: Optional[float]
    qtlm_iterations: int
    noise_estimate_w: float
    fallback_users: int
    codeword: List[int] = field(default_factory=list)
    wall_clock_s: float = field(default=0.0, compare=False)
    peak_memory_mb: float = field(default=0.0, compare=False)

    @property
    def n_users(self) -> int:
        return len(self.power_off_w)

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            'pilot_count': self.pilot_count,
            'tx_power_db': self.tx_power_db,
            'trial': self.trial,
            'seed': self.seed,
            'power_off_w': list(self.power_off_w),
            'power_on_w': list(self.power_on_w),
            'gain_db': list(self.gain_db),
            'nmse': list(self.nmse),
            'gamp_status': list(self.gamp_status),
            'gamp_iterations': list(self.gamp_iterations),
            'se_off': self.se_off,
            'se_on': self.se_on,
            'mean_nmse': self.mean_nmse,
            'qtlm_iterations': self.qtlm_iterations,
            'noise_estimate_w': self.noise_estimate_w,
            'fallback_users': self.fallback_users,
            'codeword': list(self.codeword),
        }
        if include_timing:
            data['wall_clock_s'] = self.wall_clock_s
            data['peak_memory_mb'] = self.peak_memory_mb
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ResultRecord':
        return cls(
            pilot_count=int(data['pilot_count']),
            tx_power_db=float(data['tx_power_db']),
            trial=int(data['trial']),
            seed=int(data['seed']),
            power_off_w=[float(x) for x in data['power_off_w']],
            power_on_w=[float(x) for x in data['power_on_w']],
            gain_db=[float(x) for x in data['gain_db']],
            nmse=[None if x is None else float(x) for x in data['nmse']],
            gamp_status=[str(x) for x in data['gamp_status']],
            gamp_iterations=[int(x) for x in data['gamp_iterations']],
            se_off=float(data['se_off']),
            se_on=float(data['se_on']),
            mean_nmse=None if data.get('mean_nmse') is None else float(data['mean_nmse']),
            qtlm_iterations=int(data['qtlm_iterations']),
            noise_estimate_w=float(data['noise_estimate_w']),
            fallback_users=int(data['fallback_users']),
            codeword=[int(x) for x in data.get('codeword', [])],
            wall_clock_s=float(data.get('wall_clock_s', 0.0)),
            peak_memory_mb=float(data.get('peak_memory_mb', 0.0)),
        )


@dataclass
class PatternReport:
    """
    Radiation pattern of one codeword with its dominant lobes.

    Attributes:
        pattern: Normalized azimuth cut
        peaks: Azimuths of lobes above the floor, in degrees
        beamwidths: Half-power beamwidth of each lobe in peak order
    """
    pattern: List[PatternSample]
    peaks: List[float]
    beamwidths: List[BeamwidthResult]


@dataclass
class OracleComparison:
    """Spectral efficiency of QTLM against the exhaustive optimum on one instance."""
    instance: int
    se_qtlm: float
    se_oracle: float
    qtlm_iterations: int = 0

    @property
    def ratio(self) -> float:
        if self.se_oracle == 0:
            return 1.0
        return self.se_qtlm / self.se_oracle
