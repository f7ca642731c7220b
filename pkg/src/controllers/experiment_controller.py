"""
Experiment controller for the RIS Beamforming Simulator.

This module runs the end-to-end test process for one sweep point: draw the
scenario, send RIS-off frames and estimate the direct links, sense the
cascaded channels with Rademacher patterns and recover them with EM-GAMP,
calibrate the noise power from RxMER, design the codeword, then apply it and
measure. It also drives whole sweeps, result emission, codeword patterns and
the QTLM-versus-oracle check.

Random streams are derived with numpy SeedSequence from the master seed and
the sweep coordinates:

    scenario  (trial, 0)                  shared by every sweep point of a trial
    sensing   (trial, 1, P)               shared by every power level of a P
    record seed from (trial, 2, P, power) noise and beamformer streams spawn from it
"""

import logging
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from models.data_models import (
    BeamformingProblem, ExperimentConfig, OracleComparison, PatternReport, ResultRecord,
    RisGeometry, ScenarioConfig, SweepPoint
)
from models.exceptions import ValidationError
from models.interfaces import BeamformerInterface, ChannelEstimatorInterface
from services.array_geometry import phase_alphabet
from services.beamforming_engine import (
    MrtBeamformer, QtlmBeamformer, codeword_from_indices, codeword_indices, exhaustive_oracle,
    objective_f1, project_alphabet, single_user_mrt
)
from services.channel_estimator import (
    EmGampEstimator, estimate_direct_ls, estimate_user_channel, generate_sensing_plan,
    per_user_nmse
)
from services.channel_model import (
    complex_gaussian, draw_scenario, measure_sensing_slots, transmit_frame
)
from services.export_service import ExportService, save_codeword
from services.link_metrics import (
    corrected_noise, find_pattern_peaks, frame_rxmer, half_power_beamwidth, power_gain_db,
    radiation_pattern, received_power, spectral_efficiency
)
from services.performance_monitor import MemoryMonitor, SweepExecutor

logger = logging.getLogger('RisBeamformingSim.experiment_controller')

_SCENARIO_STREAM = 0
_SENSING_STREAM = 1
_RECORD_STREAM = 2


def _power_key(tx_power_db: float) -> int:
    """Bit pattern of the power level, a non-negative integer usable as a spawn key."""
    return int(np.array(tx_power_db, dtype=np.float64).view(np.uint64).item())


def record_seed(master_seed: int, point: SweepPoint, trial: int) -> int:
    """Per-record seed derived from the master seed and the record coordinates."""
    sequence = np.random.SeedSequence(
        master_seed, spawn_key=(trial, _RECORD_STREAM, point.pilot_count, _power_key(point.tx_power_db))
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _stream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def _estimated_noise(samples: np.ndarray, pilots: np.ndarray, fallback: float) -> float:
    """Noise power from the RxMER of a frame; never above the received power itself."""
    p_r = received_power(samples)
    result = frame_rxmer(samples, pilots)
    if not result.is_bounded:
        return fallback
    return min(corrected_noise(p_r, result.ratio), p_r)


class ExperimentController:
    """
    Coordinates the simulation services for one experiment configuration.

    The controller holds no per-run state, so run_pipeline may be called from
    several threads at once.
    """

    def __init__(self, config: ExperimentConfig,
                 estimator: Optional[ChannelEstimatorInterface] = None,
                 beamformer: Optional[BeamformerInterface] = None,
                 export_service: Optional[ExportService] = None):
        self.config = config
        self.geometry = config.scenario.geometry
        self.alphabet = phase_alphabet(self.geometry.tau)
        self.estimator = estimator or EmGampEstimator(config.gamp)
        if beamformer is None:
            if config.beamformer == 'mrt':
                beamformer = MrtBeamformer()
            else:
                beamformer = QtlmBeamformer(config.multi_start, config.warm_start, config.refine)
        self.beamformer = beamformer
        self.export_service = export_service or ExportService(include_timing=config.include_timing)

    def run_pipeline(self, point: SweepPoint, trial: int) -> ResultRecord:
        """
        Run the five-step test process for one sweep point and trial.

        Args:
            point: Pilot count and transmit gain
            trial: Trial index

        Returns:
            Populated ResultRecord
        """
        started = time.perf_counter()
        config = self.config
        monitor = MemoryMonitor() if config.include_timing else None
        if monitor is not None:
            monitor.start_monitoring()
        scenario = config.scenario
        geom = self.geometry
        n_users = scenario.n_users
        seed = record_seed(config.seed, point, trial)
        record_sequence = np.random.SeedSequence(seed)
        noise_sequence, beam_sequence = record_sequence.spawn(2)
        noise_rng = np.random.default_rng(noise_sequence)
        beam_rng = np.random.default_rng(beam_sequence)
        effective_noise = scenario.effective_noise_power
        pilots = np.ones(config.frame_length, dtype=complex)

        # (1) Initialization
        channels = draw_scenario(scenario, _stream(config.seed, trial, _SCENARIO_STREAM))
        channels = channels.with_tx_gain(point.tx_power_db)

        # (2) RIS off: direct-link estimate and starting noise level per user
        h_d_hat = np.empty(n_users, dtype=complex)
        init_noise = np.empty(n_users)
        for k in range(n_users):
            noise = complex_gaussian(noise_rng, config.frame_length, effective_noise)
            y_off = transmit_frame(None, channels.h_d[k], channels.h[k], pilots, noise)
            h_d_hat[k] = estimate_direct_ls(pilots, y_off)
            if config.noise_estimate == 'rxmer':
                init_noise[k] = _estimated_noise(y_off, pilots, scenario.noise_power)
            else:
                init_noise[k] = scenario.noise_power

        # (3) Sensing and EM-GAMP recovery of the cascaded channels
        plan = generate_sensing_plan(geom, point.pilot_count,
                                     _stream(config.seed, trial, _SENSING_STREAM, point.pilot_count))
        h_hat = np.empty((n_users, geom.n_elements), dtype=complex)
        nmse: List[Optional[float]] = []
        gamp_status: List[str] = []
        gamp_iterations: List[int] = []
        fallback_users = 0
        for k in range(n_users):
            y_sense = measure_sensing_slots(plan, channels.h_d[k], channels.h[k], effective_noise, noise_rng)
            h_hat[k], estimate = estimate_user_channel(
                self.estimator, plan, y_sense, h_d_hat[k], max(init_noise[k], 1e-30), geom
            )
            fallback_users += int(estimate.failed)
            gamp_status.append(estimate.status.value)
            gamp_iterations.append(int(estimate.iterations))
            if np.any(channels.h[k]):
                nmse.append(per_user_nmse([channels.h[k]], [h_hat[k]])[0])
            else:
                nmse.append(None)

        # (4) Noise calibration and codeword design
        sigma2 = self._beamformer_noise(channels, h_d_hat, h_hat, pilots, noise_rng)
        problem = BeamformingProblem(
            h_d=h_d_hat, h=h_hat, sigma2=sigma2, alphabet=self.alphabet,
            t_max=config.t_max, eig_zero_tol=config.eig_zero_tol,
        )
        theta, state = self.beamformer.design(problem, beam_rng)

        # (5) Apply the codeword and measure against the RIS-off state
        power_off, power_on, gain = [], [], []
        for k in range(n_users):
            noise = complex_gaussian(noise_rng, config.frame_length, effective_noise)
            p_off = received_power(transmit_frame(None, channels.h_d[k], channels.h[k], pilots, noise))
            p_on = received_power(transmit_frame(theta, channels.h_d[k], channels.h[k], pilots, noise))
            power_off.append(p_off)
            power_on.append(p_on)
            gain.append(power_gain_db(p_on, p_off))

        gamma_off = np.abs(channels.h_d) ** 2 / effective_noise
        gamma_on = np.abs(channels.h_d + channels.h @ theta) ** 2 / effective_noise
        defined = [value for value in nmse if value is not None]
        peak_memory = monitor.stop_monitoring()[1] if monitor is not None else 0.0

        record = ResultRecord(
            pilot_count=point.pilot_count,
            tx_power_db=point.tx_power_db,
            trial=trial,
            seed=seed,
            power_off_w=power_off,
            power_on_w=power_on,
            gain_db=gain,
            nmse=nmse,
            gamp_status=gamp_status,
            gamp_iterations=gamp_iterations,
            se_off=spectral_efficiency(gamma_off),
            se_on=spectral_efficiency(gamma_on),
            mean_nmse=float(np.mean(defined)) if defined else None,
            qtlm_iterations=state.iterations if state is not None else 0,
            noise_estimate_w=float(sigma2),
            fallback_users=fallback_users,
            codeword=[int(i) for i in codeword_indices(theta, self.alphabet)],
            wall_clock_s=time.perf_counter() - started,
            peak_memory_mb=peak_memory,
        )
        logger.info("P=%d tx=%+.1f dB trial %d: SE %.3f -> %.3f b/s/Hz, mean gain %+.2f dB",
                    point.pilot_count, point.tx_power_db, trial, record.se_off, record.se_on,
                    float(np.mean(gain)))
        return record

    def _beamformer_noise(self, channels, h_d_hat: np.ndarray, h_hat: np.ndarray,
                          pilots: np.ndarray, noise_rng: np.random.Generator) -> float:
        """
        Noise power handed to the beamformer.

        In 'rxmer' mode every user is served once with the phase-aligning
        codeword of its estimated channel and the corrected noise of those
        frames is averaged. 'floor' mode uses the thermal noise alone.
        """
        scenario = self.config.scenario
        if self.config.noise_estimate == 'floor':
            return scenario.noise_power
        estimates = []
        for k in range(scenario.n_users):
            if np.any(h_hat[k]):
                calibration = project_alphabet(single_user_mrt(h_d_hat[k], h_hat[k]), self.alphabet)
            else:
                calibration = np.full(self.geometry.n_elements, self.alphabet.values[0])
            noise = complex_gaussian(noise_rng, pilots.size, scenario.effective_noise_power)
            y_cal = transmit_frame(calibration, channels.h_d[k], channels.h[k], pilots, noise)
            estimates.append(_estimated_noise(y_cal, pilots, scenario.noise_power))
        sigma2 = float(np.mean(estimates))
        return sigma2 if sigma2 > 0 else scenario.noise_power

    def run_sweep(self, threads: Optional[int] = None,
                  progress_callback: Optional[Callable[[float, str], None]] = None) -> List[ResultRecord]:
        """
        Run every sweep point for every trial.

        Args:
            threads: Worker threads; the configured count when None
            progress_callback: Optional callback receiving (percent, message)

        Returns:
            Records ordered by pilot count, then power level, then trial
        """
        jobs = [(point, trial) for point in self.config.sweep_points() for trial in range(self.config.trials)]
        tasks = [lambda point=point, trial=trial: self.run_pipeline(point, trial) for point, trial in jobs]
        executor = SweepExecutor(threads or self.config.threads)
        records = executor.run(tasks, progress_callback)
        logger.info("Sweep finished: %d records", len(records))
        return records

    def emit_results(self, records: Sequence[ResultRecord], file_path: Optional[str] = None,
                     format_type: Optional[str] = None) -> str:
        """
        Write records to disk.

        Returns:
            The path written
        """
        file_path = file_path or self.config.output_path
        self.export_service.export_records(list(records), file_path, format_type or self.config.output_format)
        return file_path

    def save_codewords(self, records: Sequence[ResultRecord], directory: str) -> List[str]:
        """Write each record's codeword as a JSON index array named after its coordinates."""
        paths = []
        for record in records:
            name = f"codeword_P{record.pilot_count}_tx{record.tx_power_db:+g}_t{record.trial}.json"
            path = str(Path(directory) / name)
            save_codeword(record.codeword, path)
            paths.append(path)
        return paths


def run_pipeline(config: ExperimentConfig, point: SweepPoint, trial: int) -> ResultRecord:
    """Run one pipeline with the default estimator and beamformer."""
    return ExperimentController(config).run_pipeline(point, trial)


def run_sweep(config: ExperimentConfig, threads: Optional[int] = None,
              progress_callback: Optional[Callable[[float, str], None]] = None) -> List[ResultRecord]:
    """Cartesian product of the sweep axes times trials, in deterministic order."""
    return ExperimentController(config).run_sweep(threads, progress_callback)


def emit_results(records: Sequence[ResultRecord], file_path: str, format_type: str = 'csv',
                 include_timing: bool = False) -> str:
    """Write records as CSV or JSON."""
    ExportService(include_timing=include_timing).export_records(list(records), file_path, format_type)
    return file_path


def design_true_csi_codeword(scenario: ScenarioConfig, sigma2: float, multi_start: int = 1,
                             seed: int = 0, t_max: int = 50, warm_start: bool = True,
                             refine: bool = True) -> np.ndarray:
    """
    QTLM codeword for one scenario draw with perfect channel knowledge.

    Returns:
        Alphabet indices of the codeword
    """
    rng = np.random.default_rng(seed)
    channels = draw_scenario(scenario, rng)
    alphabet = phase_alphabet(scenario.geometry.tau)
    problem = BeamformingProblem(h_d=channels.h_d, h=channels.h, sigma2=sigma2,
                                 alphabet=alphabet, t_max=t_max)
    theta, _ = QtlmBeamformer(multi_start, warm_start, refine).design(problem, rng)
    return codeword_indices(theta, alphabet)


def run_pattern(geom: RisGeometry, indices: Sequence[int], incident_azimuth_deg: float = 0.0,
                incident_elevation_deg: float = 90.0, grid_deg: Optional[Sequence[float]] = None,
                floor_db: float = -6.0) -> PatternReport:
    """
    Radiation pattern, dominant lobes and their half-power beamwidths for a stored codeword.

    Raises:
        ValidationError: If the codeword length differs from the element count
    """
    indices = np.asarray(indices, dtype=int)
    if indices.size != geom.n_elements:
        raise ValidationError(f"Codeword has {indices.size} entries, the array has {geom.n_elements}",
                              field_name="codeword")
    theta = codeword_from_indices(indices, phase_alphabet(geom.tau))
    pattern = radiation_pattern(geom, theta, np.deg2rad(incident_azimuth_deg),
                                np.deg2rad(incident_elevation_deg), grid_deg)
    peaks = find_pattern_peaks(pattern, floor_db)
    return PatternReport(pattern=pattern, peaks=peaks,
                         beamwidths=[half_power_beamwidth(pattern, peak) for peak in peaks])


def _oracle_instance(index: int, n_elements: int, n_users: int, tau: int, sigma2: float,
                     seed: int, t_max: int, beamformer: QtlmBeamformer) -> OracleComparison:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    problem = BeamformingProblem(
        h_d=complex_gaussian(rng, n_users),
        h=complex_gaussian(rng, (n_users, n_elements)),
        sigma2=sigma2,
        alphabet=phase_alphabet(tau),
        t_max=t_max,
    )
    theta, state = beamformer.design(problem, rng)
    _, best = exhaustive_oracle(problem)
    return OracleComparison(instance=index, se_qtlm=objective_f1(theta, problem), se_oracle=best,
                            qtlm_iterations=state.iterations)


def run_oracle(n_instances: int = 100, n_elements: int = 10, n_users: int = 2, tau: int = 1,
               sigma2: float = 1.0, seed: int = 0, t_max: int = 50, multi_start: int = 1,
               threads: int = 1, warm_start: bool = True, refine: bool = True) -> List[OracleComparison]:
    """
    QTLM against exhaustive search on seeded random instances with true CSI.

    Every instance draws h_d ~ CN(0, 1) per user and h ~ CN(0, I_N); the
    default sigma2 = 1 puts channels and noise on the same unit scale.

    Returns:
        One comparison per instance, in instance order
    """
    if n_instances < 1:
        raise ValidationError("Need at least one oracle instance", field_name="instances")
    beamformer = QtlmBeamformer(multi_start, warm_start, refine)
    tasks = [lambda i=i: _oracle_instance(i, n_elements, n_users, tau, sigma2, seed, t_max, beamformer)
             for i in range(n_instances)]
    return SweepExecutor(threads).run(tasks)


def oracle_success_rate(comparisons: Sequence[OracleComparison], threshold: float = 0.85) -> float:
    """Share of instances where QTLM reaches threshold x the optimum."""
    return float(np.mean([c.ratio >= threshold for c in comparisons]))


def summarize_oracle(comparisons: Sequence[OracleComparison],
                     thresholds: Tuple[float, ...] = (0.85, 0.9, 0.95, 0.99)) -> str:
    """Ratio table printed by the oracle command."""
    ratios = np.array([c.ratio for c in comparisons])
    lines = [
        "=" * 50,
        "QTLM VS EXHAUSTIVE SEARCH",
        "=" * 50,
        f"Instances: {len(comparisons)}",
        f"Mean ratio: {ratios.mean():.4f}",
        f"Worst ratio: {ratios.min():.4f}",
        "",
        "Share of instances reaching:",
    ]
    for threshold in thresholds:
        lines.append(f"  - {threshold:.0%} of optimum: {oracle_success_rate(comparisons, threshold):.0%}")
    lines.append("=" * 50)
    return "\n".join(lines)
