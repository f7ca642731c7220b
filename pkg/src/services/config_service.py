"""
Configuration service for the RIS Beamforming Simulator.

This module loads experiment configurations from JSON files with nested
sections, validates them against the data-model constraints, and converts
configurations back to plain dictionaries. The schema is documented in
docs/CONFIG_SCHEMA.md.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from models.data_models import (
    ExperimentConfig, GampOptions, RisGeometry, ScenarioConfig, TransmitterDescriptor,
    UserDescriptor
)
from models.exceptions import ConfigurationError
from services.array_geometry import SPEED_OF_LIGHT, lab_panel_geometry as panel_geometry

logger = logging.getLogger('RisBeamformingSim.config_service')

TOP_LEVEL_KEYS = {'scenario', 'sweep', 'estimation', 'beamforming', 'evaluation', 'output'}
SCENARIO_KEYS = {'geometry', 'transmitter', 'users', 'bs_paths', 'user_paths', 'noise_power',
                 'impairment_power', 'channel_mode', 'rician_factor', 'wavefront', 'seed'}
GEOMETRY_KEYS = {'preset', 'n_y', 'n_z', 'd_y', 'd_z', 'wavelength', 'frequency_hz', 'tau'}
TRANSMITTER_KEYS = {'azimuth_deg', 'elevation_deg', 'distance_m', 'link_gain'}
USER_KEYS = TRANSMITTER_KEYS | {'direct_power'}
SWEEP_KEYS = {'pilot_counts', 'tx_power_db', 'trials', 'seed'}
ESTIMATION_KEYS = {'damping', 'max_iterations', 'tolerance', 'initial_sparsity',
                   'divergence_factor', 'divergence_patience'}
BEAMFORMING_KEYS = {'beamformer', 't_max', 'multi_start', 'eig_zero_tol', 'warm_start', 'refine'}
EVALUATION_KEYS = {'noise_estimate', 'frame_length'}
OUTPUT_KEYS = {'path', 'format', 'threads', 'include_timing'}


class ConfigService:
    """
    Loads, validates and serializes experiment configurations.

    Every failure surfaces as a ConfigurationError whose field_name is the
    dotted path of the offending entry, e.g. 'scenario.geometry.n_y'.
    """

    def __init__(self):
        self.config_path: Optional[str] = None

    def load_experiment_config(self, path: str) -> ExperimentConfig:
        """
        Read and validate a JSON configuration file.

        Args:
            path: Path to the JSON file

        Returns:
            Validated ExperimentConfig

        Raises:
            ConfigurationError: If the file is missing, is not JSON, or is invalid
        """
        self.config_path = str(path)
        file_path = Path(path)
        if not file_path.is_file():
            raise ConfigurationError(f"Configuration file could not be found: {path}",
                                     config_path=str(path))
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON: {str(e)}", config_path=str(path))

        config = self.experiment_config_from_dict(data)
        logger.info("Loaded configuration %s: K=%d, N=%d, %d sweep points x %d trials",
                    path, config.scenario.n_users, config.scenario.geometry.n_elements,
                    len(config.sweep_points()), config.trials)
        return config

    def experiment_config_from_dict(self, data: Dict[str, Any]) -> ExperimentConfig:
        """
        Build an ExperimentConfig from nested sections.

        Raises:
            ConfigurationError: On unknown keys, missing sections or invalid values
        """
        self._require_mapping(data, 'config')
        self._check_keys(data, TOP_LEVEL_KEYS, '')
        if 'scenario' not in data:
            raise self._error("Missing required section", 'scenario')
        if 'sweep' not in data:
            raise self._error("Missing required section", 'sweep')

        scenario = self._scenario_from_dict(data['scenario'])
        sweep = self._section(data, 'sweep', SWEEP_KEYS)
        estimation = self._section(data, 'estimation', ESTIMATION_KEYS)
        beamforming = self._section(data, 'beamforming', BEAMFORMING_KEYS)
        evaluation = self._section(data, 'evaluation', EVALUATION_KEYS)
        output = self._section(data, 'output', OUTPUT_KEYS)

        if 'pilot_counts' not in sweep:
            raise self._error("Missing required field", 'sweep.pilot_counts')

        gamp = self._build('estimation', lambda: GampOptions(**estimation))
        kwargs = {
            'scenario': scenario,
            'gamp': gamp,
            'pilot_counts': self._build('sweep.pilot_counts', lambda: [int(p) for p in sweep['pilot_counts']]),
        }
        if 'tx_power_db' in sweep:
            kwargs['tx_power_db'] = self._build('sweep.tx_power_db',
                                                lambda: [float(p) for p in sweep['tx_power_db']])
        for key in ('trials', 'seed'):
            if key in sweep:
                kwargs[key] = self._build(f'sweep.{key}', lambda key=key: int(sweep[key]))
        kwargs.update(beamforming)
        kwargs.update(evaluation)
        renamed = {'path': 'output_path', 'format': 'output_format'}
        for key, value in output.items():
            kwargs[renamed.get(key, key)] = value

        return self._build('config', lambda: ExperimentConfig(**kwargs))

    def experiment_config_to_dict(self, config: ExperimentConfig) -> Dict[str, Any]:
        """Inverse of experiment_config_from_dict."""
        scenario = config.scenario
        geometry = scenario.geometry
        return {
            'scenario': {
                'geometry': {
                    'n_y': geometry.n_y,
                    'n_z': geometry.n_z,
                    'd_y': geometry.d_y,
                    'd_z': geometry.d_z,
                    'wavelength': geometry.wavelength,
                    'tau': geometry.tau,
                },
                'transmitter': self._descriptor_to_dict(scenario.transmitter, TRANSMITTER_KEYS),
                'users': [self._descriptor_to_dict(user, USER_KEYS) for user in scenario.users],
                'bs_paths': scenario.bs_paths,
                'user_paths': scenario.user_paths,
                'noise_power': scenario.noise_power,
                'impairment_power': scenario.impairment_power,
                'channel_mode': scenario.channel_mode,
                'rician_factor': scenario.rician_factor,
                'wavefront': scenario.wavefront,
                'seed': scenario.seed,
            },
            'sweep': {
                'pilot_counts': list(config.pilot_counts),
                'tx_power_db': list(config.tx_power_db),
                'trials': config.trials,
                'seed': config.seed,
            },
            'estimation': {key: getattr(config.gamp, key) for key in sorted(ESTIMATION_KEYS)},
            'beamforming': {key: getattr(config, key) for key in sorted(BEAMFORMING_KEYS)},
            'evaluation': {key: getattr(config, key) for key in sorted(EVALUATION_KEYS)},
            'output': {
                'path': config.output_path,
                'format': config.output_format,
                'threads': config.threads,
                'include_timing': config.include_timing,
            },
        }

    def lab_panel_geometry(self, tau: int = 1) -> RisGeometry:
        """The 16 x 32 laboratory panel."""
        return panel_geometry(tau)

    def _scenario_from_dict(self, data: Any) -> ScenarioConfig:
        self._require_mapping(data, 'scenario')
        self._check_keys(data, SCENARIO_KEYS, 'scenario')
        if 'geometry' not in data:
            raise self._error("Missing required section", 'scenario.geometry')
        if not data.get('users'):
            raise self._error("At least one user is required", 'scenario.users')

        geometry = self._geometry_from_dict(data['geometry'])
        transmitter_data = data.get('transmitter', {})
        self._require_mapping(transmitter_data, 'scenario.transmitter')
        self._check_keys(transmitter_data, TRANSMITTER_KEYS, 'scenario.transmitter')
        transmitter = self._build('scenario.transmitter', lambda: TransmitterDescriptor(**transmitter_data))

        users = []
        for k, user_data in enumerate(data['users']):
            path = f'scenario.users[{k}]'
            self._require_mapping(user_data, path)
            self._check_keys(user_data, USER_KEYS, path)
            users.append(self._build(path, lambda user_data=user_data: UserDescriptor(**user_data)))

        options = {key: value for key, value in data.items()
                   if key not in ('geometry', 'transmitter', 'users')}
        return self._build('scenario', lambda: ScenarioConfig(
            geometry=geometry, users=users, transmitter=transmitter, **options
        ))

    def _geometry_from_dict(self, data: Any) -> RisGeometry:
        path = 'scenario.geometry'
        self._require_mapping(data, path)
        self._check_keys(data, GEOMETRY_KEYS, path)
        tau = data.get('tau', 1)

        preset = data.get('preset')
        if preset is not None:
            if preset != 'lab_panel':
                raise self._error(f"Unknown geometry preset '{preset}'", f'{path}.preset')
            extra = set(data) - {'preset', 'tau'}
            if extra:
                raise self._error("A preset only accepts 'tau'", f'{path}.{sorted(extra)[0]}')
            return self._build(path, lambda: self.lab_panel_geometry(int(tau)))

        for key in ('n_y', 'n_z', 'd_y', 'd_z'):
            if key not in data:
                raise self._error("Missing required field", f'{path}.{key}')
        if ('wavelength' in data) == ('frequency_hz' in data):
            raise self._error("Give exactly one of 'wavelength' and 'frequency_hz'", f'{path}.wavelength')

        def build() -> RisGeometry:
            if 'wavelength' in data:
                wavelength = float(data['wavelength'])
            else:
                wavelength = SPEED_OF_LIGHT / float(data['frequency_hz'])
            return RisGeometry(
                n_y=int(data['n_y']),
                n_z=int(data['n_z']),
                d_y=float(data['d_y']),
                d_z=float(data['d_z']),
                wavelength=wavelength,
                tau=int(tau),
            )
        return self._build(path, build)

    @staticmethod
    def _descriptor_to_dict(descriptor: TransmitterDescriptor, keys: Iterable[str]) -> Dict[str, Any]:
        return {key: getattr(descriptor, key) for key in sorted(keys)}

    def _section(self, data: Dict[str, Any], name: str, allowed: Iterable[str]) -> Dict[str, Any]:
        section = data.get(name, {})
        self._require_mapping(section, name)
        self._check_keys(section, allowed, name)
        return dict(section)

    def _check_keys(self, data: Dict[str, Any], allowed: Iterable[str], prefix: str) -> None:
        unknown = sorted(set(data) - set(allowed))
        if unknown:
            field_name = f'{prefix}.{unknown[0]}' if prefix else unknown[0]
            raise self._error("Unknown configuration key", field_name)

    def _require_mapping(self, data: Any, field_name: str) -> None:
        if not isinstance(data, dict):
            raise self._error("Expected an object", field_name)

    def _build(self, field_name: str, factory):
        try:
            return factory()
        except ConfigurationError:
            raise
        except (TypeError, ValueError) as e:
            raise self._error(str(e), field_name)

    def _error(self, message: str, field_name: str) -> ConfigurationError:
        return ConfigurationError(f"{message}: {field_name}", field_name=field_name,
                                  config_path=self.config_path)
