"""
Unit tests for loading, validating and serializing experiment configurations.
"""

import json
from pathlib import Path

import pytest

from models.data_models import ExperimentConfig
from models.exceptions import ConfigurationError
from services.array_geometry import SPEED_OF_LIGHT
from services.config_service import ConfigService

CONFIG_DIR = Path(__file__).resolve().parents[2] / 'configs'


def _minimal():
    return {
        'scenario': {
            'geometry': {'n_y': 4, 'n_z': 2, 'd_y': 0.5, 'd_z': 0.5, 'wavelength': 1.0},
            'users': [{'azimuth_deg': 10.0, 'direct_power': 0.2}],
        },
        'sweep': {'pilot_counts': [8, 16]},
    }


@pytest.fixture
def service():
    return ConfigService()


class TestExperimentConfigFromDict:

    def test_minimal_config_uses_defaults(self, service):
        config = service.experiment_config_from_dict(_minimal())
        assert isinstance(config, ExperimentConfig)
        assert config.pilot_counts == [8, 16]
        assert config.tx_power_db == [0.0]
        assert config.beamformer == 'qtlm'
        assert config.scenario.geometry.n_elements == 8
        assert config.scenario.users[0].direct_power == 0.2

    def test_round_trip(self, service, small_config):
        data = service.experiment_config_to_dict(small_config)
        assert service.experiment_config_from_dict(data) == small_config
        json.dumps(data)

    def test_output_section_is_renamed(self, service):
        data = _minimal()
        data['output'] = {'path': 'out/run.json', 'format': 'json', 'threads': 3}
        config = service.experiment_config_from_dict(data)
        assert config.output_path == 'out/run.json'
        assert config.output_format == 'json'
        assert config.threads == 3

    def test_estimation_section(self, service):
        data = _minimal()
        data['estimation'] = {'damping': 0.5, 'max_iterations': 40}
        config = service.experiment_config_from_dict(data)
        assert config.gamp.damping == 0.5
        assert config.gamp.max_iterations == 40

    @pytest.mark.parametrize('mutate, field_name', [
        (lambda d: d.update(bogus=1), 'bogus'),
        (lambda d: d['scenario']['geometry'].update(spacing=1), 'scenario.geometry.spacing'),
        (lambda d: d['scenario']['users'][0].update(speed=1), 'scenario.users[0].speed'),
        (lambda d: d.update(beamforming={'iterations': 3}), 'beamforming.iterations'),
    ])
    def test_unknown_keys_name_their_path(self, service, mutate, field_name):
        data = _minimal()
        mutate(data)
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == field_name

    def test_missing_sweep(self, service):
        data = _minimal()
        del data['sweep']
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'sweep'

    def test_missing_pilot_counts(self, service):
        data = _minimal()
        data['sweep'] = {'trials': 3}
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'sweep.pilot_counts'

    def test_no_users(self, service):
        data = _minimal()
        data['scenario']['users'] = []
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'scenario.users'

    def test_invalid_value_reports_section(self, service):
        data = _minimal()
        data['scenario']['geometry']['n_y'] = 0
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'scenario.geometry'

    def test_invalid_beamformer(self, service):
        data = _minimal()
        data['beamforming'] = {'beamformer': 'greedy'}
        with pytest.raises(ConfigurationError, match='greedy'):
            service.experiment_config_from_dict(data)

    def test_design_switches(self, service):
        data = _minimal()
        data['beamforming'] = {'warm_start': False, 'refine': False, 'multi_start': 2}
        config = service.experiment_config_from_dict(data)
        assert (config.warm_start, config.refine, config.multi_start) == (False, False, 2)
        assert service.experiment_config_to_dict(config)['beamforming']['warm_start'] is False
        assert service.experiment_config_from_dict(_minimal()).multi_start == 1

    def test_design_switch_must_be_boolean(self, service):
        data = _minimal()
        data['beamforming'] = {'refine': 'yes'}
        with pytest.raises(ConfigurationError, match='true or false'):
            service.experiment_config_from_dict(data)

    def test_not_an_object(self, service):
        with pytest.raises(ConfigurationError):
            service.experiment_config_from_dict([1, 2])


class TestGeometrySection:

    def test_frequency_instead_of_wavelength(self, service):
        data = _minimal()
        geometry = data['scenario']['geometry']
        del geometry['wavelength']
        geometry['frequency_hz'] = 5.8e9
        config = service.experiment_config_from_dict(data)
        assert config.scenario.geometry.wavelength == pytest.approx(SPEED_OF_LIGHT / 5.8e9)

    def test_wavelength_and_frequency_conflict(self, service):
        data = _minimal()
        data['scenario']['geometry']['frequency_hz'] = 5.8e9
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'scenario.geometry.wavelength'

    def test_neither_wavelength_nor_frequency(self, service):
        data = _minimal()
        del data['scenario']['geometry']['wavelength']
        with pytest.raises(ConfigurationError):
            service.experiment_config_from_dict(data)

    def test_preset(self, service):
        data = _minimal()
        data['scenario']['geometry'] = {'preset': 'lab_panel', 'tau': 3}
        geometry = service.experiment_config_from_dict(data).scenario.geometry
        assert (geometry.n_y, geometry.n_z, geometry.tau) == (32, 16, 3)

    def test_preset_rejects_dimensions(self, service):
        data = _minimal()
        data['scenario']['geometry'] = {'preset': 'lab_panel', 'n_y': 8}
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'scenario.geometry.n_y'

    def test_unknown_preset(self, service):
        data = _minimal()
        data['scenario']['geometry'] = {'preset': 'lab_b'}
        with pytest.raises(ConfigurationError) as excinfo:
            service.experiment_config_from_dict(data)
        assert excinfo.value.field_name == 'scenario.geometry.preset'


class TestLoadExperimentConfig:

    def test_load_from_file(self, service, tmp_path):
        path = tmp_path / 'experiment.json'
        path.write_text(json.dumps(_minimal()), encoding='utf-8')
        config = service.load_experiment_config(str(path))
        assert config.pilot_counts == [8, 16]
        assert service.config_path == str(path)

    def test_missing_file(self, service, tmp_path):
        missing = tmp_path / 'absent.json'
        with pytest.raises(ConfigurationError, match='could not be found') as excinfo:
            service.load_experiment_config(str(missing))
        assert excinfo.value.config_path == str(missing)

    def test_invalid_json(self, service, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"scenario": ', encoding='utf-8')
        with pytest.raises(ConfigurationError, match='Invalid JSON'):
            service.load_experiment_config(str(path))

    def test_errors_carry_the_file_path(self, service, tmp_path):
        data = _minimal()
        data['sweep']['pilot_counts'] = [0]
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps(data), encoding='utf-8')
        with pytest.raises(ConfigurationError) as excinfo:
            service.load_experiment_config(str(path))
        assert excinfo.value.config_path == str(path)


@pytest.mark.parametrize('name', ['sample_experiment.json', 'two_user_pattern.json'])
def test_shipped_configs_load(name):
    config = ConfigService().load_experiment_config(str(CONFIG_DIR / name))
    assert config.scenario.geometry.n_elements == 512
    assert config.scenario.n_users == 2
