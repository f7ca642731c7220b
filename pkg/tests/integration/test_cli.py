"""
Tests for the ris-sim command line.
"""

import inspect
import io
import json

import numpy as np
import pandas as pd
import pytest

from controllers.cli_controller import EXIT_ERROR, EXIT_OK, CliController, build_parser, main
from controllers.experiment_controller import run_oracle
from services.export_service import load_codeword, save_codeword


def _write_config(tmp_path, **sweep):
    config = {
        'scenario': {
            'geometry': {'n_y': 4, 'n_z': 4, 'd_y': 0.5, 'd_z': 0.5, 'wavelength': 1.0},
            'users': [{'azimuth_deg': -28.0, 'direct_power': 0.5},
                      {'azimuth_deg': 21.0, 'direct_power': 0.5}],
            'noise_power': 0.1,
        },
        'sweep': {'pilot_counts': [4, 8], 'tx_power_db': [0.0], 'trials': 2, 'seed': 9, **sweep},
        'beamforming': {'t_max': 10},
        'evaluation': {'frame_length': 32},
        'output': {'path': str(tmp_path / 'from_config.csv')},
    }
    path = tmp_path / 'experiment.json'
    path.write_text(json.dumps(config), encoding='utf-8')
    return str(path)


@pytest.fixture
def cli():
    return CliController(stdout=io.StringIO(), stderr=io.StringIO())


def _run(cli, tmp_path, *argv):
    return cli.run(['--log-file', str(tmp_path / 'run.log'), *argv])


class TestSweepCommand:

    def test_writes_config_output(self, cli, tmp_path):
        code = _run(cli, tmp_path, 'sweep', '--config', _write_config(tmp_path))
        assert code == EXIT_OK
        assert len(pd.read_csv(tmp_path / 'from_config.csv')) == 4
        output = cli.stdout.getvalue()
        assert 'Wrote 4 records' in output
        assert 'RIS BEAMFORMING SWEEP SUMMARY' in output
        assert (tmp_path / 'run.log').exists()

    def test_overrides(self, cli, tmp_path):
        out = tmp_path / 'override.json'
        code = _run(cli, tmp_path, 'sweep', '--config', _write_config(tmp_path), '--out', str(out),
                    '--format', 'json', '--seed', '77', '--threads', '2', '--timing', '--quiet')
        assert code == EXIT_OK
        payload = json.loads(out.read_text(encoding='utf-8'))
        assert len(payload) == 4
        assert 'wall_clock_s' in payload[0]
        assert 'SUMMARY' not in cli.stdout.getvalue()

    def test_seed_override_changes_results(self, cli, tmp_path):
        config = _write_config(tmp_path)
        _run(cli, tmp_path, 'sweep', '--config', config, '--out', str(tmp_path / 'a.csv'), '-q')
        _run(cli, tmp_path, 'sweep', '--config', config, '--out', str(tmp_path / 'b.csv'),
             '--seed', '10', '-q')
        first = pd.read_csv(tmp_path / 'a.csv')
        second = pd.read_csv(tmp_path / 'b.csv')
        assert not first['seed'].equals(second['seed'])

    def test_save_codewords(self, cli, tmp_path):
        code = _run(cli, tmp_path, 'sweep', '--config', _write_config(tmp_path),
                    '--save-codewords', str(tmp_path / 'codewords'), '-q')
        assert code == EXIT_OK
        assert len(list((tmp_path / 'codewords').glob('codeword_*.json'))) == 4

    def test_missing_config(self, cli, tmp_path):
        code = _run(cli, tmp_path, 'sweep', '--config', str(tmp_path / 'absent.json'))
        assert code == EXIT_ERROR
        assert 'could not be found' in cli.stderr.getvalue()

    def test_invalid_override(self, cli, tmp_path):
        code = _run(cli, tmp_path, 'sweep', '--config', _write_config(tmp_path), '--threads', '0')
        assert code == EXIT_ERROR
        assert 'threads' in cli.stderr.getvalue()


class TestPatternCommand:

    def test_stored_codeword_on_the_laboratory_panel(self, cli, tmp_path):
        codeword = tmp_path / 'broadside.txt'
        save_codeword(np.zeros(512, dtype=int), str(codeword))
        out = tmp_path / 'pattern.csv'
        code = _run(cli, tmp_path, 'pattern', '--codeword', str(codeword), '--out', str(out))
        assert code == EXIT_OK
        assert 'azimuth   +0.00 deg' in cli.stdout.getvalue()
        pattern = pd.read_csv(out)
        assert len(pattern) == 1801
        assert pattern['gain_db'].max() == 0.0

    def test_wrong_codeword_length(self, cli, tmp_path):
        codeword = tmp_path / 'short.txt'
        save_codeword([0, 1, 0], str(codeword))
        assert _run(cli, tmp_path, 'pattern', '--codeword', str(codeword)) == EXIT_ERROR
        assert 'codeword' in cli.stderr.getvalue()

    def test_designed_codeword(self, cli, tmp_path):
        saved = tmp_path / 'designed.json'
        code = _run(cli, tmp_path, 'pattern', '--config', _write_config(tmp_path), '--seed', '2',
                    '--save-codeword', str(saved))
        assert code == EXIT_OK
        indices = load_codeword(str(saved))
        assert indices.shape == (16,)
        assert 'Lobes at or above -6 dB' in cli.stdout.getvalue()

    def test_needs_a_source(self, cli, tmp_path):
        assert _run(cli, tmp_path, 'pattern') == EXIT_ERROR
        assert '--codeword, --config or both' in cli.stderr.getvalue()

    def test_sweep_codeword_on_its_own_geometry(self, cli, tmp_path):
        config = _write_config(tmp_path)
        _run(cli, tmp_path, 'sweep', '--config', config, '--save-codewords', str(tmp_path / 'cw'), '-q')
        saved = sorted((tmp_path / 'cw').glob('codeword_*.json'))[0]

        assert _run(cli, tmp_path, 'pattern', '--codeword', str(saved)) == EXIT_ERROR
        assert 'panel has 512 elements' in cli.stderr.getvalue()

        out = tmp_path / 'pattern.csv'
        code = _run(cli, tmp_path, 'pattern', '--codeword', str(saved), '--config', config, '--out', str(out))
        assert code == EXIT_OK
        assert 'Lobes at or above -6 dB' in cli.stdout.getvalue()
        assert pd.read_csv(out)['gain_db'].max() == 0.0


class TestOracleCommand:

    def test_oracle_defaults(self):
        args = build_parser().parse_args(['oracle'])
        assert args.multi_start == 1
        assert args.sigma2 == 1.0
        assert args.warm_start and args.refine
        defaults = inspect.signature(run_oracle).parameters
        assert defaults['multi_start'].default == 1
        assert defaults['sigma2'].default == 1.0

    def test_small_run(self, cli, tmp_path):
        out = tmp_path / 'oracle.csv'
        code = _run(cli, tmp_path, 'oracle', '--instances', '3', '--elements', '6', '--out', str(out))
        assert code == EXIT_OK
        assert 'QTLM VS EXHAUSTIVE SEARCH' in cli.stdout.getvalue()
        frame = pd.read_csv(out)
        assert frame['instance'].tolist() == [0, 1, 2]
        assert (frame['ratio'] <= 1.0 + 1e-9).all()

    def test_instance_too_large(self, cli, tmp_path):
        code = _run(cli, tmp_path, 'oracle', '--instances', '1', '--elements', '30', '--users', '1')
        assert code == EXIT_ERROR
        assert '30 bits' in cli.stderr.getvalue()

    def test_main_entry_point(self, tmp_path, capsys):
        code = main(['--log-file', str(tmp_path / 'main.log'), 'oracle', '--instances', '2',
                     '--elements', '4'])
        assert code == EXIT_OK
        assert 'Instances: 2' in capsys.readouterr().out

    def test_handler_receives_unexpected_errors(self, cli, tmp_path, mocker):
        mocker.patch('controllers.cli_controller.run_oracle', side_effect=RuntimeError('worker crashed'))
        code = _run(cli, tmp_path, 'oracle', '--instances', '2')
        assert code == EXIT_ERROR
        assert 'oracle command: worker crashed' in cli.stderr.getvalue()


def test_subcommand_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
