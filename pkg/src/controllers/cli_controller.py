"""
Command-line controller for the RIS Beamforming Simulator.

Subcommands:
    sweep    run a configuration and write one record per sweep point and trial
    pattern  compute the radiation pattern of a stored or freshly designed codeword
    oracle   compare QTLM with exhaustive search on small random instances
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional, TextIO

from models.data_models import ExperimentConfig
from models.exceptions import ValidationError
from services.array_geometry import lab_panel_geometry
from services.config_service import ConfigService
from services.error_handler import ErrorHandler
from services.export_service import ExportService, load_codeword, save_codeword
from controllers.experiment_controller import (
    ExperimentController, design_true_csi_codeword, run_oracle, run_pattern, summarize_oracle
)

logger = logging.getLogger('RisBeamformingSim.cli')

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the sweep, pattern and oracle subcommands."""
    parser = argparse.ArgumentParser(
        prog='ris-sim',
        description='RIS multi-user channel estimation and discrete-phase beamforming simulator',
    )
    parser.add_argument('--log-file', help='Write the run log here instead of ~/.ris_beamforming_sim/logs')
    parser.add_argument('--verbose', '-v', action='store_true', help='Log per-iteration diagnostics')
    subparsers = parser.add_subparsers(dest='command', required=True)

    sweep = subparsers.add_parser('sweep', help='Run a configured sweep and write results')
    sweep.add_argument('--config', required=True, help='JSON experiment configuration')
    sweep.add_argument('--seed', type=int, help='Master seed (overrides the config)')
    sweep.add_argument('--out', help='Results path (overrides the config)')
    sweep.add_argument('--format', choices=['csv', 'json'], help='Results format (overrides the config)')
    sweep.add_argument('--threads', type=int, help='Worker threads (overrides the config)')
    sweep.add_argument('--timing', action='store_true', help='Add wall-clock and memory columns')
    sweep.add_argument('--save-codewords', metavar='DIR', help='Also write every codeword to DIR')
    sweep.add_argument('--quiet', '-q', action='store_true', help='Skip the summary report')

    pattern = subparsers.add_parser('pattern', help='Radiation pattern of a codeword')
    pattern.add_argument('--codeword', help='Codeword file of alphabet indices')
    pattern.add_argument('--config',
                         help='Geometry source; without --codeword, design a codeword with true CSI')
    pattern.add_argument('--tau', type=int, default=1,
                         help='Phase bits of the laboratory panel when --codeword is used without --config')
    pattern.add_argument('--seed', type=int, default=0, help='Scenario seed when designing')
    pattern.add_argument('--sigma2', type=float, help='Noise power for the design (defaults to the scenario)')
    pattern.add_argument('--incident-azimuth', type=float, default=0.0, help='Incidence azimuth in degrees')
    pattern.add_argument('--incident-elevation', type=float, default=90.0, help='Incidence elevation in degrees')
    pattern.add_argument('--floor-db', type=float, default=-6.0, help='Lowest lobe level reported')
    pattern.add_argument('--out', help='Write the pattern CSV here')
    pattern.add_argument('--save-codeword', help='Write the designed codeword here')

    oracle = subparsers.add_parser('oracle', help='QTLM against exhaustive search')
    oracle.add_argument('--instances', type=int, default=100)
    oracle.add_argument('--elements', type=int, default=10)
    oracle.add_argument('--users', type=int, default=2)
    oracle.add_argument('--tau', type=int, default=1)
    oracle.add_argument('--sigma2', type=float, default=1.0)
    oracle.add_argument('--multi-start', type=int, default=1)
    oracle.add_argument('--no-warm-start', dest='warm_start', action='store_false',
                        help='Start QTLM from the random codeword itself')
    oracle.add_argument('--no-refine', dest='refine', action='store_false',
                        help='Skip the element-wise refinement after QTLM')
    oracle.add_argument('--seed', type=int, default=0)
    oracle.add_argument('--threads', type=int, default=1)
    oracle.add_argument('--out', help='Write per-instance results here')
    oracle.add_argument('--format', choices=['csv', 'json'], default='csv')
    return parser


class CliController:
    """
    Runs one command-line invocation.

    Every failure is routed through the ErrorHandler and turned into exit code 1.
    """

    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.config_service = ConfigService()
        self.error_handler: Optional[ErrorHandler] = None

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Parse arguments and dispatch.

        Returns:
            Process exit code
        """
        args = build_parser().parse_args(argv)
        self.error_handler = ErrorHandler(args.log_file, args.verbose)
        try:
            if args.command == 'sweep':
                return self.run_sweep_command(args)
            if args.command == 'pattern':
                return self.run_pattern_command(args)
            return self.run_oracle_command(args)
        except Exception as e:
            self.error_handler.handle_error(e, context=f"{args.command} command", stream=self.stderr)
            return EXIT_ERROR

    def _apply_overrides(self, config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
        overrides = {}
        if args.seed is not None:
            overrides['seed'] = args.seed
        if args.out is not None:
            overrides['output_path'] = args.out
        if args.format is not None:
            overrides['output_format'] = args.format
        if args.threads is not None:
            overrides['threads'] = args.threads
        if args.timing:
            overrides['include_timing'] = True
        if not overrides:
            return config
        try:
            return replace(config, **overrides)
        except ValueError as e:
            raise ValidationError(str(e), field_name='arguments')

    def _progress(self, percent: float, message: str):
        logger.info("Sweep progress %5.1f%%: %s", percent, message)

    def run_sweep_command(self, args: argparse.Namespace) -> int:
        config = self._apply_overrides(self.config_service.load_experiment_config(args.config), args)
        controller = ExperimentController(config)
        records = controller.run_sweep(progress_callback=self._progress)
        path = controller.emit_results(records)
        print(f"Wrote {len(records)} records to {path}", file=self.stdout)
        if args.save_codewords:
            paths = controller.save_codewords(records, args.save_codewords)
            print(f"Wrote {len(paths)} codewords to {args.save_codewords}", file=self.stdout)
        if not args.quiet:
            summary_config = {
                'beamformer': config.beamformer,
                'noise_estimate': config.noise_estimate,
                'seed': config.seed,
                'output_path': path,
            }
            print(controller.export_service.generate_summary_report(records, summary_config), file=self.stdout)
        return EXIT_OK

    def run_pattern_command(self, args: argparse.Namespace) -> int:
        if not args.codeword and not args.config:
            raise ValidationError("pattern needs --codeword, --config or both", field_name='arguments')
        config = self.config_service.load_experiment_config(args.config) if args.config else None
        geometry = config.scenario.geometry if config is not None else lab_panel_geometry(args.tau)
        if args.codeword:
            indices = load_codeword(args.codeword)
            if len(indices) != geometry.n_elements:
                raise ValidationError(
                    f"The codeword has {len(indices)} entries "
                    f"but the panel has {geometry.n_elements} elements",
                    field_name='codeword',
                )
        else:
            sigma2 = args.sigma2 if args.sigma2 is not None else config.scenario.noise_power
            indices = design_true_csi_codeword(config.scenario, sigma2, config.multi_start,
                                               args.seed, config.t_max, config.warm_start, config.refine)
            if args.save_codeword:
                save_codeword(indices, args.save_codeword)

        report = run_pattern(geometry, indices, args.incident_azimuth, args.incident_elevation,
                             floor_db=args.floor_db)
        print(f"Lobes at or above {args.floor_db:g} dB:", file=self.stdout)
        for peak, width in zip(report.peaks, report.beamwidths):
            width_text = f"{width.width_deg:.2f} deg" if width.width_deg is not None else width.status.value
            print(f"  - azimuth {peak:+7.2f} deg, half-power beamwidth {width_text}", file=self.stdout)
        if args.out:
            ExportService().export_pattern(report.pattern, args.out)
            print(f"Wrote pattern to {args.out}", file=self.stdout)
        return EXIT_OK

    def run_oracle_command(self, args: argparse.Namespace) -> int:
        comparisons = run_oracle(
            n_instances=args.instances, n_elements=args.elements, n_users=args.users, tau=args.tau,
            sigma2=args.sigma2, seed=args.seed, multi_start=args.multi_start, threads=args.threads,
            warm_start=args.warm_start, refine=args.refine,
        )
        print(summarize_oracle(comparisons), file=self.stdout)
        if args.out:
            ExportService().export_oracle(comparisons, args.out, args.format)
            print(f"Wrote {len(comparisons)} comparisons to {args.out}", file=self.stdout)
        return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point."""
    return CliController().run(argv)
