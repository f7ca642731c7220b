"""
Export service for generating and saving result files.

This module writes sweep records to CSV (one row per record, per-user columns
flattened) or JSON, saves and loads codeword index files, writes radiation
patterns, and produces the plain-text sweep summary.
"""

import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from models.data_models import OracleComparison, PatternSample, ResultRecord
from models.exceptions import ExportError, ValidationError
from models.interfaces import ExportServiceInterface

logger = logging.getLogger('RisBeamformingSim.export_service')

SIGNIFICANT_DIGITS = 12
FLOAT_FORMAT = f'%.{SIGNIFICANT_DIGITS}g'

RECORD_COLUMNS = [
    'pilot_count', 'tx_power_db', 'trial', 'seed', 'se_off', 'se_on', 'mean_nmse',
    'qtlm_iterations', 'noise_estimate_w', 'fallback_users',
]
USER_FIELDS = ['power_off_w', 'power_on_w', 'gain_db', 'nmse', 'gamp_status', 'gamp_iterations']
TIMING_COLUMNS = ['wall_clock_s', 'peak_memory_mb']


def schema_columns(n_users: int, include_timing: bool = False) -> List[str]:
    """
    CSV header for K users.

    Args:
        n_users: User count K
        include_timing: Append the wall-clock and memory columns

    Returns:
        Column names in output order
    """
    columns = list(RECORD_COLUMNS)
    for k in range(n_users):
        columns.extend(f'user{k}_{name}' for name in USER_FIELDS)
    if include_timing:
        columns.extend(TIMING_COLUMNS)
    return columns


def _round_significant(value: Any) -> Any:
    if isinstance(value, float):
        if not np.isfinite(value):
            return None
        return float(f'{value:.{SIGNIFICANT_DIGITS}g}')
    if isinstance(value, list):
        return [_round_significant(item) for item in value]
    if isinstance(value, dict):
        return {key: _round_significant(item) for key, item in value.items()}
    return value


def records_to_dataframe(records: Sequence[ResultRecord], include_timing: bool = False) -> pd.DataFrame:
    """Flatten records into one row each with per-user columns."""
    rows = []
    for record in records:
        row = {column: getattr(record, column) for column in RECORD_COLUMNS}
        for k in range(record.n_users):
            for name in USER_FIELDS:
                row[f'user{k}_{name}'] = getattr(record, name)[k]
        if include_timing:
            for column in TIMING_COLUMNS:
                row[column] = getattr(record, column)
        rows.append(row)
    return pd.DataFrame(rows, columns=schema_columns(records[0].n_users, include_timing))


def summarize_records(records: Sequence[ResultRecord]) -> pd.DataFrame:
    """Per sweep point medians of SE and gain and the mean NMSE across trials."""
    frame = pd.DataFrame({
        'pilot_count': [r.pilot_count for r in records],
        'tx_power_db': [r.tx_power_db for r in records],
        'se_off': [r.se_off for r in records],
        'se_on': [r.se_on for r in records],
        'mean_gain_db': [float(np.mean(r.gain_db)) for r in records],
        'mean_nmse': [np.nan if r.mean_nmse is None else r.mean_nmse for r in records],
        'fallback_users': [r.fallback_users for r in records],
    })
    return frame.groupby(['pilot_count', 'tx_power_db'], sort=False).agg(
        trials=('se_on', 'size'),
        median_se_off=('se_off', 'median'),
        median_se_on=('se_on', 'median'),
        median_gain_db=('mean_gain_db', 'median'),
        mean_nmse=('mean_nmse', 'mean'),
        fallbacks=('fallback_users', 'sum'),
    ).reset_index()


def save_codeword(indices: Sequence[int], file_path: str) -> None:
    """
    Save alphabet indices, as a JSON array for .json paths and one per line otherwise.

    Raises:
        ExportError: If the file cannot be written
    """
    path = Path(file_path)
    values = [int(i) for i in indices]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if path.suffix.lower() == '.json':
            path.write_text(json.dumps(values) + '\n', encoding='utf-8')
        else:
            path.write_text(''.join(f'{i}\n' for i in values), encoding='utf-8')
    except OSError as e:
        raise ExportError(f"Failed to save codeword: {str(e)}", output_path=str(path))


def load_codeword(file_path: str) -> np.ndarray:
    """
    Load alphabet indices from a JSON array or a one-index-per-line file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValidationError: If the content is not a list of non-negative integers
    """
    text = Path(file_path).read_text(encoding='utf-8').strip()
    try:
        if text.startswith('['):
            values = json.loads(text)
        else:
            values = [int(line) for line in text.splitlines() if line.strip()]
        indices = np.asarray(values, dtype=int)
    except (ValueError, TypeError) as e:
        raise ValidationError(f"Codeword file '{file_path}' is malformed: {str(e)}", field_name="codeword")
    if indices.ndim != 1 or indices.size == 0 or np.any(indices < 0):
        raise ValidationError(f"Codeword file '{file_path}' must hold non-negative integer indices",
                              field_name="codeword")
    return indices


class ExportService(ExportServiceInterface):
    """
    Service for exporting sweep results to files and generating reports.

    This service handles:
    - Exporting records to CSV and JSON with 12 significant digits
    - Validating file paths and write permissions
    - Writing radiation patterns
    - Generating summary reports with sweep statistics
    """

    def __init__(self, include_timing: bool = False):
        """
        Initialize the export service.

        Args:
            include_timing: Emit wall-clock and memory fields
        """
        self.supported_formats = ['csv', 'json']
        self.include_timing = include_timing

    def export_records(self, records: List[ResultRecord], file_path: str,
                       format_type: str = 'csv') -> bool:
        """
        Export records to the specified format.

        Args:
            records: Records to export, all with the same user count
            file_path: Destination path
            format_type: 'csv' or 'json'

        Returns:
            bool: True if export was successful

        Raises:
            ExportError: If inputs are invalid or the write fails
        """
        self._validate_export_inputs(records, file_path, format_type)
        self._ensure_directory_exists(file_path)
        try:
            if format_type == 'csv':
                self.export_to_csv(records, file_path)
            else:
                self.export_to_json(records, file_path)
        except OSError as e:
            raise ExportError(f"Failed to export {format_type.upper()} file: {str(e)}", output_path=file_path)
        logger.info("Wrote %d records to %s", len(records), file_path)
        return True

    def export_to_csv(self, records: Sequence[ResultRecord], file_path: str) -> None:
        """Write one row per record under the stable header."""
        data = records_to_dataframe(records, self.include_timing)
        data.to_csv(file_path, index=False, encoding='utf-8', float_format=FLOAT_FORMAT,
                    lineterminator='\n')

    def export_to_json(self, records: Sequence[ResultRecord], file_path: str) -> None:
        """Write a JSON array of record objects."""
        payload = [_round_significant(r.to_dict(self.include_timing)) for r in records]
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2)
            f.write('\n')

    def load_json_records(self, file_path: str) -> List[ResultRecord]:
        """
        Read records written by export_to_json.

        Raises:
            ExportError: If the file is not a JSON array of records
        """
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                payload = json.load(f)
            return [ResultRecord.from_dict(item) for item in payload]
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ExportError(f"Cannot read records: {str(e)}", output_path=file_path)

    def export_pattern(self, pattern: Sequence[PatternSample], file_path: str) -> bool:
        """Write a radiation pattern as azimuth_deg, gain_db rows."""
        if not pattern:
            raise ExportError("Cannot export an empty pattern", output_path=file_path)
        self.validate_output_path(file_path)
        self._ensure_directory_exists(file_path)
        data = pd.DataFrame({
            'azimuth_deg': [p.azimuth_deg for p in pattern],
            'gain_db': [p.gain_db for p in pattern],
        })
        try:
            data.to_csv(file_path, index=False, encoding='utf-8', float_format=FLOAT_FORMAT,
                        lineterminator='\n')
        except OSError as e:
            raise ExportError(f"Failed to export pattern: {str(e)}", output_path=file_path)
        return True

    def export_oracle(self, comparisons: Sequence[OracleComparison], file_path: str,
                      format_type: str = 'csv') -> bool:
        """Write QTLM-versus-oracle comparisons, one row per instance."""
        if not comparisons:
            raise ExportError("Cannot export an empty comparison list", output_path=file_path)
        if format_type not in self.supported_formats:
            raise ExportError(f"Unsupported format: {format_type}. Must be 'csv' or 'json'",
                              output_path=file_path)
        self.validate_output_path(file_path)
        data = pd.DataFrame({
            'instance': [c.instance for c in comparisons],
            'se_qtlm': [c.se_qtlm for c in comparisons],
            'se_oracle': [c.se_oracle for c in comparisons],
            'ratio': [c.ratio for c in comparisons],
            'qtlm_iterations': [c.qtlm_iterations for c in comparisons],
        })
        try:
            if format_type == 'csv':
                data.to_csv(file_path, index=False, encoding='utf-8', float_format=FLOAT_FORMAT,
                            lineterminator='\n')
            else:
                with open(file_path, 'w', encoding='utf-8') as f:
                    json.dump(_round_significant(data.to_dict(orient='records')), f, indent=2)
                    f.write('\n')
        except OSError as e:
            raise ExportError(f"Failed to export comparisons: {str(e)}", output_path=file_path)
        return True

    def generate_summary_report(self, records: Sequence[ResultRecord],
                                config: Optional[Dict[str, Any]] = None) -> str:
        """
        Generate a summary report with sweep statistics.

        Args:
            records: Sweep records
            config: Optional configuration details to include in the report

        Returns:
            str: Formatted summary report
        """
        report_lines = [
            "=" * 50,
            "RIS BEAMFORMING SWEEP SUMMARY",
            "=" * 50,
            "",
            f"Records: {len(records):,}",
        ]
        if records:
            report_lines.extend([
                f"Users: {records[0].n_users}",
                f"Fallback estimates: {sum(r.fallback_users for r in records)}",
                "",
            ])

        if config:
            report_lines.extend([
                "Configuration Details:",
                f"  - Beamformer: {config.get('beamformer', 'N/A')}",
                f"  - Noise estimate: {config.get('noise_estimate', 'N/A')}",
                f"  - Master seed: {config.get('seed', 'N/A')}",
                f"  - Output: {config.get('output_path', 'N/A')}",
                "",
            ])

        if records:
            report_lines.append("Per sweep point (medians over trials):")
            for row in summarize_records(records).itertuples(index=False):
                nmse_text = 'n/a' if np.isnan(row.mean_nmse) else f"{row.mean_nmse:.3e}"
                report_lines.append(
                    f"  - P={row.pilot_count:<5d} tx={row.tx_power_db:+6.1f} dB  "
                    f"SE off {row.median_se_off:7.3f}  on {row.median_se_on:7.3f} b/s/Hz  "
                    f"gain {row.median_gain_db:+7.2f} dB  NMSE {nmse_text}"
                )
            report_lines.append("")

        report_lines.extend([
            f"Report Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
            "=" * 50
        ])
        return "\n".join(report_lines)

    def validate_output_path(self, file_path: str) -> bool:
        """
        Validate that a file path is valid and writable.

        Args:
            file_path: The file path to validate

        Returns:
            bool: True if path is valid and writable

        Raises:
            ExportError: If the path is invalid or not writable
        """
        if not file_path or not isinstance(file_path, str):
            raise ExportError("File path must be a non-empty string", output_path=str(file_path))

        path = Path(file_path)
        parent_dir = path.parent
        if not parent_dir.exists():
            try:
                parent_dir.mkdir(parents=True, exist_ok=True)
            except OSError:
                raise ExportError(f"Cannot create directory: {parent_dir}", output_path=file_path)

        if not os.access(parent_dir, os.W_OK):
            raise ExportError(f"No write permission for directory: {parent_dir}", output_path=file_path)
        if path.exists() and not os.access(path, os.W_OK):
            raise ExportError(f"No write permission for file: {file_path}", output_path=file_path)
        return True

    def _validate_export_inputs(self, records: Sequence[ResultRecord], file_path: str,
                                format_type: str) -> None:
        """
        Validate inputs for export operations.

        Raises:
            ExportError: If inputs are invalid
        """
        if not records:
            raise ExportError("Cannot export an empty record list", output_path=file_path)
        if format_type not in self.supported_formats:
            raise ExportError(f"Unsupported format: {format_type}. Must be 'csv' or 'json'",
                              output_path=file_path)
        if len({r.n_users for r in records}) != 1:
            raise ExportError("All records must have the same user count", output_path=file_path)
        self.validate_output_path(file_path)

    def _ensure_directory_exists(self, file_path: str) -> None:
        """
        Ensure the directory for the given file path exists.

        Args:
            file_path: The file path whose directory should exist
        """
        directory = Path(file_path).parent
        directory.mkdir(parents=True, exist_ok=True)
