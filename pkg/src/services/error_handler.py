"""
Error handling service for the RIS Beamforming Simulator.

This module provides centralized error handling for the command-line tools:
logging setup, categorization of simulator exceptions, and translation into
user-friendly messages with recovery suggestions.
"""

import logging
import sys
import traceback
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Dict, Optional, TextIO, Tuple

from models.exceptions import (
    BeamformingError, ChannelModelError, ConfigurationError, EstimationError,
    ExportError, GeometryError, InstanceTooLargeError, MetricError, RisSimulationError,
    ValidationError
)


class ErrorSeverity(Enum):
    """Error severity levels."""
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Error categories for better organization."""
    CONFIGURATION = "configuration"
    SIMULATION = "simulation"
    FILE_OPERATION = "file_operation"
    VALIDATION = "validation"
    EXPORT = "export"
    SYSTEM = "system"


class ErrorHandler:
    """
    Centralized error handling for the simulator CLI.

    Configures logging once per process, logs every handled exception with its
    error code and context, and returns a message suitable for the terminal.
    """

    def __init__(self, log_file_path: Optional[str] = None, verbose: bool = False):
        """
        Initialize the error handler.

        Args:
            log_file_path: Optional path for the log file. If None, uses the default location.
            verbose: Log at DEBUG instead of INFO
        """
        self.log_file_path: Optional[Path] = None
        self._setup_logging(log_file_path, verbose)
        self._error_messages = self._initialize_error_messages()
        self._recovery_suggestions = self._initialize_recovery_suggestions()

    def _setup_logging(self, log_file_path: Optional[str] = None, verbose: bool = False):
        """
        Setup logging configuration.

        Args:
            log_file_path: Optional custom log file path
            verbose: Enable DEBUG output
        """
        if log_file_path is None:
            try:
                log_dir = Path.home() / ".ris_beamforming_sim" / "logs"
            except Exception:
                log_dir = Path("logs")
            log_dir.mkdir(parents=True, exist_ok=True)
            log_file_path = log_dir / f"run_log_{datetime.now().strftime('%Y%m%d')}.log"
        else:
            log_file_path = Path(log_file_path)
            log_file_path.parent.mkdir(parents=True, exist_ok=True)

        logging.basicConfig(
            level=logging.DEBUG if verbose else logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(log_file_path, encoding='utf-8'),
                logging.StreamHandler(),
            ]
        )

        self.log_file_path = Path(log_file_path)
        self.logger = logging.getLogger('RisBeamformingSim')
        if verbose:
            self.logger.setLevel(logging.DEBUG)
        self.logger.info("Error handler initialized")

    def _initialize_error_messages(self) -> Dict[str, str]:
        """Initialize user-friendly error message templates."""
        return {
            # Configuration
            'config_not_found': "The configuration file '{path}' could not be found.",
            'config_invalid': "The configuration is invalid at '{field}': {details}",
            'config_parse': "The configuration file '{path}' is not valid JSON: {details}",

            # Simulation
            'geometry_error': "Invalid array geometry ({field}): {details}",
            'channel_error': "Channel model error during {operation}: {details}",
            'estimation_error': "Channel estimation failed: {details}",
            'beamforming_error': "Beamforming failed during {operation}: {details}",
            'instance_too_large': "The instance has {bits} bits, too many for exhaustive search. Use fewer elements or bits.",
            'metric_error': "Could not compute {metric}: {details}",

            # Files
            'file_not_found': "The file '{file_path}' could not be found. Please check the file path and try again.",
            'file_access_denied': "Access denied to file '{file_path}'. Please check file permissions.",
            'export_permission_denied': "Permission denied when trying to save to '{path}'.",
            'export_disk_full': "Not enough disk space to save the file to '{path}'.",

            # System
            'memory_error': "Not enough memory to run the simulation. Reduce the array size or the thread count.",
            'system_error': "A system error occurred: {details}",
        }

    def _initialize_recovery_suggestions(self) -> Dict[str, str]:
        """Initialize recovery suggestions for different error types."""
        return {
            'config': "• Compare the file with configs/sample_experiment.json\n• See docs/CONFIG_SCHEMA.md for every field",
            'file_not_found': "• Check if the file path is correct\n• Verify the file hasn't been moved or deleted",
            'file_access_denied': "• Check file permissions\n• Choose a different output location",
            'instance_too_large': "• Keep N * tau at or below 20 bits for the oracle",
            'memory_error': "• Lower --threads\n• Run fewer trials per invocation",
            'export': "• Choose a different output path\n• Check folder permissions",
        }

    def handle_error(self, error: Exception, context: str = "",
                     show_message: bool = True, stream: Optional[TextIO] = None) -> str:
        """
        Handle an error with logging and user feedback.

        Args:
            error: The exception that occurred
            context: Additional context about where the error occurred
            show_message: Whether to print the message and suggestions
            stream: Output stream, stderr by default

        Returns:
            str: User-friendly error message
        """
        try:
            self._log_error(error, context)
            _, severity = self._categorize_error(error)
            user_message = self._generate_user_message(error, context)
            if show_message:
                suggestions = self._get_recovery_suggestions(error)
                out = stream or sys.stderr
                print(f"{severity.value.upper()}: {user_message}", file=out)
                if suggestions:
                    print(f"\nSuggestions:\n{suggestions}", file=out)
            return user_message
        except Exception as handler_error:
            self.logger.critical(f"Error in error handler: {str(handler_error)}")
            return f"A critical error occurred: {str(error)}"

    def _log_error(self, error: Exception, context: str = ""):
        """
        Log error details for debugging.

        Args:
            error: The exception to log
            context: Additional context information
        """
        error_details = {
            'type': type(error).__name__,
            'message': str(error),
            'context': context,
        }
        for attribute in ('error_code', 'field_name', 'config_path', 'operation',
                          'metric', 'output_path', 'bits', 'status'):
            value = getattr(error, attribute, None)
            if value is not None:
                error_details[attribute] = value

        self.logger.error(f"Error occurred: {error_details}")
        self.logger.debug("".join(traceback.format_exception(type(error), error, error.__traceback__)))

    def _categorize_error(self, error: Exception) -> Tuple[ErrorCategory, ErrorSeverity]:
        """
        Categorize error by type and severity.

        Args:
            error: The exception to categorize

        Returns:
            Tuple of (category, severity)
        """
        if isinstance(error, ConfigurationError):
            return ErrorCategory.CONFIGURATION, ErrorSeverity.ERROR
        elif isinstance(error, ValidationError):
            return ErrorCategory.VALIDATION, ErrorSeverity.WARNING
        elif isinstance(error, ExportError):
            return ErrorCategory.EXPORT, ErrorSeverity.ERROR
        elif isinstance(error, InstanceTooLargeError):
            return ErrorCategory.VALIDATION, ErrorSeverity.WARNING
        elif isinstance(error, RisSimulationError):
            return ErrorCategory.SIMULATION, ErrorSeverity.ERROR
        elif isinstance(error, MemoryError):
            return ErrorCategory.SYSTEM, ErrorSeverity.CRITICAL
        elif isinstance(error, (FileNotFoundError, PermissionError)):
            return ErrorCategory.FILE_OPERATION, ErrorSeverity.ERROR
        else:
            return ErrorCategory.SYSTEM, ErrorSeverity.ERROR

    def _generate_user_message(self, error: Exception, context: str = "") -> str:
        """
        Generate user-friendly error message.

        Args:
            error: The exception
            context: Additional context

        Returns:
            str: User-friendly error message
        """
        details = getattr(error, 'message', str(error))
        error_message = details.lower()

        if isinstance(error, ConfigurationError):
            if 'could not be found' in error_message:
                return self._error_messages['config_not_found'].format(path=error.config_path)
            if 'json' in error_message:
                return self._error_messages['config_parse'].format(path=error.config_path, details=details)
            return self._error_messages['config_invalid'].format(
                field=error.field_name or 'configuration', details=details
            )
        elif isinstance(error, GeometryError):
            return self._error_messages['geometry_error'].format(field=error.field_name or 'geometry',
                                                                 details=details)
        elif isinstance(error, ChannelModelError):
            return self._error_messages['channel_error'].format(operation=error.operation or 'synthesis',
                                                                details=details)
        elif isinstance(error, EstimationError):
            return self._error_messages['estimation_error'].format(details=details)
        elif isinstance(error, InstanceTooLargeError):
            return self._error_messages['instance_too_large'].format(bits=error.bits)
        elif isinstance(error, BeamformingError):
            return self._error_messages['beamforming_error'].format(operation=error.operation or 'design',
                                                                    details=details)
        elif isinstance(error, MetricError):
            return self._error_messages['metric_error'].format(metric=error.metric or 'metric',
                                                               details=details)
        elif isinstance(error, ValidationError):
            field_name = getattr(error, 'field_name', None)
            if field_name:
                return f"Validation error in {field_name}: {details}"
            return f"Validation error: {details}"
        elif isinstance(error, ExportError):
            output_path = error.output_path or 'unknown'
            if 'permission' in error_message:
                return self._error_messages['export_permission_denied'].format(path=output_path)
            elif 'space' in error_message or 'disk full' in error_message:
                return self._error_messages['export_disk_full'].format(path=output_path)
            return f"Export error: {details}"
        elif isinstance(error, FileNotFoundError):
            return self._error_messages['file_not_found'].format(file_path=getattr(error, 'filename', 'unknown'))
        elif isinstance(error, PermissionError):
            return self._error_messages['file_access_denied'].format(file_path=getattr(error, 'filename', 'unknown'))
        elif isinstance(error, MemoryError):
            return self._error_messages['memory_error']
        else:
            if context:
                return f"{context}: {details}"
            return f"An error occurred: {details}"

    def _get_recovery_suggestions(self, error: Exception) -> str:
        """
        Get recovery suggestions for the error.

        Args:
            error: The exception

        Returns:
            str: Recovery suggestions, empty when none apply
        """
        if isinstance(error, ConfigurationError):
            return self._recovery_suggestions['config']
        elif isinstance(error, InstanceTooLargeError):
            return self._recovery_suggestions['instance_too_large']
        elif isinstance(error, ExportError):
            return self._recovery_suggestions['export']
        elif isinstance(error, FileNotFoundError):
            return self._recovery_suggestions['file_not_found']
        elif isinstance(error, PermissionError):
            return self._recovery_suggestions['file_access_denied']
        elif isinstance(error, MemoryError):
            return self._recovery_suggestions['memory_error']
        return ""

    def get_log_file_path(self) -> str:
        """
        Get the current log file path.

        Returns:
            str: Path to the log file
        """
        if self.log_file_path is None:
            return "No log file configured"
        return str(self.log_file_path)
