"""
Custom exceptions for the RIS Beamforming Simulator.

This module defines application-specific exceptions that carry an error code
and the context needed for logging and user feedback throughout the simulator.
"""


class RisSimulationError(Exception):
    """Base exception class for all RIS Beamforming Simulator errors."""

    def __init__(self, message: str, error_code: str = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class GeometryError(RisSimulationError):
    """Raised when an array geometry or phase alphabet is malformed."""

    def __init__(self, message: str, field_name: str = None, error_code: str = "GEOMETRY_ERROR"):
        super().__init__(message, error_code)
        self.field_name = field_name


class ChannelModelError(RisSimulationError):
    """Raised when channel synthesis receives inconsistent inputs."""

    def __init__(self, message: str, operation: str = None, error_code: str = "CHANNEL_ERROR"):
        super().__init__(message, error_code)
        self.operation = operation


class EstimationError(RisSimulationError):
    """Raised when channel estimation cannot be carried out."""

    def __init__(self, message: str, status: str = None, error_code: str = "ESTIMATION_ERROR"):
        super().__init__(message, error_code)
        self.status = status


class BeamformingError(RisSimulationError):
    """Raised when a beamforming operation receives an invalid problem."""

    def __init__(self, message: str, operation: str = None, error_code: str = "BEAMFORMING_ERROR"):
        super().__init__(message, error_code)
        self.operation = operation


class InstanceTooLargeError(BeamformingError):
    """Raised when exhaustive search is requested for too many codeword bits."""

    def __init__(self, message: str, bits: int = None):
        super().__init__(message, operation="exhaustive_oracle", error_code="INSTANCE_TOO_LARGE")
        self.bits = bits


class MetricError(RisSimulationError):
    """Raised when a link metric is evaluated on invalid measurements."""

    def __init__(self, message: str, metric: str = None, error_code: str = "METRIC_ERROR"):
        super().__init__(message, error_code)
        self.metric = metric


class ConfigurationError(RisSimulationError):
    """Raised when an experiment configuration cannot be loaded or is invalid."""

    def __init__(self, message: str, field_name: str = None, config_path: str = None,
                 error_code: str = "CONFIG_ERROR"):
        super().__init__(message, error_code)
        self.field_name = field_name
        self.config_path = config_path


class ExportError(RisSimulationError):
    """Raised when export operations fail."""

    def __init__(self, message: str, output_path: str = None, error_code: str = "EXPORT_ERROR"):
        super().__init__(message, error_code)
        self.output_path = output_path


class ValidationError(RisSimulationError):
    """Raised when input validation fails."""

    def __init__(self, message: str, field_name: str = None, error_code: str = "VALIDATION_ERROR"):
        super().__init__(message, error_code)
        self.field_name = field_name
