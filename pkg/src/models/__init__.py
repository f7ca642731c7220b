# Models package - Core data models and structures

from .data_models import (
    RisGeometry,
    PhaseAlphabet,
    PathSet,
    ChannelRealization,
    TransmitterDescriptor,
    UserDescriptor,
    ScenarioConfig,
    SensingPlan,
    GampOptions,
    AngularChannelEstimate,
    BeamformingProblem,
    QuadraticForm,
    QtlmState,
    PatternSample,
    BeamwidthResult,
    RxmerResult,
    SweepPoint,
    ExperimentConfig,
    ResultRecord,
    PatternReport,
    OracleComparison,
    EstimationStatus,
    MeasurementStatus,
    QtlmStopReason,
)
from .interfaces import (
    ChannelEstimatorInterface,
    BeamformerInterface,
    ExportServiceInterface,
)
from .exceptions import (
    RisSimulationError,
    GeometryError,
    ChannelModelError,
    EstimationError,
    BeamformingError,
    InstanceTooLargeError,
    MetricError,
    ConfigurationError,
    ExportError,
    ValidationError,
)

__all__ = [
    # Data models
    'RisGeometry',
    'PhaseAlphabet',
    'PathSet',
    'ChannelRealization',
    'TransmitterDescriptor',
    'UserDescriptor',
    'ScenarioConfig',
    'SensingPlan',
    'GampOptions',
    'AngularChannelEstimate',
    'BeamformingProblem',
    'QuadraticForm',
    'QtlmState',
    'PatternSample',
    'BeamwidthResult',
    'RxmerResult',
    'SweepPoint',
    'ExperimentConfig',
    'ResultRecord',
    'PatternReport',
    'OracleComparison',
    # Status enums
    'EstimationStatus',
    'MeasurementStatus',
    'QtlmStopReason',
    # Interfaces
    'ChannelEstimatorInterface',
    'BeamformerInterface',
    'ExportServiceInterface',
    # Exceptions
    'RisSimulationError',
    'GeometryError',
    'ChannelModelError',
    'EstimationError',
    'BeamformingError',
    'InstanceTooLargeError',
    'MetricError',
    'ConfigurationError',
    'ExportError',
    'ValidationError',
]
