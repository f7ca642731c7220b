"""
Services package for the RIS Beamforming Simulator.

This package contains the simulation services (geometry, channel synthesis,
estimation, beamforming, link metrics) and the supporting configuration,
export, error-handling and monitoring services.
"""

from .array_geometry import (
    angular_transform, lab_panel_geometry, near_field_boundary, phase_alphabet, steering_vector,
    to_angular_domain, to_element_domain
)
from .channel_model import cascade, draw_scenario, received_signal
from .channel_estimator import EmGampEstimator, em_gamp_recover, estimate_direct_ls, nmse
from .beamforming_engine import MrtBeamformer, QtlmBeamformer, exhaustive_oracle, qtlm
from .link_metrics import radiation_pattern, rxmer, spectral_efficiency
from .config_service import ConfigService
from .export_service import ExportService
from .error_handler import ErrorHandler
from .performance_monitor import MemoryMonitor, SweepExecutor

__all__ = [
    # Geometry
    'angular_transform',
    'lab_panel_geometry',
    'near_field_boundary',
    'phase_alphabet',
    'steering_vector',
    'to_angular_domain',
    'to_element_domain',
    # Channel and estimation
    'cascade',
    'draw_scenario',
    'received_signal',
    'EmGampEstimator',
    'em_gamp_recover',
    'estimate_direct_ls',
    'nmse',
    # Beamforming and metrics
    'MrtBeamformer',
    'QtlmBeamformer',
    'exhaustive_oracle',
    'qtlm',
    'radiation_pattern',
    'rxmer',
    'spectral_efficiency',
    # Support services
    'ConfigService',
    'ExportService',
    'ErrorHandler',
    'MemoryMonitor',
    'SweepExecutor',
]
