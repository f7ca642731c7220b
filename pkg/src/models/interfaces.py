"""
Base interfaces and abstract classes for the RIS Beamforming Simulator.

This module defines the core interfaces that provide extensibility points for
different channel estimators, beamformers, and result exporters.
"""

from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np

from .data_models import (
    AngularChannelEstimate, BeamformingProblem, QtlmState, ResultRecord, SensingPlan
)


class ChannelEstimatorInterface(ABC):
    """
    Abstract interface for angular-domain cascaded channel estimators.

    This interface allows different sparse recovery strategies while keeping
    the pipeline unchanged.
    """

    @abstractmethod
    def estimate(self, plan: SensingPlan, measurements: np.ndarray,
                 init_noise: float) -> AngularChannelEstimate:
        """
        Recover the angular channel from sensing measurements.

        Args:
            plan: Sensing plan that produced the measurements
            measurements: Slot measurements with the direct link removed
            init_noise: Starting noise variance in watts

        Returns:
            AngularChannelEstimate with the posterior mean and diagnostics

        Raises:
            EstimationError: If the inputs are inconsistent
        """
        pass


class BeamformerInterface(ABC):
    """
    Abstract interface for RIS codeword designers.
    """

    @abstractmethod
    def design(self, problem: BeamformingProblem,
               rng: np.random.Generator) -> Tuple[np.ndarray, Optional[QtlmState]]:
        """
        Compute a codeword over the problem alphabet.

        Args:
            problem: Channels, noise power and alphabet
            rng: Generator for any random initialization

        Returns:
            Tuple of (codeword, optional iteration trace)

        Raises:
            BeamformingError: If the problem does not suit this beamformer
        """
        pass


class ExportServiceInterface(ABC):
    """
    Abstract interface for result export implementations.
    """

    @abstractmethod
    def export_records(self, records: List[ResultRecord], file_path: str,
                       format_type: str = 'csv') -> bool:
        """
        Write result records to a file.

        Args:
            records: Records to export
            file_path: Destination path
            format_type: 'csv' or 'json'

        Returns:
            True if the export was successful

        Raises:
            ExportError: If the records cannot be written
        """
        pass

    @abstractmethod
    def validate_output_path(self, file_path: str) -> bool:
        """
        Validate that a file path is suitable for output.

        Args:
            file_path: Path to validate

        Returns:
            True if the path is valid for output
        """
        pass
