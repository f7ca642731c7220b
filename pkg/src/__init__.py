"""
RIS Beamforming Simulator

A simulation library and experiment CLI for reconfigurable intelligent surface
(RIS) aided multi-user links: angular-domain channel synthesis, EM-GAMP
estimation of cascaded channels from Rademacher sensing, and the QTLM
discrete-phase multi-user beamformer.
"""

__version__ = "1.0.0"
__author__ = "RIS Beamforming Simulator Team"
__description__ = "Channel estimation and discrete-phase multi-user beamforming simulator for RIS"
__license__ = "MIT"

# Package metadata
__all__ = [
    '__version__',
    '__author__',
    '__description__',
    '__license__',
]
