#!/usr/bin/env python3
"""
RIS Beamforming Simulator - Main Entry Point

Run this file (or the installed `ris-sim` command) with a subcommand:

    python main.py sweep --config configs/sample_experiment.json
    python main.py pattern --config configs/two_user_pattern.json
    python main.py oracle --instances 100
"""

import os
import sys

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# Application metadata
__version__ = "1.0.0"
__author__ = "RIS Beamforming Simulator Team"
__description__ = "Channel estimation and discrete-phase multi-user beamforming simulator for RIS"
__license__ = "MIT"


def check_dependencies():
    """Check if all required dependencies are available."""
    missing_deps = []

    for module in ('numpy', 'scipy', 'pandas', 'psutil'):
        try:
            __import__(module)
        except ImportError:
            missing_deps.append(module)

    if missing_deps:
        print(f"ERROR: Missing required dependencies: {', '.join(missing_deps)}", file=sys.stderr)
        print(f"Please install them using:\npip install {' '.join(missing_deps)}", file=sys.stderr)
        return False

    return True


def main(argv=None):
    """Main entry point for the application."""
    if not check_dependencies():
        sys.exit(1)

    from controllers.cli_controller import main as cli_main
    sys.exit(cli_main(argv))


if __name__ == "__main__":
    main()
