#!/usr/bin/env python3
"""
Setup script for the RIS Beamforming Simulator

Kept for tooling that still calls setup.py directly; pyproject.toml holds the
same metadata.
"""

from setuptools import setup, find_packages


# Read version and metadata from main.py
def get_version():
    """Extract version from main.py"""
    with open('main.py', 'r', encoding='utf-8') as f:
        for line in f:
            if line.startswith('__version__'):
                return line.split('"')[1]
    return "1.0.0"


def get_long_description():
    """Read the README file for long description"""
    try:
        with open('README.md', 'r', encoding='utf-8') as f:
            return f.read()
    except FileNotFoundError:
        return DESCRIPTION


# Application metadata
DESCRIPTION = "Channel estimation and discrete-phase multi-user beamforming simulator for RIS"
VERSION = get_version()
LONG_DESCRIPTION = get_long_description()
AUTHOR = "RIS Beamforming Simulator Team"

# Requirements
INSTALL_REQUIRES = [
    'numpy>=1.22.0',
    'scipy>=1.8.0',
    'pandas>=1.5.0',
    'psutil>=5.9.0',
]

EXTRAS_REQUIRE = {
    'dev': [
        'pytest>=7.0.0',
        'pytest-cov>=4.0.0',
        'pytest-mock>=3.10.0',
        'black>=23.0.0',
        'isort>=5.12.0',
        'flake8>=6.0.0',
        'mypy>=1.0.0',
    ],
}

# Entry points
ENTRY_POINTS = {
    'console_scripts': [
        'ris-sim=controllers.cli_controller:main',
        'rbs=controllers.cli_controller:main',
    ],
}

# Classifiers
CLASSIFIERS = [
    'Development Status :: 4 - Beta',
    'Intended Audience :: Science/Research',
    'Intended Audience :: Developers',
    'License :: OSI Approved :: MIT License',
    'Operating System :: OS Independent',
    'Programming Language :: Python :: 3',
    'Programming Language :: Python :: 3.9',
    'Programming Language :: Python :: 3.10',
    'Programming Language :: Python :: 3.11',
    'Topic :: Scientific/Engineering',
    'Environment :: Console',
]

setup(
    name='ris-beamforming-sim',
    version=VERSION,
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    author=AUTHOR,
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    include_package_data=True,
    install_requires=INSTALL_REQUIRES,
    extras_require=EXTRAS_REQUIRE,
    entry_points=ENTRY_POINTS,
    classifiers=CLASSIFIERS,
    python_requires='>=3.9',
    keywords='ris beamforming compressed-sensing gamp wireless simulation',
    zip_safe=False,
)
