"""
Setup script for the Contractive Inequality Lab
Install with: pip install -e .
"""

from setuptools import setup

from app.version import VERSION

setup(
    name='contractive-lab',
    version=VERSION,
    description='Numerical checks of contractive inequalities in Hardy spaces',
    packages=['app'],
    package_data={'app': ['config.yaml']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'openpyxl>=3.1.0',
        'pandas>=2.0.0',
        'pyyaml>=6.0',
    ],
    extras_require={
        'test': ['pytest>=7.0.0'],
    },
    entry_points={
        'console_scripts': [
            'contractive-lab=app.cli:main',
        ],
    },
)
