#!/usr/bin/env python3

from setuptools import setup, find_packages

setup(
    name='pharmonic',
    version='0.1.0',
    description='Discrete nonlinear potential theory on bounded-degree '
                'graphs',
    packages=find_packages(exclude=['tests']),
    python_requires='>=3.8',
    install_requires=[
        # Vectorized sweeps and the sparse warm start
        'numpy>=1.17',
        # brentq, minimize_scalar, spsolve
        'scipy>=1.4',
        # Edge lists, components, graph coloring
        'networkx>=2.4',
        # --config files
        'PyYAML',
        ],
    entry_points={
        'console_scripts': [
            'pharmonic = pharmonic.cmd:main'
        ],
    }
)
