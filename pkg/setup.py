#!/usr/bin/env python

# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################

import os.path
from setuptools import setup

# load version info
version_file = os.path.join(os.path.dirname(__file__),
                            'resilient_dgd',
                            'version.py')
requirements_file = os.path.join(os.path.dirname(__file__),
                                 'requirements.txt')
test_requirements_file = os.path.join(os.path.dirname(__file__),
                                      'requirements-test.txt')
readme_file = os.path.join(os.path.dirname(__file__), 'README.rst')

with open(version_file, 'rb') as f:
    exec(compile(f.read(), version_file, 'exec'))

with open(requirements_file, 'rt') as f:
    requirements = f.readlines()

with open(test_requirements_file, 'rt') as f:
    test_requirements = f.readlines()


setup(
    name='resilient_dgd',
    version=version,  # noqa
    description='Approximate Byzantine fault-tolerant distributed '
                'optimization: gradient-filters, redundancy and '
                'DGD simulation',
    long_description=open(readme_file).read(),
    packages=[
        'resilient_dgd',
        'resilient_dgd.filters',
        'resilient_dgd.simengine',
        'resilient_dgd.tests',
    ],
    package_data={
        'resilient_dgd': ['data/*.csv', 'data/*.yaml'],
    },
    license="MPL 2.0",
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Mozilla Public License 2.0 (MPL 2.0)',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: Implementation :: CPython',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: System :: Distributed Computing',
    ],
    keywords=[
        'byzantine', 'fault-tolerance', 'distributed-optimization',
        'gradient-descent', 'cge', 'cwtm', 'redundancy'],
    python_requires='>=3.7',
    install_requires=requirements,
    tests_require=test_requirements,
    test_suite='resilient_dgd.tests.all',
    entry_points={
        'console_scripts': [
            'resilient-dgd=resilient_dgd.cli:main',
        ],
    },
)
