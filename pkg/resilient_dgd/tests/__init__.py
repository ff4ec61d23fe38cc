# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import os.path
import shutil
import tempfile
import unittest

import numpy
import six

from ..experiment import load_dataset
from ..utils import AttrDict

import logging
_logger = logging.getLogger(__name__)
_logger.setLevel(logging.INFO)


# Python 2/3 compatability
try:
    import unittest.mock as mock
except ImportError:
    import mock

__all__ = ('BaseTestCase', 'mock', 'DATA_DIR')

DATA_DIR = os.path.abspath(os.path.join(
    os.path.dirname(__file__), os.pardir, 'data'))


class BaseTestCase(unittest.TestCase):
    """ Gives access to bundled data files and vector assertions
    """
    def setUp(self):
        self.env = AttrDict({
            'data_dir': DATA_DIR,
            'dataset': os.path.join(DATA_DIR, 'regression6.csv'),
            'config_table1': os.path.join(DATA_DIR, 'table1.yaml'),
            'config_origin': os.path.join(DATA_DIR, 'table1_origin.yaml'),
            # honest minimizer and redundancy of bundled dataset
            'x_H': numpy.array([1.0780, 0.9825]),
            'epsilon': 0.0890,
        })

    def load_costs(self):
        return load_dataset(self.env.dataset)

    def make_tempdir(self):
        path = tempfile.mkdtemp(prefix='resilient-dgd-test-')
        self.addCleanup(shutil.rmtree, path, ignore_errors=True)
        return path

    def assertVectorAlmostEqual(self, first, second, tol=1e-12, msg=None):
        first = numpy.asarray(first, dtype=float)
        second = numpy.asarray(second, dtype=float)
        self.assertEqual(first.shape, second.shape, msg)
        diff = float(numpy.max(numpy.abs(first - second))) if first.size \
            else 0.0
        if not diff <= tol:
            self.fail(self._formatMessage(
                msg, "%s != %s (max diff %g > %g)" % (
                    list(first), list(second), diff, tol)))

    if six.PY3:
        def assertItemsEqual(self, *args, **kwargs):
            return self.assertCountEqual(*args, **kwargs)
