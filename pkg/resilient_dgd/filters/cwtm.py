# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import numpy

from .filter import FilterBase
from ..exceptions import FilterError


class CWTMFilter(FilterBase):
    """ Coordinate-wise trimmed mean

        For each coordinate drop the *f* largest and *f* smallest values
        and average remaining ``n - 2f``. NaN values sort last,
        equal values keep agent id order.
    """
    class Meta:
        name = 'cwtm'

    def check(self, bundle):
        if bundle.n - 2 * bundle.f < 1:
            raise FilterError(
                "CWTM requires n > 2f (n=%d, f=%d)" % (bundle.n, bundle.f))

    def trimmed(self, bundle):
        """ Matrix of ``n - 2f`` middle values for each coordinate
        """
        grads = bundle.gradients
        order = numpy.argsort(grads, axis=0, kind='stable')
        ordered = numpy.take_along_axis(grads, order, axis=0)
        return ordered[bundle.f:bundle.n - bundle.f]

    def _aggregate(self, bundle):
        return self.trimmed(bundle).mean(axis=0)
