# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Comparative gradient elimination (CGE)

Server sorts received gradients by Euclidean norm and returns vector
*sum* (not mean) of ``n - f`` gradients with smallest norms. Step size
absorbs the scale, so effective step of CGE is about ``n - f`` times
larger than one of CWTM with same schedule.
"""

import numpy

from .filter import FilterBase
from ..exceptions import FilterError


class CGEFilter(FilterBase):
    """ Sum of ``n - f`` gradients with smallest norms

        Ties are broken by ascending agent id.
        Gradients with NaN norm are sorted after all others.
    """
    class Meta:
        name = 'cge'

    def check(self, bundle):
        if bundle.f >= bundle.n:
            raise FilterError(
                "CGE requires f < n (n=%d, f=%d)" % (bundle.n, bundle.f))

    def select(self, bundle):
        """ Indices (0-based) of gradients kept by filter,
            in order of increasing norm
        """
        grads = bundle.gradients
        with numpy.errstate(over='ignore', invalid='ignore'):
            norms = numpy.linalg.norm(grads, axis=1)
        nan_mask = numpy.isnan(norms)
        order = numpy.lexsort((numpy.arange(bundle.n),
                               numpy.where(nan_mask, numpy.inf, norms),
                               nan_mask))
        return order[:bundle.n - bundle.f]

    def _aggregate(self, bundle):
        selected = self.select(bundle)
        return bundle.gradients[selected].sum(axis=0)
