# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Gradient-filters applied by server to received gradients

Filter is selected by its name::

    >>> from resilient_dgd.filters import GradientBundle, apply_filter
    >>> apply_filter('cwtm', GradientBundle([[1], [2], [3], [10]], f=1))
    array([2.5])
"""

from . import (average,  # noqa
               cge,      # noqa
               cwtm)     # noqa
from .filter import (FilterBase,        # noqa
                     GradientBundle,    # noqa
                     get_filter,        # noqa
                     get_filter_names)  # noqa

__all__ = (
    'FilterBase',
    'GradientBundle',
    'get_filter',
    'get_filter_names',
    'apply_filter',
    'filter_average',
    'filter_cge',
    'filter_cwtm',
)


def apply_filter(name, bundle):
    """ Apply gradient-filter registered under *name* to *bundle*
    """
    return get_filter(name)()(bundle)


def filter_average(bundle):
    """ Coordinate-wise mean of all gradients
    """
    return apply_filter('average', bundle)


def filter_cge(bundle):
    """ Vector sum of ``n - f`` gradients with smallest norms
    """
    return apply_filter('cge', bundle)


def filter_cwtm(bundle):
    """ Coordinate-wise trimmed mean (drop f largest and f smallest)
    """
    return apply_filter('cwtm', bundle)
