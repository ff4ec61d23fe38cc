# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import logging

import numpy
import six
from extend_me import ExtensibleByHashType

from ..exceptions import FilterError

__all__ = ('get_filter',
           'get_filter_names',
           'GradientBundle',
           'FilterBase')

logger = logging.getLogger(__name__)

FilterType = ExtensibleByHashType._('GradientFilter', hashattr='name')


def get_filter(name):
    """ Return gradient-filter class specified by it's name

        :raises FilterError: if there is no filter with such name
    """
    try:
        return FilterType.get_class(name)
    except ValueError:
        raise FilterError(
            "Unknown gradient-filter %r. Available: %s" % (
                name, ', '.join(sorted(get_filter_names()))))


def get_filter_names():
    """ Returns list of gradient-filter names registered in system
    """
    return FilterType.get_registered_names()


@six.python_2_unicode_compatible
class GradientBundle(object):
    """ Gradients received by server in one round

        Gradients are stored as ``n x d`` matrix, row ``i - 1`` holds
        gradient of agent *i*. Non-finite entries are allowed, faulty
        agents may send anything.

        :param gradients: sequence of n vectors of same dimension
        :param int f: maximum number of faulty agents
        :raises FilterError: if bundle is empty, dimensions differ
                             or f is negative
    """
    __slots__ = ('_gradients', '_f')

    def __init__(self, gradients, f=0):
        try:
            grads = numpy.array(gradients, dtype=float)
        except ValueError as exc:
            raise FilterError("gradients must share dimension: %s" % exc)
        if grads.ndim != 2 or grads.shape[0] == 0 or grads.shape[1] == 0:
            raise FilterError("empty bundle or bad shape %s" % (
                grads.shape,))
        if int(f) != f or f < 0:
            raise FilterError("f must be non-negative integer, got %r" % f)
        grads.setflags(write=False)
        self._gradients = grads
        self._f = int(f)

    @property
    def gradients(self):
        """ ``n x d`` matrix of received gradients
        """
        return self._gradients

    @property
    def f(self):
        return self._f

    @property
    def n(self):
        return self._gradients.shape[0]

    @property
    def dimension(self):
        return self._gradients.shape[1]

    @property
    def honest_majority(self):
        """ True if ``2f < n``
        """
        return 2 * self.f < self.n

    def __len__(self):
        return self.n

    def __str__(self):
        return u"GradientBundle(n=%d, d=%d, f=%d)" % (
            self.n, self.dimension, self.f)

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class FilterBase(six.with_metaclass(FilterType)):
    """ Base class for all gradient-filters

        Subclasses define ``Meta.name`` to register themselves and
        implement ``_aggregate``. Preconditions are checked in ``check``.

        Example::

            class MyFilter(FilterBase):
                class Meta:
                    name = 'my-filter'

                def _aggregate(self, bundle):
                    return bundle.gradients[0]
    """

    def check(self, bundle):
        """ Check filter preconditions for *bundle*

            :raises FilterError: if preconditions are not satisfied
        """
        pass

    def _aggregate(self, bundle):  # pragma: no cover
        raise NotImplementedError

    def __call__(self, bundle):
        """ Apply filter to *bundle*

            :param GradientBundle bundle: received gradients
            :return: update direction
            :rtype: numpy.ndarray
        """
        if not isinstance(bundle, GradientBundle):
            raise FilterError("GradientBundle expected, got %r" % (bundle,))
        self.check(bundle)
        return self._aggregate(bundle)

    @property
    def name(self):
        return self.Meta.name

    def __str__(self):
        return u"resilient_dgd.filters.Filter:%s" % self.Meta.name

    def __repr__(self):
        return u"<%s>" % str(self)
