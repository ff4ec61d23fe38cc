# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Behaviors of agents: what an agent sends to server instead of
(or as) its true gradient.

Behaviors are registered by name, same way as gradient-filters::

    >>> from resilient_dgd.simengine.faults import make_fault
    >>> make_fault('gaussian_random', std=200.0)
    <resilient_dgd.simengine.Fault:gaussian_random>
"""

import numpy
import six
from extend_me import ExtensibleByHashType

from ..exceptions import ConfigError

__all__ = ('get_fault',
           'get_fault_names',
           'make_fault',
           'agent_rng',
           'FaultBehavior')

FaultType = ExtensibleByHashType._('FaultBehavior', hashattr='name')

# names accepted in configs and CLI flags in addition to registered ones
FAULT_ALIASES = {
    'gradient-reverse': 'gradient_reverse',
    'reverse': 'gradient_reverse',
    'random': 'gaussian_random',
    'gaussian': 'gaussian_random',
}


def get_fault(name):
    """ Return fault behavior class specified by it's name

        :raises ConfigError: if there is no behavior with such name
    """
    name = FAULT_ALIASES.get(name, name)
    try:
        return FaultType.get_class(name)
    except ValueError:
        raise ConfigError("Unknown fault behavior %r. Available: %s" % (
            name, ', '.join(sorted(get_fault_names()))))


def get_fault_names():
    """ Returns list of fault behavior names registered in system
    """
    return FaultType.get_registered_names()


def make_fault(name, **params):
    """ Instantiate fault behavior *name* with *params*
    """
    return get_fault(name)(**params)


def agent_rng(seed, agent_id):
    """ Random generator of agent *agent_id* for simulation *seed*

        Counter-based Philox stream keyed by ``(seed, agent_id)``, so
        streams of different agents never depend on each other.
        *agent_id* is the original id of agent (not shifted by
        elimination of other agents).

        :rtype: numpy.random.Generator
    """
    ss = numpy.random.SeedSequence([int(seed), int(agent_id)])
    return numpy.random.Generator(numpy.random.Philox(ss))


@six.python_2_unicode_compatible
class FaultBehavior(six.with_metaclass(FaultType)):
    """ Base class for all agent behaviors

        Subclasses implement ``send(x, true_gradient, round_no, rng)``
        which returns vector sent to server.
    """

    #: True only for behavior of non-faulty agents
    honest = False

    def __init__(self, **params):
        if params:
            raise ConfigError("%s takes no parameters, got %s" % (
                self.Meta.name, sorted(params)))

    def send(self, x, true_gradient, round_no, rng):  # pragma: no cover
        """ Gradient sent to server at round *round_no*

            :param numpy.ndarray x: current estimate broadcast by server
            :param numpy.ndarray true_gradient: agent's true gradient at x
            :param int round_no: round number t
            :param numpy.random.Generator rng: agent's random stream
        """
        raise NotImplementedError

    @property
    def name(self):
        return self.Meta.name

    def params(self):
        """ Parameters of behavior (for reports)
        """
        return {}

    def __str__(self):
        return u"resilient_dgd.simengine.Fault:%s" % self.Meta.name

    def __repr__(self):
        return u"<%s>" % str(self)


class HonestBehavior(FaultBehavior):
    """ Sends true gradient
    """
    class Meta:
        name = 'honest'

    honest = True

    def send(self, x, true_gradient, round_no, rng):
        return true_gradient


class GradientReverseBehavior(FaultBehavior):
    """ Sends true gradient with reversed sign
    """
    class Meta:
        name = 'gradient_reverse'

    def send(self, x, true_gradient, round_no, rng):
        return -true_gradient


class GaussianRandomBehavior(FaultBehavior):
    """ Sends fresh i.i.d. Gaussian vector (mean 0) each round

        :param float std: standard deviation of every coordinate
    """
    class Meta:
        name = 'gaussian_random'

    def __init__(self, std=200.0):
        super(GaussianRandomBehavior, self).__init__()
        if not std > 0:
            raise ConfigError("gaussian std must be positive, got %r" % std)
        self.std = float(std)

    def send(self, x, true_gradient, round_no, rng):
        return rng.normal(0.0, self.std, size=true_gradient.shape[0])

    def params(self):
        return {'std': self.std}


class CustomBehavior(FaultBehavior):
    """ Delegates to user function
        ``fn(x, true_gradient, round_no, rng) -> vector``
    """
    class Meta:
        name = 'custom'

    def __init__(self, fn=None):
        super(CustomBehavior, self).__init__()
        if not callable(fn):
            raise ConfigError("custom behavior requires callable 'fn'")
        self.fn = fn

    def send(self, x, true_gradient, round_no, rng):
        return self.fn(x, true_gradient, round_no, rng)

    def params(self):
        return {'fn': getattr(self.fn, '__name__', repr(self.fn))}
