# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Simulation configuration

Config files are flat YAML mappings::

    n: 6
    f: 1
    faulty_agents: [1]
    fault_type: gradient_reverse
    fault_std: 200
    filter: cge
    eta_c: 1.5
    iterations: 500
    w_lower: -1000
    w_upper: 1000
    x0: [-0.0085, -0.5643]
    seed: 0
    dataset_path: regression6.csv

Relative ``dataset_path`` is resolved against directory of config file.
"""

import logging
import math
import os.path

import numpy
import six
import yaml

from ..costmodel import as_vector
from ..exceptions import (ConfigError,
                          ValidationError)
from ..filters import get_filter
from ..utils import AttrDict
from .faults import (FaultBehavior,
                     get_fault,
                     make_fault)

__all__ = ('BoxRegion',
           'StepSchedule',
           'SimConfig',
           'CONFIG_KEYS',
           'read_config_file',
           'load_config')

logger = logging.getLogger(__name__)

CONFIG_KEYS = ('n', 'f', 'faulty_agents', 'fault_type', 'fault_std',
               'filter', 'eta_c', 'iterations', 'w_lower', 'w_upper',
               'x0', 'seed', 'dataset_path')

CONFIG_DEFAULTS = {
    'faulty_agents': [],
    'fault_type': 'gradient_reverse',
    'fault_std': 200.0,
    'filter': 'cge',
    'eta_c': 1.5,
    'iterations': 500,
    'w_lower': -1000.0,
    'w_upper': 1000.0,
    'x0': None,
    'seed': 0,
    'dataset_path': None,
}


@six.python_2_unicode_compatible
class BoxRegion(object):
    """ Axis-aligned hypercube ``[lower, upper]``, the compact convex set
        estimates are projected onto

        :raises ValidationError: unless ``lower[k] < upper[k]`` for all k
    """
    __slots__ = ('_lower', '_upper')

    def __init__(self, lower, upper):
        lower = as_vector(lower, name='lower')
        upper = as_vector(upper, dim=lower.shape[0], name='upper')
        if not numpy.all(lower < upper):
            raise ValidationError(
                "region requires lower < upper in every coordinate")
        self._lower = lower
        self._upper = upper

    @classmethod
    def cube(cls, lower, upper, dimension):
        """ Region ``[lower, upper]^dimension``. *lower* and *upper* may be
            scalars (broadcast) or vectors
        """
        lower = numpy.broadcast_to(numpy.asarray(lower, dtype=float),
                                   (dimension,))
        upper = numpy.broadcast_to(numpy.asarray(upper, dtype=float),
                                   (dimension,))
        return cls(lower, upper)

    @property
    def lower(self):
        return self._lower

    @property
    def upper(self):
        return self._upper

    @property
    def dimension(self):
        return self._lower.shape[0]

    def corners(self):
        """ All ``2^d`` corners of region, as ``2^d x d`` matrix
        """
        d = self.dimension
        bits = (numpy.arange(2 ** d)[:, numpy.newaxis] >>
                numpy.arange(d)) & 1
        return numpy.where(bits, self._upper, self._lower)

    def center(self):
        return (self._lower + self._upper) / 2.0

    def __contains__(self, x):
        x = numpy.asarray(x, dtype=float)
        return bool(numpy.all(x >= self._lower) and
                    numpy.all(x <= self._upper))

    def __str__(self):
        return u"BoxRegion(%s, %s)" % (list(self._lower), list(self._upper))

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class StepSchedule(object):
    """ Diminishing step sizes ``eta_t = c / (t + 1)``

        ``sum(eta_t)`` diverges while ``sum(eta_t^2) = c^2 pi^2 / 6``.
    """
    __slots__ = ('_c',)

    def __init__(self, c=1.5):
        if not (isinstance(c, (int, float)) and c > 0 and
                math.isfinite(c)):
            raise ValidationError("step size constant must be positive, "
                                  "got %r" % (c,))
        self._c = float(c)

    @property
    def c(self):
        return self._c

    def eta(self, t):
        """ Step size at round *t* (t = 0, 1, ...)
        """
        return self._c / (t + 1)

    def squared_sum(self):
        """ ``sum(eta_t^2 for t >= 0)``
        """
        return self._c ** 2 * math.pi ** 2 / 6.0

    def __str__(self):
        return u"StepSchedule(%g / (t + 1))" % self._c

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class SimConfig(object):
    """ Full description of one simulation

        :param int n: number of agents
        :param int f: maximum number of faulty agents (``2f < n``)
        :param behaviors: list of n FaultBehavior, ``behaviors[i - 1]``
                          belongs to agent *i*
        :param str filter: name of gradient-filter
        :param StepSchedule schedule: step sizes
        :param BoxRegion region: projection region W
        :param x0: initial estimate, must lie in region
        :param int iterations: number of rounds
        :param int seed: master seed (0 <= seed < 2^64)
        :raises ConfigError: if any invariant is violated
    """

    def __init__(self, n, f, behaviors, filter='cge', schedule=None,
                 region=None, x0=None, iterations=500, seed=0):
        if int(n) != n or n < 1:
            raise ConfigError("n must be positive integer, got %r" % (n,))
        if int(f) != f or f < 0:
            raise ConfigError("f must be non-negative integer, got %r" % (f,))
        n, f = int(n), int(f)
        if 2 * f >= n:
            raise ConfigError(
                "f >= n/2 (n=%d, f=%d): no algorithm can be resilient "
                "when half of agents may be faulty" % (n, f))

        behaviors = tuple(behaviors)
        if len(behaviors) != n:
            raise ConfigError("expected %d behaviors, got %d" % (
                n, len(behaviors)))
        for behavior in behaviors:
            if not isinstance(behavior, FaultBehavior):
                raise ConfigError("not a FaultBehavior: %r" % (behavior,))
        faulty = sum(1 for b in behaviors if not b.honest)
        if faulty > f:
            raise ConfigError("%d faulty agents configured, but f=%d" % (
                faulty, f))

        get_filter(filter)  # raises FilterError for unknown names

        if schedule is None:
            schedule = StepSchedule()
        if region is None:
            raise ConfigError("region is required")
        try:
            x0 = (numpy.zeros(region.dimension) if x0 is None
                  else as_vector(x0, dim=region.dimension, name='x0'))
        except ValidationError as exc:
            raise ConfigError(str(exc))
        if x0 not in region:
            raise ConfigError("x0=%s is outside of region %s" % (
                list(x0), region))
        if int(iterations) != iterations or iterations < 0:
            raise ConfigError("iterations must be non-negative integer")
        if int(seed) != seed or not 0 <= seed < 2 ** 64:
            raise ConfigError("seed must be 64-bit unsigned integer")

        self.n = n
        self.f = f
        self.behaviors = behaviors
        self.filter = filter
        self.schedule = schedule
        self.region = region
        self.x0 = x0
        self.iterations = int(iterations)
        self.seed = int(seed)

    @property
    def dimension(self):
        return self.region.dimension

    @property
    def honest_ids(self):
        """ 1-based ids of honest agents
        """
        return tuple(i for i, b in enumerate(self.behaviors, 1) if b.honest)

    @property
    def faulty_ids(self):
        """ 1-based ids of faulty agents
        """
        return tuple(i for i, b in enumerate(self.behaviors, 1)
                     if not b.honest)

    @property
    def fault_name(self):
        """ Name of fault behavior used by faulty agents ('none' if all
            agents are honest)
        """
        names = sorted(set(self.behaviors[i - 1].name
                           for i in self.faulty_ids))
        return '+'.join(names) if names else 'none'

    @classmethod
    def from_mapping(cls, data, dimension):
        """ Build config from flat mapping (see module docs for keys)

            :param dict data: config values
            :param int dimension: problem dimension d
            :rtype: SimConfig
        """
        unknown = set(data) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError("unknown config keys: %s" % (
                ', '.join(sorted(unknown))))
        cfg = AttrDict(CONFIG_DEFAULTS)
        cfg.update(data)
        for key in ('n', 'f'):
            if key not in cfg:
                raise ConfigError("config key %r is required" % key)

        faulty = set(cfg.faulty_agents or [])
        for agent_id in faulty:
            if not 1 <= agent_id <= cfg.n:
                raise ConfigError("faulty agent id %r out of range 1..%d" % (
                    agent_id, cfg.n))
        params = {}
        if get_fault(cfg.fault_type).Meta.name == 'gaussian_random':
            params['std'] = cfg.fault_std
        behaviors = [make_fault(cfg.fault_type, **params)
                     if i in faulty else make_fault('honest')
                     for i in range(1, cfg.n + 1)]
        try:
            region = BoxRegion.cube(cfg.w_lower, cfg.w_upper, dimension)
            schedule = StepSchedule(cfg.eta_c)
        except (ValidationError, ValueError) as exc:
            raise ConfigError(str(exc))
        return cls(cfg.n, cfg.f, behaviors, filter=cfg.filter,
                   schedule=schedule, region=region, x0=cfg.x0,
                   iterations=cfg.iterations, seed=cfg.seed)

    def as_dict(self):
        return {
            'n': self.n,
            'f': self.f,
            'faulty_agents': list(self.faulty_ids),
            'fault_type': self.fault_name,
            'filter': self.filter,
            'eta_c': self.schedule.c,
            'iterations': self.iterations,
            'w_lower': list(map(float, self.region.lower)),
            'w_upper': list(map(float, self.region.upper)),
            'x0': list(map(float, self.x0)),
            'seed': self.seed,
        }

    def __str__(self):
        return u"SimConfig(n=%d, f=%d, filter=%s, fault=%s, T=%d)" % (
            self.n, self.f, self.filter, self.fault_name, self.iterations)

    def __repr__(self):
        return u"<%s>" % str(self)


def read_config_file(path):
    """ Read flat YAML config file into AttrDict

        Relative *dataset_path* is made absolute using directory of
        config file.

        :raises ConfigError: if file is not a flat mapping
    """
    with open(path, 'rt') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ConfigError("%s: cannot parse YAML: %s" % (path, exc))
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("%s: config must be a mapping" % path)
    data = AttrDict(data)
    dataset = data.get('dataset_path', None)
    if dataset and not os.path.isabs(dataset):
        data['dataset_path'] = os.path.join(
            os.path.dirname(os.path.abspath(path)), dataset)
    logger.debug("Config loaded from %s: %s", path, dict(data))
    return data


def load_config(path, dimension):
    """ Read config file and build SimConfig

        :return: tuple(SimConfig, dataset_path or None)
    """
    data = read_config_file(path)
    return SimConfig.from_mapping(data, dimension), data.get('dataset_path')
