# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Synchronous server-based distributed gradient descent

In each round *t*:

- S1: server broadcasts estimate ``x^t``; every agent *i* replies with
  gradient ``g_i^t`` (true gradient for honest agents, anything for
  faulty ones);
- S2: server applies gradient-filter and updates estimate::

      x^{t+1} = [x^t - eta_t * GradFilter(g_1^t, ..., g_n^t)]_W

Agents' replies are collected in agent-id order, each agent draws from
own random stream, so trajectory depends only on config and costs.
"""

import collections
import csv
import io
import logging

import numpy
import six

from ..costmodel import aggregate_minimizer
from ..exceptions import (ConfigError,
                          SimulationError,
                          ValidationError)
from ..filters import (GradientBundle,
                       get_filter)
from ..utils import fmt_float
from .faults import agent_rng

__all__ = ('project_box',
           'phi',
           'RoundRecord',
           'Trajectory',
           'DGDState',
           'eliminate_agent',
           'DGDSimulation',
           'run_dgd')

logger = logging.getLogger(__name__)


def project_box(x, region):
    """ Euclidean projection of *x* onto box *region* (coordinate clamp)
    """
    return numpy.clip(numpy.asarray(x, dtype=float),
                      region.lower, region.upper)


def phi(x_t, x_ref, filter_output):
    """ ``<x_t - x_ref, filter_output>``

        :raises ValidationError: on dimension mismatch
    """
    x_t = numpy.asarray(x_t, dtype=float)
    x_ref = numpy.asarray(x_ref, dtype=float)
    out = numpy.asarray(filter_output, dtype=float)
    if x_t.ndim != 1 or not x_t.shape == x_ref.shape == out.shape:
        raise ValidationError(
            "dimension mismatch: x_t %s, x_ref %s, filter output %s" % (
                x_t.shape, x_ref.shape, out.shape))
    return float((x_t - x_ref).dot(out))


RoundRecord = collections.namedtuple(
    'RoundRecord', ('t', 'x', 'loss', 'distance', 'phi', 'filter_norm'))


@six.python_2_unicode_compatible
class Trajectory(object):
    """ Per-round record of simulation

        Round *t* record holds estimate ``x^t``, honest loss
        ``sum(Q_i(x^t), i in H)``, distance ``||x^t - x_H||``, ``phi_t``
        and norm of filter output computed at ``x^t``.
    """

    def __init__(self, dimension):
        self._dimension = dimension
        self._records = []

    @property
    def dimension(self):
        return self._dimension

    @property
    def records(self):
        return list(self._records)

    def append(self, record):
        self._records.append(record)

    def __len__(self):
        return len(self._records)

    def __getitem__(self, idx):
        return self._records[idx]

    def __iter__(self):
        return iter(self._records)

    @property
    def final(self):
        """ Record of last round
        """
        return self._records[-1]

    @property
    def estimates(self):
        """ ``(T + 1) x d`` matrix of estimates
        """
        return numpy.array([r.x for r in self._records])

    def column(self, name):
        """ Array of values of field *name* ('loss', 'distance', ...)
        """
        return numpy.array([getattr(r, name) for r in self._records])

    def header(self):
        return (['t'] +
                ['x_%d' % (k + 1) for k in range(self._dimension)] +
                ['loss', 'distance', 'phi', 'filter_norm'])

    def write_csv(self, stream):
        """ Write trajectory as CSV to file-like *stream*
        """
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(self.header())
        for r in self._records:
            writer.writerow([r.t] + [fmt_float(v) for v in r.x] +
                            [fmt_float(r.loss), fmt_float(r.distance),
                             fmt_float(r.phi), fmt_float(r.filter_norm)])

    def to_csv(self):
        """ Trajectory as CSV text
        """
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def settle_round(self, tol=1e-3):
        """ First round after which every distance stays within *tol*
            of final distance
        """
        dist = self.column('distance')
        away = numpy.nonzero(numpy.abs(dist - dist[-1]) > tol)[0]
        return int(away[-1] + 1) if away.size else 0

    def __str__(self):
        return u"Trajectory(rounds=%d, d=%d)" % (len(self), self._dimension)

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class DGDState(object):
    """ Agents currently taking part in simulation

        Agents are indexed ``1..n`` contiguously; ``origin_ids`` keeps
        their ids at start of simulation (random streams are keyed by
        these ids), ``eliminated`` holds original ids already removed.
    """
    __slots__ = ('origin_ids', 'costs', 'behaviors', 'f', 'eliminated')

    def __init__(self, origin_ids, costs, behaviors, f, eliminated=()):
        self.origin_ids = tuple(origin_ids)
        self.costs = tuple(costs)
        self.behaviors = tuple(behaviors)
        self.f = f
        self.eliminated = frozenset(eliminated)

    @classmethod
    def initial(cls, config, costs):
        return cls(range(1, config.n + 1), costs, config.behaviors, config.f)

    @property
    def n(self):
        return len(self.origin_ids)

    def __str__(self):
        return u"DGDState(n=%d, f=%d, agents=%s)" % (
            self.n, self.f, list(self.origin_ids))

    def __repr__(self):
        return u"<%s>" % str(self)


def eliminate_agent(state, agent_id):
    """ Remove agent with original id *agent_id* from *state*

        Server does this when agent fails to reply; n and f both
        decrease by one, remaining agents are reindexed preserving order
        but keep their original ids.

        :return: new DGDState
        :raises SimulationError: if agent was already eliminated,
                                 does not exist or f is zero
    """
    if agent_id in state.eliminated:
        raise SimulationError("agent %r is already eliminated" % (agent_id,))
    if agent_id not in state.origin_ids:
        raise SimulationError("no agent %r (agents %s)" % (
            agent_id, list(state.origin_ids)))
    if state.f < 1:
        raise SimulationError("cannot eliminate agent %d: f is already 0" %
                              agent_id)
    pos = state.origin_ids.index(agent_id)
    keep = [i for i in range(state.n) if i != pos]
    logger.info("Eliminating agent %d (current index %d)", agent_id, pos + 1)
    return DGDState([state.origin_ids[i] for i in keep],
                    [state.costs[i] for i in keep],
                    [state.behaviors[i] for i in keep],
                    state.f - 1,
                    state.eliminated | {agent_id})


class DGDSimulation(object):
    """ Step-by-step DGD simulation

        :param SimConfig config: simulation config
        :param list costs: true costs of n agents
        :raises ConfigError: if costs do not match config

        Usage::

            sim = DGDSimulation(config, costs)
            sim.run()
            sim.trajectory.final.distance
    """

    def __init__(self, config, costs):
        costs = list(costs)
        if len(costs) != config.n:
            raise ConfigError("config expects %d agents, got %d costs" % (
                config.n, len(costs)))
        for cost in costs:
            if cost.dimension != config.dimension:
                raise ConfigError(
                    "cost dimension %d does not match region dimension %d" %
                    (cost.dimension, config.dimension))
        self.config = config
        self.state = DGDState.initial(config, costs)
        self._filter = get_filter(config.filter)()
        self._rngs = {i: agent_rng(config.seed, i)
                      for i in range(1, config.n + 1)}
        self.reference = aggregate_minimizer(
            [costs[i - 1] for i in config.honest_ids])
        self._honest_costs = [costs[i - 1] for i in config.honest_ids]
        self.x = numpy.array(config.x0, dtype=float)
        self.t = 0
        self.trajectory = Trajectory(config.dimension)

    def collect_gradients(self):
        """ S1: gradients received from agents at current estimate
        """
        grads = []
        for origin, cost, behavior in zip(self.state.origin_ids,
                                          self.state.costs,
                                          self.state.behaviors):
            true_grad = cost.gradient(self.x)
            sent = numpy.asarray(
                behavior.send(self.x, true_grad, self.t, self._rngs[origin]),
                dtype=float)
            if sent.shape != true_grad.shape:
                raise SimulationError(
                    "agent %d sent vector of shape %s, expected %s" % (
                        origin, sent.shape, true_grad.shape))
            grads.append(sent)
        return GradientBundle(grads, self.state.f)

    def _observe(self):
        direction = self._filter(self.collect_gradients())
        loss = sum(c.value(self.x) for c in self._honest_costs)
        self.trajectory.append(RoundRecord(
            self.t,
            self.x.copy(),
            float(loss),
            float(numpy.linalg.norm(self.x - self.reference)),
            phi(self.x, self.reference, direction),
            float(numpy.linalg.norm(direction))))
        return direction

    def step(self):
        """ Execute one round: record state at ``x^t`` and move to
            ``x^{t+1}``

            :raises SimulationError: if filter output makes estimate
                                     non-finite (NaN survives projection)
        """
        direction = self._observe()
        eta = self.config.schedule.eta(self.t)
        x_next = project_box(self.x - eta * direction, self.config.region)
        if not numpy.all(numpy.isfinite(x_next)):
            raise SimulationError(
                "estimate became non-finite at round %d (filter %s "
                "output %s)" % (self.t, self.config.filter, list(direction)))
        self.x = x_next
        self.t += 1

    def eliminate(self, agent_id):
        """ Test hook: eliminate agent with original id *agent_id*
        """
        self.state = eliminate_agent(self.state, agent_id)

    def run(self):
        """ Run remaining rounds and record final estimate

            :rtype: Trajectory
        """
        logger.info("Simulation started: %s", self.config)
        while self.t < self.config.iterations:
            self.step()
        self._observe()
        final = self.trajectory.final
        logger.info("Simulation finished: x=%s, distance=%.6g",
                    list(final.x), final.distance)
        return self.trajectory


def run_dgd(config, costs):
    """ Run full simulation described by *config* on *costs*

        Same (config, costs) always give identical trajectory.

        :rtype: Trajectory
    """
    return DGDSimulation(config, costs).run()
