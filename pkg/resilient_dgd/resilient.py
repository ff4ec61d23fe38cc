# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Exhaustive (f, 2 epsilon)-resilient algorithm

Every agent sends its whole cost function to server. Then server:

1. for each set *T* of ``n - f`` received costs computes ``x_T``;
2. for each ``T_hat`` subset of *T* with ``|T_hat| = n - 2f`` (exactly)
   computes ``r_T = max ||x_T - x_T_hat||``;
3. outputs ``x_S`` for *S* minimizing ``r_T``. Ties are broken by
   lexicographically smallest set.

If honest costs have (2f, epsilon)-redundancy, output is within
``2 * epsilon`` of minimizer of every set of ``n - f`` honest agents.
Algorithm is deterministic and exponential in *n*, so number of agents
is limited (see :data:`resilient_dgd.redundancy.DEFAULT_MAX_AGENTS`).
"""

import collections
import logging

import numpy
import six

from .costmodel import BlockQuadraticCost
from .exceptions import ValidationError
from .redundancy import (MinimizerCache,
                         DEFAULT_MAX_AGENTS)
from .utils import iter_subsets

__all__ = ('SubmittedCosts',
           'ResilientResult',
           'resilient_solve')

logger = logging.getLogger(__name__)


@six.python_2_unicode_compatible
class SubmittedCosts(object):
    """ Cost functions as received by server

        Faulty agents may submit arbitrary quadratic functions, server
        does not know which ones are faulty.

        :param list costs: list of n costs, ``costs[i - 1]`` is sent by
                           agent *i*
        :param int f: maximum number of faulty agents
        :raises ValidationError: if ``n <= 2f`` or costs are not quadratic
    """
    __slots__ = ('_costs', '_f')

    def __init__(self, costs, f):
        costs = tuple(costs)
        if f < 0 or 2 * f >= len(costs):
            raise ValidationError(
                "resilient algorithm requires n > 2f (n=%d, f=%d)" % (
                    len(costs), f))
        for cost in costs:
            if not isinstance(cost, BlockQuadraticCost):
                raise ValidationError(
                    "only quadratic costs are supported, got %r" % (cost,))
        self._costs = costs
        self._f = int(f)

    @property
    def costs(self):
        return self._costs

    @property
    def f(self):
        return self._f

    @property
    def n(self):
        return len(self._costs)

    def replace(self, agent_id, cost):
        """ Return new SubmittedCosts where agent *agent_id* (1-based)
            submits *cost* instead
        """
        costs = list(self._costs)
        costs[agent_id - 1] = cost
        return SubmittedCosts(costs, self.f)

    def __eq__(self, other):
        if not isinstance(other, SubmittedCosts):
            return NotImplemented
        return self.f == other.f and self.costs == other.costs

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    __hash__ = None

    def __str__(self):
        return u"SubmittedCosts(n=%d, f=%d)" % (self.n, self.f)

    def __repr__(self):
        return u"<%s>" % str(self)


ResilientResult = collections.namedtuple(
    'ResilientResult', ('x_hat', 'chosen_set', 'r_values'))


def resilient_solve(submitted, force=False):
    """ Run exhaustive resilient algorithm on *submitted* costs

        :param SubmittedCosts submitted: costs received by server
        :param bool force: allow more than 20 agents
        :return: ResilientResult(x_hat, chosen_set, r_values), where
                 *r_values* maps each candidate set *T* to ``r_T``
        :rtype: ResilientResult
        :raises RankDeficientError: if some subset has no unique minimizer
    """
    n, f = submitted.n, submitted.f
    if n > DEFAULT_MAX_AGENTS and not force:
        raise ValidationError(
            "n=%d exceeds %d agents; use force to run anyway" % (
                n, DEFAULT_MAX_AGENTS))

    cache = MinimizerCache(submitted.costs)
    r_values = collections.OrderedDict()
    chosen, best = None, None
    for cand in iter_subsets(range(1, n + 1), n - f):
        x_cand = cache[cand]
        r_cand = max(float(numpy.linalg.norm(x_cand - cache[sub]))
                     for sub in iter_subsets(cand, n - 2 * f))
        r_values[cand] = r_cand
        # candidates come in lexicographic order, so strict comparison
        # keeps lexicographically smallest set on ties
        if best is None or r_cand < best:
            chosen, best = cand, r_cand

    logger.info("Resilient solve: n=%d, f=%d, chosen %s with r=%.6g",
                n, f, list(chosen), best)
    return ResilientResult(cache[chosen], chosen, r_values)
