# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Measuring (2f, epsilon)-redundancy of set of agents' costs

Procedure:

1. for each set *S* of ``n - f`` agents compute minimizer ``x_S``;
2. for each ``S_hat`` subset of *S* with ``|S_hat| >= n - 2f`` compute
   ``x_S_hat`` and ``eps_S = max ||x_S - x_S_hat||``;
3. ``epsilon = max eps_S``.

All implemented costs have unique minimizers (full rank design), so the
Hausdorff distance between argmin sets collapses to distance between
points. Procedure solves ``C(n, f) * sum(C(n - f, k), k <= f)``
least squares problems, minimizers are memoized per subset.

Note that :func:`resilient_dgd.resilient.resilient_solve` uses subsets of
size *exactly* ``n - 2f``, while this module uses all sizes
``>= n - 2f``.
"""

import logging

import numpy
import six
from scipy.special import comb

from .costmodel import aggregate_minimizer
from .exceptions import (ValidationError,
                         RankDeficientError)
from .utils import (subset_key,
                    iter_subsets)

__all__ = ('point_set_distance',
           'hausdorff_distance',
           'enumeration_size',
           'RedundancyReport',
           'MinimizerCache',
           'measure_redundancy',
           'DEFAULT_MAX_AGENTS')

logger = logging.getLogger(__name__)

DEFAULT_MAX_AGENTS = 20


def _as_point_set(points, name):
    pts = numpy.array([numpy.asarray(p, dtype=float).ravel()
                       for p in points])
    if pts.shape[0] == 0:
        raise ValidationError("%s must be non-empty" % name)
    return pts


def point_set_distance(x, points):
    """ Euclidean distance from point *x* to finite set *points*

        :raises ValidationError: if *points* is empty
    """
    pts = _as_point_set(points, 'point set')
    x = numpy.asarray(x, dtype=float).ravel()
    return float(numpy.min(numpy.linalg.norm(pts - x, axis=1)))


def hausdorff_distance(first, second):
    """ Euclidean Hausdorff distance between two finite point sets

        ``max(sup dist(x, second) for x in first,
              sup dist(y, first) for y in second)``

        :raises ValidationError: if any of sets is empty
    """
    xs = _as_point_set(first, 'first set')
    ys = _as_point_set(second, 'second set')
    dists = numpy.linalg.norm(xs[:, numpy.newaxis, :] -
                              ys[numpy.newaxis, :, :], axis=2)
    return float(max(dists.min(axis=1).max(), dists.min(axis=0).max()))


def enumeration_size(n, f):
    """ Number of minimizer solves needed by :func:`measure_redundancy`
        (without memoization)
    """
    inner = sum(comb(n - f, k, exact=True) for k in range(f + 1))
    return comb(n, f, exact=True) * inner


class MinimizerCache(dict):
    """ Cache of aggregate minimizers keyed by sorted tuple of agent ids

        Automatically computes minimizer for subsets requested.

        :param list costs: costs indexed by ``agent_id - 1``
    """
    __slots__ = ('_costs', 'solves')

    def __init__(self, costs):
        super(MinimizerCache, self).__init__()
        self._costs = list(costs)
        self.solves = 0

    def __missing__(self, key):
        key = subset_key(key)
        self.solves += 1
        try:
            res = aggregate_minimizer([self._costs[i - 1] for i in key])
        except RankDeficientError as exc:
            raise RankDeficientError("subset %s: %s" % (list(key), exc),
                                     subset=key)
        self[key] = res
        return res

    def get_minimizer(self, ids):
        return self[subset_key(ids)]


@six.python_2_unicode_compatible
class RedundancyReport(object):
    """ Result of :func:`measure_redundancy`

        :param float epsilon: measured redundancy parameter
        :param tuple witness_pair: pair (S, S_hat) attaining epsilon
        :param dict per_superset: maps each S (``|S| = n - f``) to eps_S
        :param dict minimizers: maps subsets to their minimizers
    """

    def __init__(self, n, f, epsilon, witness_pair, per_superset,
                 minimizers):
        self.n = n
        self.f = f
        self.epsilon = epsilon
        self.witness_pair = witness_pair
        self.per_superset = per_superset
        self.minimizers = minimizers

    def as_dict(self):
        """ JSON-friendly representation
        """
        return {
            'n': self.n,
            'f': self.f,
            'epsilon': self.epsilon,
            'witness': {'S': list(self.witness_pair[0]),
                        'S_hat': list(self.witness_pair[1])},
            'per_superset': [
                {'S': list(s), 'epsilon_S': eps}
                for s, eps in sorted(self.per_superset.items())],
            'minimizers': [
                {'subset': list(s), 'x': list(map(float, x))}
                for s, x in sorted(self.minimizers.items())],
        }

    def __str__(self):
        return u"RedundancyReport(n=%d, f=%d, epsilon=%.6g)" % (
            self.n, self.f, self.epsilon)

    def __repr__(self):
        return u"<%s>" % str(self)


def measure_redundancy(costs, f, force=False,
                       max_agents=DEFAULT_MAX_AGENTS):
    """ Measure (2f, epsilon)-redundancy of *costs*

        :param list costs: costs of all n agents (agent ids are 1-based)
        :param int f: maximum number of faulty agents
        :param bool force: allow more than *max_agents* agents
        :rtype: RedundancyReport
        :raises ValidationError: if ``n <= 2f`` or n too large
        :raises RankDeficientError: if some subset has no unique minimizer
    """
    costs = list(costs)
    n = len(costs)
    if f < 0 or 2 * f >= n:
        raise ValidationError(
            "redundancy requires n > 2f (n=%d, f=%d)" % (n, f))
    if n > max_agents and not force:
        raise ValidationError(
            "n=%d exceeds %d agents, %d minimizer solves needed; "
            "use force to run anyway" % (n, max_agents,
                                         enumeration_size(n, f)))
    logger.info("Measuring redundancy: n=%d, f=%d, up to %d solves",
                n, f, enumeration_size(n, f))

    cache = MinimizerCache(costs)
    agents = range(1, n + 1)
    per_superset = {}
    best, best_pair = -1.0, None
    try:
        for sup in iter_subsets(agents, n - f):
            x_sup = cache[sup]
            eps_s, pair = 0.0, (sup, sup)
            for size in range(n - 2 * f, n - f + 1):
                for sub in iter_subsets(sup, size):
                    dist = float(numpy.linalg.norm(x_sup - cache[sub]))
                    if dist > eps_s or (dist == eps_s and
                                        (sup, sub) < pair):
                        eps_s, pair = dist, (sup, sub)
            per_superset[sup] = eps_s
            if eps_s > best or (eps_s == best and pair < best_pair):
                best, best_pair = eps_s, pair
    except RankDeficientError as exc:
        raise RankDeficientError(
            "redundancy undefined for non-unique minimizers: %s" % exc,
            subset=exc.subset)

    logger.info("Redundancy measured: epsilon=%.6g (%d solves)",
                best, cache.solves)
    return RedundancyReport(n, f, best, best_pair, per_superset, dict(cache))
