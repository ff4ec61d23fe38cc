# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Closed-form resilience bounds of gradient-filters, estimation of
gradient dissimilarity coefficient and necessity counterexample.

Bounds are *sufficient* conditions. When they are inapplicable
(``alpha <= 0`` for CGE, ``lambda >= gamma / (mu sqrt(d))`` for CWTM)
filters may still converge close to honest minimizer; the bundled
linear regression instance is such a case for CGE.
"""

import collections
import logging
import math

import numpy
import six
from scipy.stats import qmc

from .costmodel import (HESSIAN_FACTOR,
                        QuadraticCost,
                        aggregate_minimizer,
                        curvature,
                        CurvatureCoefficients,
                        stack_costs)
from .exceptions import ValidationError
from .resilient import SubmittedCosts
from .utils import iter_subsets

__all__ = ('CgeBound',
           'CwtmBound',
           'cge_bound',
           'cwtm_bound',
           'estimate_lambda',
           'worst_case_curvature',
           'LabeledScenario',
           'NecessityScenario',
           'necessity_scenario',
           'DEFAULT_LAMBDA_SAMPLES')

logger = logging.getLogger(__name__)

DEFAULT_LAMBDA_SAMPLES = 10000

# corners of W are added to samples only up to this dimension
MAX_CORNER_DIM = 12

# points where both gradients are shorter than this are skipped
LAMBDA_NORM_FLOOR = 1e-12


@six.python_2_unicode_compatible
class CgeBound(object):
    """ Asymptotic resilience of CGE filter

        ``alpha = 1 - (f / n) (1 + 2 mu / gamma)``; when alpha > 0 CGE
        is asymptotically (f, D epsilon)-resilient with
        ``D = 4 mu f / (alpha gamma)``. Otherwise *D* and *bound* are None.
    """

    def __init__(self, n, f, mu, gamma, epsilon, alpha, D):
        self.n = n
        self.f = f
        self.mu = mu
        self.gamma = gamma
        self.epsilon = epsilon
        self.alpha = alpha
        self.D = D

    @property
    def applicable(self):
        return self.D is not None

    @property
    def bound(self):
        """ ``D * epsilon`` or None
        """
        return None if self.D is None else self.D * self.epsilon

    def as_dict(self):
        return {'alpha': self.alpha,
                'D': self.D,
                'D_eps': self.bound,
                'cge_applicable': self.applicable}

    def __str__(self):
        if self.applicable:
            return u"CgeBound(alpha=%.6g, D=%.6g)" % (self.alpha, self.D)
        return u"CgeBound(alpha=%.6g, inapplicable)" % self.alpha

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class CwtmBound(object):
    """ Asymptotic resilience of CWTM filter

        If ``lambda < gamma / (mu sqrt(d))`` CWTM is asymptotically
        (f, D' epsilon)-resilient with
        ``D' = 2 sqrt(d) n mu lambda / (gamma - sqrt(d) mu lambda)``.
    """

    def __init__(self, d, n, mu, gamma, lam, epsilon, D_prime):
        self.d = d
        self.n = n
        self.mu = mu
        self.gamma = gamma
        self.lam = lam
        self.epsilon = epsilon
        self.D_prime = D_prime

    @property
    def threshold(self):
        """ Largest admissible lambda (exclusive)
        """
        return self.gamma / (self.mu * math.sqrt(self.d))

    @property
    def applicable(self):
        return self.D_prime is not None

    @property
    def bound(self):
        """ ``D' * epsilon`` or None
        """
        return None if self.D_prime is None else self.D_prime * self.epsilon

    def as_dict(self):
        return {'lambda_hat': self.lam,
                'lambda_threshold': self.threshold,
                'D_prime': self.D_prime,
                'D_prime_eps': self.bound,
                'cwtm_applicable': self.applicable}

    def __str__(self):
        if self.applicable:
            return u"CwtmBound(lambda=%.6g, D'=%.6g)" % (self.lam,
                                                        self.D_prime)
        return u"CwtmBound(lambda=%.6g, inapplicable)" % self.lam

    def __repr__(self):
        return u"<%s>" % str(self)


def _check_coefficients(mu, gamma, epsilon):
    if not (gamma > 0 and mu >= gamma):
        raise ValidationError(
            "coefficients must satisfy mu >= gamma > 0 (mu=%r, gamma=%r)" %
            (mu, gamma))
    if not epsilon >= 0:
        raise ValidationError("epsilon must be non-negative, got %r" % (
            epsilon,))


def cge_bound(n, f, mu, gamma, epsilon):
    """ Resilience bound of CGE

        :rtype: CgeBound
        :raises ValidationError: unless ``n > 2f >= 0`` and
                                 ``mu >= gamma > 0``
    """
    if f < 0 or 2 * f >= n:
        raise ValidationError("CGE bound requires n > 2f >= 0 "
                              "(n=%r, f=%r)" % (n, f))
    _check_coefficients(mu, gamma, epsilon)
    alpha = 1.0 - (float(f) / n) * (1.0 + 2.0 * mu / gamma)
    D = 4.0 * mu * f / (alpha * gamma) if alpha > 0 else None
    if D is None:
        logger.info("CGE bound inapplicable: alpha=%.6g <= 0", alpha)
    return CgeBound(n, f, mu, gamma, epsilon, alpha, D)


def cwtm_bound(d, n, mu, gamma, lam, epsilon):
    """ Resilience bound of CWTM

        :rtype: CwtmBound
        :raises ValidationError: on invalid inputs
    """
    if d < 1 or n < 1:
        raise ValidationError("d and n must be positive (d=%r, n=%r)" % (
            d, n))
    _check_coefficients(mu, gamma, epsilon)
    if not lam >= 0:
        raise ValidationError("lambda must be non-negative, got %r" % (lam,))
    sqrt_d = math.sqrt(d)
    if lam < gamma / (mu * sqrt_d):
        D_prime = 2.0 * sqrt_d * n * mu * lam / (gamma - sqrt_d * mu * lam)
    else:
        D_prime = None
        logger.info("CWTM bound inapplicable: lambda=%.6g >= %.6g",
                    lam, gamma / (mu * sqrt_d))
    return CwtmBound(d, n, mu, gamma, lam, epsilon, D_prime)


def _sample_points(region, samples, seed):
    sampler = qmc.Halton(d=region.dimension, scramble=True, seed=seed)
    points = [qmc.scale(sampler.random(samples), region.lower, region.upper),
              region.center()[numpy.newaxis, :]]
    if region.dimension <= MAX_CORNER_DIM:
        points.append(region.corners())
    return numpy.vstack(points)


def _gradients_at(cost, points):
    # QuadraticCost.gradient for every row of points
    residuals = cost.responses[numpy.newaxis, :] - points.dot(cost.rows.T)
    return -HESSIAN_FACTOR * residuals.dot(cost.rows)


def estimate_lambda(costs, region, samples=DEFAULT_LAMBDA_SAMPLES, seed=0):
    """ Empirical gradient dissimilarity coefficient of honest costs

        Maximum over sampled points *x* of region and pairs (i, j) of
        ``||g_i(x) - g_j(x)|| / max(||g_i(x)||, ||g_j(x)||)``.
        Points are scrambled Halton sequence plus center and corners of
        region. Sampling cannot certify supremum, so result is a *lower*
        bound of true coefficient.

        :param list costs: honest quadratic costs
        :param BoxRegion region: region W
        :param int samples: number of quasi-random points
        :param int seed: scrambling seed
        :rtype: float
        :raises ValidationError: if less than 2 costs given
    """
    costs = list(costs)
    if len(costs) < 2:
        raise ValidationError("estimate_lambda requires at least 2 costs")
    stack_costs(costs)  # dimension check
    points = _sample_points(region, samples, seed)
    grads = [_gradients_at(c, points) for c in costs]
    norms = [numpy.linalg.norm(g, axis=1) for g in grads]

    best = 0.0
    for i, j in iter_subsets(range(len(costs)), 2):
        denom = numpy.maximum(norms[i], norms[j])
        mask = denom >= LAMBDA_NORM_FLOOR
        if not numpy.any(mask):
            continue
        ratio = (numpy.linalg.norm(grads[i][mask] - grads[j][mask], axis=1) /
                 denom[mask])
        best = max(best, float(ratio.max()))
    logger.debug("Empirical lambda over %d points: %.6g",
                 points.shape[0], best)
    return best


def worst_case_curvature(costs, f):
    """ Curvature coefficients valid for every possible honest set

        mu is maximum Lipschitz coefficient over all agents,
        gamma is minimum strong convexity over all sets of ``n - f``
        agents.

        :rtype: CurvatureCoefficients
        :raises RankDeficientError: if some set is not strongly convex
    """
    costs = list(costs)
    n = len(costs)
    per_set = [curvature(costs, subset)
               for subset in iter_subsets(range(1, n + 1), n - f)]
    return CurvatureCoefficients(max(c.mu for c in per_set),
                                 min(c.gamma for c in per_set))


LabeledScenario = collections.namedtuple(
    'LabeledScenario', ('submitted', 'honest_ids'))

NecessityScenario = collections.namedtuple(
    'NecessityScenario', ('scenario_A', 'scenario_B', 'x_S', 'x_BS'))


def necessity_scenario(epsilon, delta, f=1):
    """ Two executions server cannot tell apart

        Builds ``n = 2f + 1`` scalar costs ``(m_i - x)^2``. In scenario A
        honest agents are ``S = {1, ..., f + 1}``, in scenario B honest
        agents are ``{1} U {f + 2, ..., 2f + 1}``. Server receives same
        costs in both, but honest minimizers are ``2 epsilon + 2 delta``
        apart, so any deterministic output is at least
        ``epsilon + delta`` away from one of them.

        :rtype: NecessityScenario
        :raises ValidationError: unless ``epsilon >= 0``, ``delta > 0``
                                 and ``f >= 1``
    """
    if not (epsilon >= 0 and delta > 0):
        raise ValidationError("requires epsilon >= 0 and delta > 0")
    if f < 1:
        raise ValidationError("requires f >= 1")
    shift = (epsilon + delta) * (f + 1) / float(f)
    centers = [0.0] + [-shift] * f + [shift] * f
    costs = [QuadraticCost([1.0], m) for m in centers]
    submitted = SubmittedCosts(costs, f)

    honest_a = tuple(range(1, f + 2))
    honest_b = (1,) + tuple(range(f + 2, 2 * f + 2))
    x_s = float(aggregate_minimizer([costs[i - 1] for i in honest_a])[0])
    x_bs = float(aggregate_minimizer([costs[i - 1] for i in honest_b])[0])
    return NecessityScenario(LabeledScenario(submitted, honest_a),
                             LabeledScenario(submitted, honest_b),
                             x_s, x_bs)
