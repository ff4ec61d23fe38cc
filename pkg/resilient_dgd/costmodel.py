# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Cost functions of agents and helpers to work with their aggregates.

Every agent *i* holds a quadratic cost ``Q_i(x) = (B_i - A_i x)^2``.
For a set of agents *S* the aggregate cost ``Q_S = sum(Q_i, i in S)``
equals ``||B_S - A_S x||^2`` where ``A_S``, ``B_S`` are obtained by
stacking rows of agents from *S* in increasing order of agent ids.

Curvature coefficients are reported in *Hessian* convention: the Hessian
of ``Q_i`` is ``2 A_i^T A_i``, so Lipschitz coefficient of agent *i* is
``2 * max eig(A_i^T A_i)`` and strong convexity coefficient of set *S* is
``(2 / |S|) * min eig(A_S^T A_S)``. Dividing both by
:data:`HESSIAN_FACTOR` gives *unit* convention values. Ratio ``mu/gamma``
does not depend on convention, so ``alpha`` and ``D`` computed by
:mod:`resilient_dgd.theory` are the same in both.

Example::

    >>> from resilient_dgd.costmodel import QuadraticCost, aggregate_minimizer
    >>> costs = [QuadraticCost([1, 0], 1.0), QuadraticCost([0, 1], 1.0)]
    >>> aggregate_minimizer(costs)
    array([1., 1.])
"""

import collections
import logging

import numpy
import six

from .exceptions import (ValidationError,
                         RankDeficientError)

__all__ = (
    'HESSIAN_FACTOR',
    'as_vector',
    'CostFunction',
    'BlockQuadraticCost',
    'QuadraticCost',
    'value',
    'gradient',
    'stack_costs',
    'is_full_rank',
    'aggregate_minimizer',
    'lipschitz_coefficient',
    'strong_convexity_coefficient',
    'ConvexityResult',
    'CurvatureCoefficients',
    'curvature',
)

logger = logging.getLogger(__name__)

HESSIAN_FACTOR = 2.0

# A_S is full rank iff its smallest singular value is larger than
# RANK_RTOL times the largest one
RANK_RTOL = 1e-10

# Above this dimension minimizers are computed via QR factorization
NORMAL_EQUATIONS_MAX_DIM = 8


def as_vector(x, dim=None, name='x'):
    """ Convert *x* to read-only 1-d float array

        :param x: sequence of numbers or numpy array
        :param int dim: expected dimension. If None, not checked
        :param str name: name of argument, used in error messages
        :raises ValidationError: if *x* is not 1-d, has wrong dimension
                                 or contains NaN / Inf
        :return: new numpy array
        :rtype: numpy.ndarray
    """
    try:
        vec = numpy.array(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError("%s is not a vector: %s" % (name, exc))
    if vec.ndim == 0:
        vec = vec.reshape(1)
    if vec.ndim != 1 or vec.shape[0] == 0:
        raise ValidationError(
            "%s must be non-empty 1-d vector, got shape %s" % (
                name, vec.shape))
    if dim is not None and vec.shape[0] != dim:
        raise ValidationError(
            "dimension mismatch: %s has dimension %d, expected %d" % (
                name, vec.shape[0], dim))
    if not numpy.all(numpy.isfinite(vec)):
        raise ValidationError("%s has non-finite entries: %r" % (name, vec))
    vec.setflags(write=False)
    return vec


@six.python_2_unicode_compatible
class CostFunction(object):
    """ Base class for all cost functions

        Subclasses have to implement *dimension*, *value* and *gradient*.
    """

    @property
    def dimension(self):  # pragma: no cover
        """ Dimension *d* of argument vector
        """
        raise NotImplementedError

    def value(self, x):  # pragma: no cover
        """ Compute cost at point *x*
        """
        raise NotImplementedError

    def gradient(self, x):  # pragma: no cover
        """ Compute gradient of cost at point *x*
        """
        raise NotImplementedError

    def _check_point(self, x):
        return as_vector(x, dim=self.dimension)

    def __str__(self):
        return u"%s(d=%d)" % (self.__class__.__name__, self.dimension)

    def __repr__(self):
        return u"<%s>" % str(self)


class BlockQuadraticCost(CostFunction):
    """ Quadratic cost built from several rows: ``||b - A x||^2``

        Honest agents have one row each (see :class:`QuadraticCost`),
        but faulty agents of :mod:`resilient_dgd.resilient` may submit
        any function of this family.

        :param rows: matrix *A* (k x d)
        :param responses: vector *b* of length k
    """

    def __init__(self, rows, responses):
        rows = numpy.array(rows, dtype=float)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        if rows.ndim != 2 or rows.size == 0:
            raise ValidationError("rows must be non-empty 2-d matrix")
        responses = as_vector(responses, dim=rows.shape[0],
                              name='responses')
        if not numpy.all(numpy.isfinite(rows)):
            raise ValidationError("rows have non-finite entries")
        if not numpy.any(rows):
            raise ValidationError("rows must have at least one nonzero "
                                  "entry")
        rows.setflags(write=False)
        self._rows = rows
        self._responses = responses

    @property
    def rows(self):
        """ Matrix *A* of this cost (k x d)
        """
        return self._rows

    @property
    def responses(self):
        """ Vector *b* of this cost (length k)
        """
        return self._responses

    @property
    def dimension(self):
        return self._rows.shape[1]

    def residual(self, x):
        """ ``b - A x``
        """
        return self._responses - self._rows.dot(self._check_point(x))

    def value(self, x):
        res = self.residual(x)
        return float(res.dot(res))

    def gradient(self, x):
        return -HESSIAN_FACTOR * self._rows.T.dot(self.residual(x))

    def scaled(self, factor):
        """ Return copy of this cost with rows and responses multiplied by
            *factor* (cost itself scales by ``factor**2``)
        """
        return self.__class__(self._rows * factor,
                              self._responses * factor)

    def __eq__(self, other):
        if not isinstance(other, BlockQuadraticCost):
            return NotImplemented
        return (numpy.array_equal(self.rows, other.rows) and
                numpy.array_equal(self.responses, other.responses))

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    __hash__ = None


class QuadraticCost(BlockQuadraticCost):
    """ Cost of single agent in linear regression:
        ``Q_i(x) = (B_i - A_i x)^2``

        :param row: row vector *A_i* of length d
        :param float response: response *B_i*
    """

    def __init__(self, row, response):
        row = as_vector(row, name='row')
        super(QuadraticCost, self).__init__(row.reshape(1, -1), [response])

    def scaled(self, factor):
        return QuadraticCost(self.row * factor, self.response * factor)

    @property
    def row(self):
        """ Row *A_i*
        """
        return self.rows[0]

    @property
    def response(self):
        """ Response *B_i*
        """
        return float(self.responses[0])

    def __str__(self):
        return u"QuadraticCost(A=%s, B=%r)" % (list(self.row), self.response)


def value(cost, x):
    """ Value of *cost* at point *x*

        :raises ValidationError: on dimension mismatch
    """
    return cost.value(x)


def gradient(cost, x):
    """ Gradient of *cost* at point *x*

        For :class:`QuadraticCost` it is ``-2 A_i^T (B_i - A_i x)``

        :raises ValidationError: on dimension mismatch
    """
    return cost.gradient(x)


def stack_costs(costs):
    """ Stack rows and responses of quadratic costs

        :param list costs: list of BlockQuadraticCost instances
        :return: tuple(A_S, B_S)
        :raises ValidationError: if list is empty or dimensions differ
    """
    costs = list(costs)
    if not costs:
        raise ValidationError("at least one cost required")
    dims = set(c.dimension for c in costs)
    if len(dims) != 1:
        raise ValidationError("costs have different dimensions: %s" % dims)
    rows = numpy.vstack([c.rows for c in costs])
    responses = numpy.concatenate([c.responses for c in costs])
    return rows, responses


def is_full_rank(matrix):
    """ Check that *matrix* has full column rank

        Matrix is full rank iff its smallest singular value exceeds
        ``1e-10`` times the largest one.
    """
    matrix = numpy.asarray(matrix, dtype=float)
    nrows, ncols = matrix.shape
    if nrows < ncols:
        return False
    sv = numpy.linalg.svd(matrix, compute_uv=False)
    return bool(sv[0] > 0 and sv[-1] > RANK_RTOL * sv[0])


def aggregate_minimizer(costs):
    """ Unique minimizer of aggregate cost ``sum(Q_i, i in S)``

        :param list costs: costs of agents in set *S*
        :return: least squares solution of ``A_S x = B_S``
        :rtype: numpy.ndarray
        :raises RankDeficientError: if ``A_S`` is not full column rank
    """
    rows, responses = stack_costs(costs)
    if not is_full_rank(rows):
        raise RankDeficientError(
            "non-unique minimizer: stacked matrix of %d rows is not "
            "full column rank" % rows.shape[0])

    if rows.shape[1] <= NORMAL_EQUATIONS_MAX_DIM:
        res = numpy.linalg.solve(rows.T.dot(rows), rows.T.dot(responses))
    else:
        q, r = numpy.linalg.qr(rows)
        res = numpy.linalg.solve(r, q.T.dot(responses))
    res.setflags(write=False)
    return res


def lipschitz_coefficient(cost):
    """ Lipschitz coefficient of gradient of *cost*

        ``2 * max eig(A_i^T A_i)``, which is ``2 * ||A_i||^2`` for
        single-row cost
    """
    rows = cost.rows
    return HESSIAN_FACTOR * float(numpy.linalg.eigvalsh(rows.T.dot(rows))[-1])


ConvexityResult = collections.namedtuple(
    'ConvexityResult', ('gamma', 'strongly_convex'))


def strong_convexity_coefficient(costs):
    """ Strong convexity coefficient of average cost ``Q_S / |S|``

        :param list costs: costs of agents in *S*
        :return: ConvexityResult(gamma, strongly_convex).
                 gamma is ``(2 / |S|) * min eig(A_S^T A_S)``, or 0 with
                 ``strongly_convex=False`` when ``A_S`` is rank deficient
        :rtype: ConvexityResult
    """
    costs = list(costs)
    rows, _ = stack_costs(costs)
    if not is_full_rank(rows):
        return ConvexityResult(0.0, False)
    low = float(numpy.linalg.eigvalsh(rows.T.dot(rows))[0])
    return ConvexityResult(HESSIAN_FACTOR * low / len(costs), True)


@six.python_2_unicode_compatible
class CurvatureCoefficients(object):
    """ Pair of coefficients (mu, gamma) in Hessian convention

        :param float mu: Lipschitz-smoothness coefficient
        :param float gamma: strong-convexity coefficient
        :raises ValidationError: if coefficients are not positive
                                 or gamma > mu
    """
    __slots__ = ('_mu', '_gamma')

    def __init__(self, mu, gamma):
        if not (mu > 0 and gamma > 0):
            raise ValidationError(
                "mu and gamma must be positive (mu=%r, gamma=%r)" % (
                    mu, gamma))
        if gamma > mu * (1 + 1e-9):
            raise ValidationError(
                "gamma must not exceed mu (mu=%r, gamma=%r)" % (mu, gamma))
        self._mu = float(mu)
        self._gamma = float(gamma)

    @property
    def mu(self):
        """ Lipschitz coefficient (Hessian convention)
        """
        return self._mu

    @property
    def gamma(self):
        """ Strong convexity coefficient (Hessian convention)
        """
        return self._gamma

    @property
    def mu_unit(self):
        """ Lipschitz coefficient without Hessian factor
        """
        return self._mu / HESSIAN_FACTOR

    @property
    def gamma_unit(self):
        """ Strong convexity coefficient without Hessian factor
        """
        return self._gamma / HESSIAN_FACTOR

    @property
    def ratio(self):
        """ ``mu / gamma``, same in both conventions
        """
        return self._mu / self._gamma

    def as_dict(self):
        return {
            'mu': self.mu,
            'gamma': self.gamma,
            'mu_unit': self.mu_unit,
            'gamma_unit': self.gamma_unit,
        }

    def __str__(self):
        return u"CurvatureCoefficients(mu=%.6g, gamma=%.6g)" % (
            self.mu, self.gamma)

    def __repr__(self):
        return u"<%s>" % str(self)


def curvature(costs, subset=None):
    """ Extract curvature coefficients for set of agents

        mu is maximum of Lipschitz coefficients of agents in set,
        gamma is strong convexity coefficient of the set.

        :param list costs: list of costs, indexed by ``agent_id - 1``
        :param subset: 1-based ids of agents to use. All agents if None
        :rtype: CurvatureCoefficients
        :raises RankDeficientError: if set is not strongly convex
    """
    costs = list(costs)
    if subset is None:
        selected = costs
    else:
        selected = [costs[i - 1] for i in sorted(subset)]
    mu = max(lipschitz_coefficient(c) for c in selected)
    gamma, strongly_convex = strong_convexity_coefficient(selected)
    if not strongly_convex:
        raise RankDeficientError(
            "aggregate cost of agents %s is not strongly convex" % (
                subset,), subset=subset)
    return CurvatureCoefficients(mu, gamma)
