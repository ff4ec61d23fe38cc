# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import numpy

from . import BaseTestCase
from ..exceptions import FilterError
from ..filters import (GradientBundle,
                       FilterBase,
                       apply_filter,
                       filter_average,
                       filter_cge,
                       filter_cwtm,
                       get_filter,
                       get_filter_names)


def naive_cge(gradients, f):
    """ Sort-and-sum oracle: (norm, id) order, sum first n - f
    """
    n = len(gradients)
    norms = [float(numpy.sqrt((g * g).sum())) for g in gradients]
    order = sorted(range(n), key=lambda i: (norms[i], i))
    return order[:n - f]


def naive_cwtm(gradients, f):
    """ Trim oracle: per coordinate sorted values without f lowest and
        f highest
    """
    n, d = len(gradients), len(gradients[0])
    columns = []
    for k in range(d):
        values = sorted(float(g[k]) for g in gradients)
        columns.append(values[f:n - f])
    return numpy.array(columns).T


class Test_00_GradientBundle(BaseTestCase):

    def test_00_properties(self):
        bundle = GradientBundle([[1, 2], [3, 4], [5, 6]], f=1)
        self.assertEqual(bundle.n, 3)
        self.assertEqual(len(bundle), 3)
        self.assertEqual(bundle.dimension, 2)
        self.assertEqual(bundle.f, 1)
        self.assertTrue(bundle.honest_majority)
        self.assertFalse(GradientBundle([[1], [2]], f=1).honest_majority)
        self.assertIn('GradientBundle', repr(bundle))

    def test_01_read_only(self):
        bundle = GradientBundle([[1, 2], [3, 4]])
        with self.assertRaises(ValueError):
            bundle.gradients[0, 0] = 7

    def test_02_errors(self):
        with self.assertRaises(FilterError):
            GradientBundle([])
        with self.assertRaises(FilterError):
            GradientBundle([[1, 2], [3]])
        with self.assertRaises(FilterError):
            GradientBundle([[1, 2]], f=-1)

    def test_03_nan_allowed(self):
        bundle = GradientBundle([[numpy.nan, 1], [1, 1]])
        self.assertTrue(numpy.isnan(bundle.gradients[0, 0]))


class Test_01_Registry(BaseTestCase):

    def test_00_names(self):
        names = get_filter_names()
        for name in ('average', 'cge', 'cwtm'):
            self.assertIn(name, names)
        self.assertNotIn('median', names)

    def test_01_unknown(self):
        with self.assertRaises(FilterError):
            get_filter('krum')
        with self.assertRaises(FilterError):
            apply_filter('krum', GradientBundle([[1]]))

    def test_02_filter_requires_bundle(self):
        with self.assertRaises(FilterError):
            get_filter('cge')()([[1, 2]])

    def test_03_register_new_filter(self):
        class FirstGradientFilter(FilterBase):
            class Meta:
                name = 'test-first-gradient'

            def _aggregate(self, bundle):
                return bundle.gradients[0]

        self.assertIn('test-first-gradient', get_filter_names())
        res = apply_filter('test-first-gradient',
                           GradientBundle([[5, 6], [1, 1]]))
        self.assertVectorAlmostEqual(res, [5, 6])
        self.assertEqual(get_filter('test-first-gradient')().name,
                         'test-first-gradient')


class Test_02_Average(BaseTestCase):

    def test_00_mean(self):
        res = filter_average(GradientBundle([[1, 0], [3, 0]]))
        self.assertVectorAlmostEqual(res, [2, 0])

    def test_01_consensus(self):
        g = [0.3, -1.7, 2.0]
        res = filter_average(GradientBundle([g] * 4, f=1))
        self.assertVectorAlmostEqual(res, g, tol=1e-15)

    def test_02_sum_oracle(self):
        rng = numpy.random.default_rng(1)
        grads = rng.standard_normal((3, 4))
        expected = (grads[0] + grads[1] + grads[2]) / 3.0
        self.assertVectorAlmostEqual(
            filter_average(GradientBundle(grads)), expected)


class Test_03_CGE(BaseTestCase):

    def test_00_equal_gradients(self):
        res = filter_cge(GradientBundle([[1, 0]] * 3, f=1))
        self.assertVectorAlmostEqual(res, [2, 0])

    def test_01_drop_largest_norm(self):
        res = filter_cge(GradientBundle([[0, 0], [1, 0], [3, 4]], f=1))
        self.assertVectorAlmostEqual(res, [1, 0])

    def test_02_f_zero_is_scaled_average(self):
        rng = numpy.random.default_rng(2)
        bundle = GradientBundle(rng.standard_normal((5, 3)), f=0)
        self.assertVectorAlmostEqual(filter_cge(bundle),
                                     5 * filter_average(bundle), tol=1e-12)

    def test_03_precondition(self):
        with self.assertRaises(FilterError):
            filter_cge(GradientBundle([[1], [2]], f=2))

    def test_04_tie_break_by_agent_id(self):
        bundle = GradientBundle([[0, 1], [1, 0], [-1, 0]], f=1)
        self.assertEqual(list(get_filter('cge')().select(bundle)), [0, 1])
        self.assertVectorAlmostEqual(filter_cge(bundle), [1, 1])

    def test_05_non_finite_sorted_last(self):
        bundle = GradientBundle([[numpy.nan, 0], [1, 0], [2, 0],
                                 [numpy.inf, 0]], f=2)
        self.assertVectorAlmostEqual(filter_cge(bundle), [3, 0])
        bundle = GradientBundle([[numpy.inf, 0], [numpy.nan, 1], [1, 0]],
                                f=1)
        # inf norm goes before nan norm
        self.assertEqual(list(get_filter('cge')().select(bundle)), [2, 0])

    def test_06_norm_bound(self):
        rng = numpy.random.default_rng(3)
        cge = get_filter('cge')()
        for _ in range(100):
            n = int(rng.integers(2, 10))
            f = int(rng.integers(0, n))
            bundle = GradientBundle(rng.standard_normal((n, 3)) * 10, f=f)
            selected = cge.select(bundle)
            max_norm = numpy.linalg.norm(bundle.gradients[selected],
                                         axis=1).max()
            self.assertLessEqual(numpy.linalg.norm(cge(bundle)),
                                 (n - f) * max_norm * (1 + 1e-12))

    def test_07_permutation_invariance(self):
        rng = numpy.random.default_rng(4)
        grads = rng.standard_normal((7, 3))
        perm = rng.permutation(7)
        self.assertVectorAlmostEqual(
            filter_cge(GradientBundle(grads, f=2)),
            filter_cge(GradientBundle(grads[perm], f=2)), tol=1e-12)

    def test_08_oracle(self):
        rng = numpy.random.default_rng(2020)
        cge = get_filter('cge')()
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            f = int(rng.integers(0, min(4, n - 1) + 1))
            d = int(rng.integers(1, 5))
            grads = rng.standard_normal((n, d))
            if rng.random() < 0.2:
                # duplicated rows make ties
                grads[rng.integers(0, n)] = grads[0]
            bundle = GradientBundle(grads, f=f)
            expected = naive_cge(grads, f)
            self.assertEqual(list(cge.select(bundle)), expected)
            self.assertVectorAlmostEqual(cge(bundle),
                                         grads[expected].sum(axis=0),
                                         tol=1e-12)


class Test_04_CWTM(BaseTestCase):

    def test_00_equal_gradients(self):
        g = [1.5, -2.0]
        self.assertVectorAlmostEqual(
            filter_cwtm(GradientBundle([g] * 5, f=2)), g, tol=1e-15)

    def test_01_trim_example(self):
        res = filter_cwtm(GradientBundle([[1], [2], [3], [10]], f=1))
        self.assertVectorAlmostEqual(res, [2.5])

    def test_02_f_zero_is_average(self):
        rng = numpy.random.default_rng(5)
        bundle = GradientBundle(rng.standard_normal((4, 3)), f=0)
        self.assertVectorAlmostEqual(filter_cwtm(bundle),
                                     filter_average(bundle), tol=1e-12)

    def test_03_precondition(self):
        with self.assertRaises(FilterError):
            filter_cwtm(GradientBundle([[1], [2]], f=1))
        with self.assertRaises(FilterError):
            filter_cwtm(GradientBundle([[1], [2], [3], [4]], f=2))

    def test_04_coordinate_wise(self):
        grads = [[1, 100], [2, -5], [3, 0], [-50, 7]]
        res = filter_cwtm(GradientBundle(grads, f=1))
        self.assertVectorAlmostEqual(res, [1.5, 3.5])

    def test_05_nan_sorted_last(self):
        grads = [[numpy.nan], [1], [2], [3], [-100]]
        res = filter_cwtm(GradientBundle(grads, f=1))
        self.assertVectorAlmostEqual(res, [2.0])

    def test_06_containment(self):
        rng = numpy.random.default_rng(6)
        for _ in range(200):
            n = int(rng.integers(3, 10))
            f = int(rng.integers(1, (n - 1) // 2 + 1))
            honest = rng.standard_normal((n - f, 3))
            faulty = rng.standard_normal((f, 3)) * 1000
            grads = numpy.vstack([honest, faulty])
            res = filter_cwtm(GradientBundle(grads[rng.permutation(n)],
                                             f=f))
            self.assertTrue(numpy.all(res >= honest.min(axis=0) - 1e-12))
            self.assertTrue(numpy.all(res <= honest.max(axis=0) + 1e-12))

    def test_07_permutation_invariance(self):
        rng = numpy.random.default_rng(7)
        grads = rng.standard_normal((6, 2))
        self.assertVectorAlmostEqual(
            filter_cwtm(GradientBundle(grads, f=2)),
            filter_cwtm(GradientBundle(grads[::-1], f=2)), tol=1e-12)

    def test_08_oracle(self):
        rng = numpy.random.default_rng(2021)
        cwtm = get_filter('cwtm')()
        for _ in range(1000):
            n = int(rng.integers(1, 13))
            f = int(rng.integers(0, min(4, (n - 1) // 2) + 1))
            d = int(rng.integers(1, 5))
            grads = numpy.round(rng.standard_normal((n, d)), 1)
            bundle = GradientBundle(grads, f=f)
            expected = naive_cwtm(grads, f)
            self.assertTrue(numpy.array_equal(cwtm.trimmed(bundle),
                                              expected))
            self.assertVectorAlmostEqual(cwtm(bundle), expected.mean(axis=0),
                                         tol=1e-12)
