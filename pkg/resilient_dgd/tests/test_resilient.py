# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import itertools

import numpy

from . import BaseTestCase
from .test_redundancy import (lstsq_minimizer,
                              random_instance)
from ..costmodel import (BlockQuadraticCost,
                         QuadraticCost,
                         aggregate_minimizer)
from ..exceptions import ValidationError
from ..resilient import (SubmittedCosts,
                         resilient_solve)


def honest_epsilon(costs, honest, f):
    """ Largest distance from minimizer of *honest* set to minimizers of
        its subsets of size ``n - 2f``
    """
    n = len(costs)
    x_g = lstsq_minimizer(costs, honest)
    return max(numpy.linalg.norm(x_g - lstsq_minimizer(costs, sub))
               for sub in itertools.combinations(honest, n - 2 * f))


def random_injection(rng, d):
    k = int(rng.integers(1, 4))
    rows = rng.uniform(-10, 10, size=(k, d))
    responses = rng.uniform(-100, 100, size=k)
    return BlockQuadraticCost(rows, responses)


def naive_resilient(costs, f):
    n = len(costs)
    best, chosen = None, None
    for cand in itertools.combinations(range(1, n + 1), n - f):
        block = [costs[i - 1] for i in cand]
        x_cand = aggregate_minimizer(block)
        r = 0.0
        for sub in itertools.combinations(cand, n - 2 * f):
            x_sub = aggregate_minimizer([costs[i - 1] for i in sub])
            r = max(r, float(numpy.linalg.norm(x_cand - x_sub)))
        if best is None or r < best:
            best, chosen = r, cand
    return chosen, best


class Test_00_SubmittedCosts(BaseTestCase):

    def test_00_guards(self):
        costs = self.load_costs()
        with self.assertRaises(ValidationError):
            SubmittedCosts(costs, 3)
        with self.assertRaises(ValidationError):
            SubmittedCosts(costs[:2], 1)
        with self.assertRaises(ValidationError):
            SubmittedCosts(costs[:4] + [object()], 1)

    def test_01_replace(self):
        costs = self.load_costs()
        submitted = SubmittedCosts(costs, 1)
        fake = QuadraticCost([1, 1], 20)
        replaced = submitted.replace(1, fake)
        self.assertEqual(replaced.costs[0], fake)
        self.assertEqual(submitted.costs[0], costs[0])
        self.assertEqual(replaced.n, 6)
        self.assertEqual(replaced.f, 1)
        self.assertNotEqual(submitted, replaced)
        self.assertEqual(submitted, SubmittedCosts(costs, 1))


class Test_01_ResilientSolve(BaseTestCase):

    def test_00_noise_free_all_honest(self):
        rows = [c.row for c in self.load_costs()]
        costs = [QuadraticCost(r, r.sum()) for r in rows]
        res = resilient_solve(SubmittedCosts(costs, 1))
        self.assertVectorAlmostEqual(res.x_hat, [1, 1], tol=1e-9)
        self.assertEqual(len(res.r_values), 6)
        for r in res.r_values.values():
            self.assertLess(r, 1e-9)

    def test_01_scalar_outlier(self):
        costs = [QuadraticCost([1.0], m) for m in (0.0, 0.1, 0.2, 100.0)]
        res = resilient_solve(SubmittedCosts(costs, 1))
        self.assertEqual(res.chosen_set, (1, 2, 3))
        self.assertVectorAlmostEqual(res.x_hat, [0.1], tol=1e-12)
        self.assertEqual(naive_resilient(costs, 1)[0], (1, 2, 3))
        self.assertLessEqual(abs(res.x_hat[0] - 0.1),
                             2 * honest_epsilon(costs, (1, 2, 3), 1))

    def test_02_bundled_dataset_injection(self):
        costs = self.load_costs()
        fake = BlockQuadraticCost([[1, 0], [0, 1]], [10, 10]).scaled(30)
        res = resilient_solve(SubmittedCosts(costs, 1).replace(1, fake))
        dist = numpy.linalg.norm(res.x_hat - self.env.x_H)
        self.assertLessEqual(dist, 2 * self.env.epsilon + 2e-3)
        self.assertLessEqual(
            numpy.linalg.norm(res.x_hat - aggregate_minimizer(costs[1:])),
            2 * honest_epsilon(costs, (2, 3, 4, 5, 6), 1) + 1e-8)

    def test_03_randomized_injection_bound(self):
        costs = self.load_costs()
        rng = numpy.random.default_rng(50)
        for _ in range(50):
            faulty = int(rng.integers(1, 7))
            honest = tuple(i for i in range(1, 7) if i != faulty)
            submitted = SubmittedCosts(costs, 1).replace(
                faulty, random_injection(rng, 2))
            res = resilient_solve(submitted)
            x_g = aggregate_minimizer([costs[i - 1] for i in honest])
            eps_g = honest_epsilon(costs, honest, 1)
            self.assertLessEqual(numpy.linalg.norm(res.x_hat - x_g),
                                 2 * eps_g + 1e-8)
            self.assertLessEqual(eps_g, self.env.epsilon + 1e-3)

    def test_04_resilience_on_random_instances(self):
        rng = numpy.random.default_rng(77)
        for _ in range(50):
            n = int(rng.integers(5, 8))
            f = int(rng.integers(1, (n - 2) // 2 + 1))
            costs = random_instance(rng, n, 2)
            faulty = sorted(rng.choice(n, size=f, replace=False) + 1)
            submitted = SubmittedCosts(costs, f)
            for agent_id in faulty:
                submitted = submitted.replace(int(agent_id),
                                              random_injection(rng, 2))
            res = resilient_solve(submitted)
            honest = tuple(i for i in range(1, n + 1) if i not in faulty)
            for group in itertools.combinations(honest, n - f):
                x_g = lstsq_minimizer(costs, group)
                eps_g = honest_epsilon(costs, group, f)
                self.assertLessEqual(numpy.linalg.norm(res.x_hat - x_g),
                                     2 * eps_g + 1e-8)

    def test_05_exact_recovery(self):
        rows = [c.row for c in self.load_costs()]
        costs = [QuadraticCost(r, r.sum()) for r in rows]
        rng = numpy.random.default_rng(9)
        for _ in range(10):
            faulty = int(rng.integers(1, 7))
            submitted = SubmittedCosts(costs, 1).replace(
                faulty, random_injection(rng, 2))
            res = resilient_solve(submitted)
            self.assertVectorAlmostEqual(res.x_hat, [1, 1], tol=1e-9)

    def test_06_oracle(self):
        rng = numpy.random.default_rng(2018)
        for _ in range(20):
            n = int(rng.integers(4, 8))
            f = int(rng.integers(1, (n - 2) // 2 + 1))
            costs = random_instance(rng, n, 2, noise_std=0.5)
            res = resilient_solve(SubmittedCosts(costs, f))
            chosen, best = naive_resilient(costs, f)
            self.assertEqual(res.chosen_set, chosen)
            self.assertAlmostEqual(res.r_values[chosen], best, delta=1e-12)
            self.assertVectorAlmostEqual(
                res.x_hat, lstsq_minimizer(costs, chosen), tol=1e-9)

    def test_07_deterministic(self):
        costs = self.load_costs()
        submitted = SubmittedCosts(costs, 1)
        first = resilient_solve(submitted)
        second = resilient_solve(SubmittedCosts(costs, 1))
        self.assertEqual(first.chosen_set, second.chosen_set)
        self.assertTrue(numpy.array_equal(first.x_hat, second.x_hat))
        self.assertEqual(list(first.r_values), list(second.r_values))

    def test_08_guard(self):
        rng = numpy.random.default_rng(1)
        costs = random_instance(rng, 21, 2)
        with self.assertRaises(ValidationError):
            resilient_solve(SubmittedCosts(costs, 1))
