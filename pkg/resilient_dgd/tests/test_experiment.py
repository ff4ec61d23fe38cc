# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


import io
import math
import os
import os.path

import numpy
import simplejson

from . import BaseTestCase
from ..exceptions import (ConfigError,
                          DatasetError,
                          ValidationError)
from ..experiment import (ExperimentSpec,
                          SummaryRecord,
                          generate_synthetic,
                          load_dataset,
                          reproduce_table1,
                          run_experiment,
                          write_dataset,
                          write_gnuplot_script,
                          write_summary)
from ..redundancy import measure_redundancy
from ..simengine import read_config_file


class Test_00_Dataset(BaseTestCase):

    def write(self, text, name='data.csv'):
        path = os.path.join(self.make_tempdir(), name)
        with io.open(path, 'wt') as f:
            f.write(text)
        return path

    def test_00_bundled_dataset(self):
        costs = load_dataset(self.env.dataset)
        self.assertEqual(len(costs), 6)
        self.assertEqual(costs[0].dimension, 2)
        self.assertVectorAlmostEqual(costs[0].row, [1.0, 0.0])
        self.assertEqual(costs[0].response, 0.9108)
        self.assertEqual(costs[5].response, -0.3615)

    def test_01_empty(self):
        with self.assertRaises(DatasetError):
            load_dataset(self.write(u''))
        with self.assertRaises(DatasetError):
            load_dataset(self.write(u'\n\n'))

    def test_02_header(self):
        path = self.write(u'a_1,a_2,b\n1,0,1\n0,1,2\n')
        with self.assertRaises(DatasetError) as ctx:
            load_dataset(path)
        self.assertEqual(ctx.exception.lineno, 1)
        costs = load_dataset(path, header=True)
        self.assertEqual(len(costs), 2)
        self.assertEqual(costs[1].response, 2.0)

    def test_03_inconsistent_columns(self):
        path = self.write(u'1,0,1\n0,1\n')
        with self.assertRaises(DatasetError) as ctx:
            load_dataset(path)
        self.assertEqual(ctx.exception.lineno, 2)
        self.assertEqual(ctx.exception.path, path)
        self.assertIn('%s:2:' % path, str(ctx.exception))

    def test_04_bad_rows(self):
        with self.assertRaises(DatasetError):
            load_dataset(self.write(u'1\n'))
        with self.assertRaises(DatasetError):
            load_dataset(self.write(u'0,0,1\n'))
        with self.assertRaises(DatasetError):
            load_dataset(self.write(u'1,x,1\n'))
        with self.assertRaises(ValidationError):
            load_dataset(self.write(u'1,nan,1\n'))

    def test_05_round_trip(self):
        ds = generate_synthetic(7, 3, 0.3, seed=4)
        tmp = self.make_tempdir()
        for header in (False, True):
            path = os.path.join(tmp, 'ds%d.csv' % header)
            write_dataset(path, ds.costs, header=header)
            self.assertEqual(load_dataset(path, header=header), ds.costs)


class Test_01_Synthetic(BaseTestCase):

    def test_00_unit_circle_design(self):
        ds = generate_synthetic(6, 2, 0.1, seed=0)
        self.assertEqual(len(ds.costs), 6)
        for k, cost in enumerate(ds.costs):
            angle = math.degrees(math.atan2(cost.row[1], cost.row[0]))
            self.assertAlmostEqual(angle, 30.0 * k, places=9)
            self.assertAlmostEqual(numpy.linalg.norm(cost.row), 1.0,
                                   places=12)
        # axis rows coincide with bundled dataset, other rows keep signs
        bundled = self.load_costs()
        self.assertTrue(numpy.array_equal(ds.costs[0].row, bundled[0].row))
        self.assertTrue(numpy.array_equal(ds.costs[3].row, bundled[3].row))
        for gen, ref in zip(ds.costs, bundled):
            self.assertTrue(numpy.array_equal(numpy.sign(gen.row),
                                              numpy.sign(ref.row)))

    def test_01_responses(self):
        ds = generate_synthetic(6, 2, 0.1, seed=0)
        self.assertVectorAlmostEqual(ds.x_star, [1.0, 1.0])
        for cost, noise in zip(ds.costs, ds.noise):
            self.assertAlmostEqual(cost.response,
                                   cost.row.dot(ds.x_star) + noise,
                                   places=12)

    def test_02_noise_free_redundancy(self):
        for n, d, f in ((6, 2, 1), (7, 3, 1), (8, 2, 2)):
            ds = generate_synthetic(n, d, 0.0, seed=1)
            self.assertLess(measure_redundancy(ds.costs, f).epsilon, 1e-9)

    def test_03_deterministic(self):
        tmp = self.make_tempdir()
        contents = []
        for name in ('a.csv', 'b.csv'):
            path = os.path.join(tmp, name)
            write_dataset(path, generate_synthetic(9, 4, 0.5,
                                                   seed=11).costs)
            with io.open(path, 'rb') as f:
                contents.append(f.read())
        self.assertEqual(contents[0], contents[1])

    def test_04_sphere_design(self):
        ds = generate_synthetic(9, 4, 0.0, seed=2, x_star=[1, 2, 3, 4])
        for cost in ds.costs:
            self.assertAlmostEqual(numpy.linalg.norm(cost.row), 1.0,
                                   places=12)
        self.assertVectorAlmostEqual(ds.x_star, [1, 2, 3, 4])

    def test_05_errors(self):
        with self.assertRaises(ValidationError):
            generate_synthetic(2, 2, 0.1)
        with self.assertRaises(ValidationError):
            generate_synthetic(6, 2, -0.1)


class Test_02_Experiment(BaseTestCase):

    def table1_config(self):
        return read_config_file(self.env.config_table1)

    def test_00_spec_source(self):
        with self.assertRaises(ConfigError):
            ExperimentSpec({'n': 6, 'f': 1})
        with self.assertRaises(ConfigError):
            ExperimentSpec({'n': 6, 'f': 1}, dataset_path=self.env.dataset,
                           synthetic={'n': 6, 'd': 2, 'noise_std': 0.1})
        spec = ExperimentSpec(self.table1_config(),
                              dataset_path=self.env.dataset)
        self.assertNotIn('dataset_path', spec.config)
        self.assertIn('regression6.csv', str(spec))

    def test_01_run_with_output(self):
        outdir = self.make_tempdir()
        spec = ExperimentSpec(self.table1_config(),
                              dataset_path=self.env.dataset, outdir=outdir)
        record, traj = run_experiment(spec, gnuplot=True)
        self.assertEqual(record.filter, 'cge')
        self.assertEqual(record.fault, 'gradient_reverse')
        self.assertEqual(record.rounds, 500)
        self.assertEqual(len(traj), 501)
        self.assertAlmostEqual(record.dist_to_xH, traj.final.distance,
                               delta=1e-12)
        self.assertLessEqual(record.dist_to_xH, self.env.epsilon)
        self.assertAlmostEqual(record.epsilon, self.env.epsilon, delta=1e-3)

        csv_path = os.path.join(outdir, 'trajectory_cge_gradient_reverse.csv')
        self.assertTrue(os.path.exists(csv_path))
        with io.open(csv_path, 'rt') as f:
            self.assertEqual(f.read(), traj.to_csv())

        with io.open(os.path.join(outdir, 'summary.json'), 'rt') as f:
            summary = simplejson.load(f)
        run = summary['runs'][0]
        self.assertEqual(run['x_out'], list(traj.final.x))
        self.assertEqual(run['dist_to_xH'], record.dist_to_xH)
        self.assertEqual(run['two_epsilon'], 2 * record.epsilon)
        self.assertTrue(run['within_epsilon'])
        self.assertFalse(run['diagnostics']['cge_applicable'])
        self.assertEqual(summary['config']['faulty_agents'], [1])

        with io.open(os.path.join(outdir, 'plot.gp'), 'rt') as f:
            script = f.read()
        self.assertIn('trajectory_cge_gradient_reverse.csv', script)
        self.assertIn('[0:80]', script)

    def test_02_run_synthetic(self):
        config = {'n': 6, 'f': 1, 'faulty_agents': [2], 'filter': 'cwtm',
                  'iterations': 100}
        spec = ExperimentSpec(config, synthetic={'n': 6, 'd': 2,
                                                 'noise_std': 0.05,
                                                 'seed': 3})
        record, traj = run_experiment(spec)
        self.assertIsNone(record.trajectory_file)
        self.assertEqual(len(traj), 101)
        self.assertEqual(record.filter, 'cwtm')
        self.assertIsNotNone(record.epsilon)

    def test_03_summary_record(self):
        record = SummaryRecord('cge', 'none', [3.0, 4.0], [0.0, 0.0], 1.0,
                               10)
        self.assertEqual(record.dist_to_xH, 5.0)
        data = record.as_dict()
        self.assertEqual(data['two_epsilon'], 2.0)
        self.assertFalse(data['within_epsilon'])
        self.assertIn('dist=5', record.table_row())
        record = SummaryRecord('cge', 'none', [1.0], [1.0], None, 10)
        self.assertIsNone(record.as_dict()['two_epsilon'])

    def test_04_write_summary_precision(self):
        path = os.path.join(self.make_tempdir(), 'summary.json')
        x = [0.1 + 0.2, 1.0 / 3.0]
        record = SummaryRecord('cwtm', 'none', x, [0.0, 0.0], 0.089, 5)
        write_summary(path, [record])
        with io.open(path, 'rt') as f:
            data = simplejson.load(f)
        self.assertEqual(data['runs'][0]['x_out'], x)

    def test_05_reproduce_table1(self):
        outdir = self.make_tempdir()
        records = reproduce_table1(self.load_costs(), self.table1_config(),
                                   outdir=outdir, random_seeds=range(2),
                                   gnuplot=True)
        labels = [(r.filter, r.fault) for r in records]
        self.assertEqual(labels, [
            ('cge', 'gradient_reverse'),
            ('cge', 'gaussian_random'),
            ('cge', 'gaussian_random'),
            ('cwtm', 'gradient_reverse'),
            ('cwtm', 'gaussian_random'),
            ('cwtm', 'gaussian_random'),
            ('average', 'gradient_reverse'),
            ('fault-free', 'none'),
        ])
        for record in (records[0], records[3]):
            self.assertLess(record.dist_to_xH, self.env.epsilon)
        for record in records:
            self.assertTrue(numpy.all(numpy.isfinite(record.x_out)))
        self.assertLess(records[-1].dist_to_xH, 1e-2)
        self.assertEqual([r.diagnostics.get('seed') for r in records[:3]],
                         [0, 0, 1])
        names = sorted(os.listdir(outdir))
        self.assertEqual(names, [
            'plot.gp',
            'summary.json',
            'trajectory_average_gradient_reverse.csv',
            'trajectory_cge_gaussian_random.csv',
            'trajectory_cge_gradient_reverse.csv',
            'trajectory_cwtm_gaussian_random.csv',
            'trajectory_cwtm_gradient_reverse.csv',
            'trajectory_fault-free_none.csv',
        ])
        with io.open(os.path.join(outdir, 'summary.json'), 'rt') as f:
            self.assertEqual(len(simplejson.load(f)['runs']), 8)

    def test_06_reproduce_requires_faulty(self):
        config = self.table1_config()
        config['faulty_agents'] = []
        with self.assertRaises(ConfigError):
            reproduce_table1(self.load_costs(), config)

    def test_07_gnuplot_script(self):
        outdir = self.make_tempdir()
        path = write_gnuplot_script(outdir, ['trajectory_a_b.csv'],
                                    detail_rounds=40)
        self.assertEqual(path, os.path.join(outdir, 'plot.gp'))
        with io.open(path, 'rt') as f:
            script = f.read()
        self.assertIn("'trajectory_a_b.csv' using 't':'loss'", script)
        self.assertIn("'trajectory_a_b.csv' using 't':'distance'", script)
        self.assertIn('[0:40]', script)
        self.assertIn("title 'a_b'", script)
