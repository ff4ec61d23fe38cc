# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Experiment driver: datasets, experiment runs and result files

Dataset files are CSV with one row per agent: ``a_1, ..., a_d, b``.
Header line is optional and has to be requested explicitly.

Experiment writes to output directory:

- ``trajectory_<filter>_<fault>.csv`` for each run;
- ``summary.json`` with outputs and diagnostics of all runs;
- ``plot.gp`` gnuplot script (only if requested).
"""

import collections
import csv
import io
import logging
import os
import os.path

import numpy
import simplejson
import six

from .costmodel import (QuadraticCost,
                        aggregate_minimizer,
                        curvature)
from .exceptions import (ConfigError,
                         DatasetError,
                         Error,
                         ValidationError)
from .redundancy import (measure_redundancy,
                         DEFAULT_MAX_AGENTS)
from .simengine import (SimConfig,
                        run_dgd)
from .theory import (cge_bound,
                     cwtm_bound,
                     estimate_lambda)
from .utils import (AttrDict,
                    fmt_float)

__all__ = ('load_dataset',
           'write_dataset',
           'SyntheticDataset',
           'generate_synthetic',
           'ExperimentSpec',
           'SummaryRecord',
           'run_experiment',
           'reproduce_table1',
           'write_summary',
           'write_gnuplot_script')

logger = logging.getLogger(__name__)


def _parse_rows(stream, path, header):
    costs, width = [], None
    for lineno, row in enumerate(csv.reader(stream), 1):
        if header and lineno == 1:
            continue
        if not row or all(not v.strip() for v in row):
            continue
        if len(row) < 2:
            raise DatasetError("expected at least 2 columns (a_1, b), "
                               "got %d" % len(row), path, lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DatasetError("inconsistent column count: %d instead of "
                               "%d" % (len(row), width), path, lineno)
        try:
            values = [float(v) for v in row]
        except ValueError as exc:
            raise DatasetError("cannot parse number: %s" % exc,
                               path, lineno)
        try:
            costs.append(QuadraticCost(values[:-1], values[-1]))
        except ValidationError as exc:
            raise DatasetError(str(exc), path, lineno)
    return costs


def load_dataset(path, header=False):
    """ Load costs of agents from CSV file

        :param str path: path to CSV file
        :param bool header: skip first line
        :return: list of QuadraticCost, one per row
        :raises DatasetError: if file is empty or cannot be parsed
    """
    with io.open(path, 'rt', newline='') as f:
        costs = _parse_rows(f, path, header)
    if not costs:
        raise DatasetError("dataset is empty", path)
    logger.info("Dataset loaded from %s: n=%d, d=%d",
                path, len(costs), costs[0].dimension)
    return costs


def write_dataset(path, costs, header=False):
    """ Write costs to CSV file (floats with 17 significant digits)
    """
    costs = list(costs)
    with io.open(path, 'wt', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        if header:
            d = costs[0].dimension
            writer.writerow(['a_%d' % (k + 1) for k in range(d)] + ['b'])
        for cost in costs:
            writer.writerow([fmt_float(v) for v in cost.row] +
                            [fmt_float(cost.response)])
    logger.info("Dataset written to %s", path)


SyntheticDataset = collections.namedtuple(
    'SyntheticDataset', ('costs', 'x_star', 'noise'))


def generate_synthetic(n, d, noise_std, seed=0, x_star=None):
    """ Generate linear regression dataset ``B = A x* + N``

        Rows of *A* lie on unit sphere. For ``d = 2`` they are evenly
        spaced on upper half of unit circle (angles ``k * 180 / n``
        degrees), otherwise drawn uniformly at random.
        Noise is i.i.d. Gaussian with standard deviation *noise_std*.
        Callers must check rank of subsets they need.

        :param int n: number of agents, must exceed d
        :param int d: dimension
        :param float noise_std: noise standard deviation (>= 0)
        :param int seed: random seed
        :param x_star: ground truth, defaults to vector of ones
        :rtype: SyntheticDataset
        :raises ValidationError: if ``n <= d`` or noise_std < 0
    """
    if d < 1 or n <= d:
        raise ValidationError("synthetic dataset requires n > d >= 1 "
                              "(n=%r, d=%r)" % (n, d))
    if not noise_std >= 0:
        raise ValidationError("noise_std must be non-negative")
    rng = numpy.random.default_rng(seed)
    if d == 2:
        angles = numpy.pi * numpy.arange(n) / n
        rows = numpy.column_stack([numpy.cos(angles), numpy.sin(angles)])
        # exact zeros instead of 6e-17 and friends
        rows[numpy.abs(rows) < 1e-15] = 0.0
    else:
        rows = rng.standard_normal((n, d))
        rows /= numpy.linalg.norm(rows, axis=1)[:, numpy.newaxis]
    x_star = (numpy.ones(d) if x_star is None
              else numpy.asarray(x_star, dtype=float))
    noise = (rng.normal(0.0, noise_std, size=n) if noise_std > 0
             else numpy.zeros(n))
    responses = rows.dot(x_star) + noise
    costs = [QuadraticCost(r, b) for r, b in zip(rows, responses)]
    return SyntheticDataset(costs, x_star, noise)


@six.python_2_unicode_compatible
class ExperimentSpec(object):
    """ Description of experiment

        :param dict config: flat simulation config (keys of
                            :data:`resilient_dgd.simengine.config.CONFIG_KEYS`
                            except ``dataset_path``)
        :param str dataset_path: dataset CSV file
        :param dict synthetic: params of :func:`generate_synthetic`
                               (n, d, noise_std, seed)
        :param str outdir: directory to write results to (None - no files)
        :param bool header: dataset has header line
        :raises ConfigError: unless exactly one of dataset_path
                             and synthetic is given
    """

    def __init__(self, config, dataset_path=None, synthetic=None,
                 outdir=None, header=False):
        if (dataset_path is None) == (synthetic is None):
            raise ConfigError("exactly one of dataset path and synthetic "
                              "params must be specified")
        config = AttrDict(config)
        config.pop('dataset_path', None)
        self.config = config
        self.dataset_path = dataset_path
        self.synthetic = None if synthetic is None else AttrDict(synthetic)
        self.outdir = outdir
        self.header = header

    def load_costs(self):
        if self.dataset_path is not None:
            return load_dataset(self.dataset_path, header=self.header)
        return generate_synthetic(**self.synthetic).costs

    def __str__(self):
        source = self.dataset_path or 'synthetic(%s)' % dict(self.synthetic)
        return u"ExperimentSpec(%s, filter=%s)" % (
            source, self.config.get('filter'))

    def __repr__(self):
        return u"<%s>" % str(self)


@six.python_2_unicode_compatible
class SummaryRecord(object):
    """ One row of results table

        Distance is recomputed from stored vectors.
    """

    def __init__(self, filter, fault, x_out, x_H, epsilon, rounds,
                 settle_round=None, trajectory_file=None, diagnostics=None):
        self.filter = filter
        self.fault = fault
        self.x_out = numpy.asarray(x_out, dtype=float)
        self.x_H = numpy.asarray(x_H, dtype=float)
        self.epsilon = epsilon
        self.rounds = rounds
        self.settle_round = settle_round
        self.trajectory_file = trajectory_file
        self.diagnostics = diagnostics or {}

    @property
    def dist_to_xH(self):
        return float(numpy.linalg.norm(self.x_out - self.x_H))

    def as_dict(self):
        eps = self.epsilon
        return collections.OrderedDict([
            ('filter', self.filter),
            ('fault', self.fault),
            ('x_out', list(map(float, self.x_out))),
            ('x_H', list(map(float, self.x_H))),
            ('dist_to_xH', self.dist_to_xH),
            ('epsilon', eps),
            ('two_epsilon', None if eps is None else 2 * eps),
            ('within_epsilon', None if eps is None
             else self.dist_to_xH <= eps),
            ('rounds', self.rounds),
            ('settle_round', self.settle_round),
            ('trajectory_file', self.trajectory_file),
            ('diagnostics', self.diagnostics),
        ])

    def table_row(self):
        """ Table-1-like text row
        """
        return u"%-10s %-18s x_out=(%s) dist=%.4g" % (
            self.filter, self.fault,
            ', '.join('%.4f' % v for v in self.x_out), self.dist_to_xH)

    def __str__(self):
        return u"SummaryRecord(%s)" % self.table_row()

    def __repr__(self):
        return u"<%s>" % str(self)


def _diagnostics(costs, config, epsilon):
    """ Bound diagnostics for honest agents of *config*
    """
    honest = config.honest_ids
    res = {}
    try:
        coef = curvature(costs, honest)
    except Error as exc:
        logger.warning("Curvature unavailable: %s", exc)
        return res
    res.update(coef.as_dict())
    if epsilon is None:
        return res
    cge = cge_bound(config.n, config.f, coef.mu, coef.gamma, epsilon)
    res.update(cge.as_dict())
    if len(honest) >= 2:
        lam = estimate_lambda([costs[i - 1] for i in honest], config.region,
                              seed=config.seed)
        cwtm = cwtm_bound(config.dimension, config.n, coef.mu, coef.gamma,
                          lam, epsilon)
        res.update(cwtm.as_dict())
    return res


def trajectory_filename(filter_name, fault_name):
    return 'trajectory_%s_%s.csv' % (filter_name, fault_name)


def _run(costs, config, epsilon, outdir, label=None, diagnostics=True):
    trajectory = run_dgd(config, costs)
    x_ref = aggregate_minimizer([costs[i - 1] for i in config.honest_ids])
    label = label or config.filter
    fname = None
    if outdir is not None:
        fname = trajectory_filename(label, config.fault_name)
        with io.open(os.path.join(outdir, fname), 'wt', newline='') as f:
            trajectory.write_csv(f)
        logger.info("Trajectory written to %s", fname)
    diag = _diagnostics(costs, config, epsilon) if diagnostics else {}
    record = SummaryRecord(label, config.fault_name, trajectory.final.x,
                           x_ref, epsilon, config.iterations,
                           settle_round=trajectory.settle_round(),
                           trajectory_file=fname, diagnostics=diag)
    logger.info("%s", record.table_row())
    return record, trajectory


def _measure_epsilon(costs, f):
    if len(costs) > DEFAULT_MAX_AGENTS:
        logger.warning("Too many agents (%d) to measure redundancy",
                       len(costs))
        return None
    try:
        return measure_redundancy(costs, f).epsilon
    except Error as exc:
        logger.warning("Redundancy unavailable: %s", exc)
        return None


def _prepare_outdir(outdir):
    if outdir is not None and not os.path.isdir(outdir):
        os.makedirs(outdir)


def run_experiment(spec, gnuplot=False):
    """ Run simulation described by *spec* and write results

        :param ExperimentSpec spec: experiment description
        :param bool gnuplot: also write gnuplot script
        :return: tuple(SummaryRecord, Trajectory)
    """
    costs = spec.load_costs()
    config = SimConfig.from_mapping(spec.config, costs[0].dimension)
    epsilon = _measure_epsilon(costs, config.f)
    _prepare_outdir(spec.outdir)
    record, trajectory = _run(costs, config, epsilon, spec.outdir)
    if spec.outdir is not None:
        write_summary(os.path.join(spec.outdir, 'summary.json'), [record],
                      extra={'config': config.as_dict()})
        if gnuplot:
            write_gnuplot_script(spec.outdir, [record.trajectory_file])
    return record, trajectory


def reproduce_table1(costs, config, outdir=None, random_seeds=range(10),
                     gnuplot=False):
    """ Reproduce linear regression experiment

        For CGE and CWTM runs gradient-reverse fault once and Gaussian
        random fault once per seed of *random_seeds*. Baselines: plain
        average while faulty agents are present, and fault-free DGD with
        faulty agents omitted.

        :param list costs: costs of all agents
        :param dict config: flat base config (must list faulty_agents)
        :return: list of SummaryRecord
    """
    costs = list(costs)
    base = AttrDict(config)
    base.pop('dataset_path', None)
    d = costs[0].dimension
    if 'f' not in base:
        raise ConfigError("config key 'f' is required")
    faulty = sorted(base.get('faulty_agents') or [])
    if not faulty:
        raise ConfigError("reproduction requires faulty_agents")
    epsilon = _measure_epsilon(costs, base['f'])
    _prepare_outdir(outdir)

    records = []
    for filter_name in ('cge', 'cwtm'):
        for fault in ('gradient_reverse', 'gaussian_random'):
            seeds = ([base.get('seed', 0)] if fault == 'gradient_reverse'
                     else list(random_seeds))
            if not seeds:
                continue
            for seed in seeds:
                cfg = AttrDict(base, filter=filter_name, fault_type=fault,
                               seed=seed)
                run_outdir = outdir if seed == seeds[0] else None
                record, _ = _run(costs, SimConfig.from_mapping(cfg, d),
                                 epsilon, run_outdir,
                                 diagnostics=(seed == seeds[0]))
                record.diagnostics['seed'] = seed
                records.append(record)

    cfg = AttrDict(base, filter='average', fault_type='gradient_reverse')
    records.append(_run(costs, SimConfig.from_mapping(cfg, d), epsilon,
                        outdir, diagnostics=False)[0])

    honest_ids = [i for i in range(1, len(costs) + 1) if i not in faulty]
    honest_costs = [costs[i - 1] for i in honest_ids]
    cfg = AttrDict(base, n=len(honest_costs), f=0, faulty_agents=[],
                   filter='average')
    records.append(_run(honest_costs, SimConfig.from_mapping(cfg, d),
                        epsilon, outdir, label='fault-free',
                        diagnostics=False)[0])

    if outdir is not None:
        write_summary(os.path.join(outdir, 'summary.json'), records,
                      extra={'config': dict(base)})
        if gnuplot:
            write_gnuplot_script(
                outdir, [r.trajectory_file for r in records
                         if r.trajectory_file])
    return records


def write_summary(path, records, extra=None):
    """ Write summary JSON. Floats keep all 17 significant digits
    """
    data = collections.OrderedDict()
    data.update(extra or {})
    data['runs'] = [r.as_dict() for r in records]
    with io.open(path, 'wt') as f:
        f.write(simplejson.dumps(data, indent=2, ignore_nan=True))
        f.write(u'\n')
    logger.info("Summary written to %s", path)


GNUPLOT_HEADER = u"""\
set datafile separator ','
set key autotitle columnhead
set xlabel 't'
set terminal pngcairo size 1200,500
"""


def write_gnuplot_script(outdir, trajectory_files, detail_rounds=80):
    """ Write ``plot.gp`` plotting loss and distance of trajectories,
        over all rounds and over first *detail_rounds* rounds

        :return: path of script
    """
    def plot_line(column, title_suffix):
        return u"plot " + u", \\\n     ".join(
            u"'%s' using 't':'%s' with lines title '%s'" % (
                fname, column, fname[len('trajectory_'):-len('.csv')])
            for fname in trajectory_files) + u"\n"

    parts = [GNUPLOT_HEADER]
    for suffix, xrange_ in ((u'', u'[*:*]'),
                            (u'_detail', u'[0:%d]' % detail_rounds)):
        parts.append(u"set output 'plot%s.png'\n" % suffix)
        parts.append(u"set multiplot layout 1,2\n")
        parts.append(u"set xrange %s\n" % xrange_)
        parts.append(u"set ylabel 'loss'\nset logscale y\n")
        parts.append(plot_line('loss', suffix))
        parts.append(u"set ylabel 'distance'\n")
        parts.append(plot_line('distance', suffix))
        parts.append(u"unset logscale y\nunset multiplot\n")
    path = os.path.join(outdir, 'plot.gp')
    with io.open(path, 'wt') as f:
        f.write(u''.join(parts))
    logger.info("Gnuplot script written to %s", path)
    return path
