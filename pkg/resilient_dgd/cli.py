# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


""" Command line interface: ``resilient-dgd <command> [options]``

Commands:

- ``redundancy``        measure redundancy of dataset;
- ``bounds``            theoretical resilience bounds of CGE and CWTM;
- ``exhaustive``        run exhaustive resilient algorithm;
- ``simulate``          run DGD simulation;
- ``generate``          generate synthetic dataset;
- ``reproduce-table1``  reproduce linear regression experiment.

Exit codes: 0 on success, 1 on usage or validation error,
2 on numerical failure.
"""

import argparse
import collections
import logging
import os
import os.path
import sys

import simplejson

from . import version
from .costmodel import (BlockQuadraticCost,
                        curvature)
from .exceptions import (Error,
                         NumericalError,
                         ValidationError)
from .experiment import (ExperimentSpec,
                         generate_synthetic,
                         load_dataset,
                         reproduce_table1,
                         run_experiment,
                         write_dataset)
from .filters import get_filter_names
from .redundancy import measure_redundancy
from .resilient import (SubmittedCosts,
                        resilient_solve)
from .simengine import (BoxRegion,
                        get_fault_names,
                        read_config_file)
from .theory import (cge_bound,
                     cwtm_bound,
                     estimate_lambda,
                     worst_case_curvature,
                     DEFAULT_LAMBDA_SAMPLES)
from .utils import AttrDict

__all__ = ('main', 'build_parser')

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

DEFAULT_CONFIG = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), 'data', 'table1.yaml')


class ArgumentParser(argparse.ArgumentParser):
    """ Argument parser exiting with code 1 on usage errors
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def parse_ids(value):
    """ Parse comma separated list of 1-based agent ids
    """
    try:
        return tuple(int(v) for v in value.split(',') if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("invalid id list: %r" % value)


def parse_vector(value):
    """ Parse comma separated list of floats
    """
    try:
        return [float(v) for v in value.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError("invalid vector: %r" % value)


def parse_injection(value):
    """ Parse ``AGENT:a_1,...,a_d,b[;a_1,...,a_d,b...]``

        :return: tuple(agent_id, BlockQuadraticCost)
    """
    try:
        agent, rows = value.split(':', 1)
        agent_id = int(agent)
        data = [[float(v) for v in row.split(',')]
                for row in rows.split(';') if row.strip()]
        if not data or any(len(r) < 2 for r in data):
            raise ValueError(value)
        cost = BlockQuadraticCost([r[:-1] for r in data],
                                  [r[-1] for r in data])
    except (ValueError, ValidationError):
        raise argparse.ArgumentTypeError(
            "invalid injection %r, expected "
            "AGENT:a_1,...,a_d,b[;a_1,...,a_d,b]" % value)
    return agent_id, cost


# Command handlers return (json-friendly data, lines of text)

def cmd_redundancy(args):
    costs = load_dataset(args.dataset, header=args.header)
    report = measure_redundancy(costs, args.f, force=args.force)
    coef = worst_case_curvature(costs, args.f)
    data = report.as_dict()
    data['curvature'] = coef.as_dict()
    sup, sub = report.witness_pair
    lines = [
        u"n=%d f=%d" % (report.n, report.f),
        u"epsilon     %.6g" % report.epsilon,
        u"witness     S=%s S_hat=%s" % (list(sup), list(sub)),
        u"mu          %.6g (unit convention %.6g)" % (coef.mu,
                                                       coef.mu_unit),
        u"gamma       %.6g (unit convention %.6g)" % (coef.gamma,
                                                       coef.gamma_unit),
    ]
    return data, lines


def cmd_bounds(args):
    costs = load_dataset(args.dataset, header=args.header)
    n, d = len(costs), costs[0].dimension
    epsilon = measure_redundancy(costs, args.f, force=args.force).epsilon
    if args.honest:
        for agent_id in args.honest:
            if not 1 <= agent_id <= n:
                raise ValidationError("no agent %d (n=%d)" % (agent_id, n))
        coef = curvature(costs, args.honest)
        honest_costs = [costs[i - 1] for i in args.honest]
    else:
        coef = worst_case_curvature(costs, args.f)
        honest_costs = costs
    region = BoxRegion.cube(args.w_lower, args.w_upper, d)
    seed = args.seed if args.seed is not None else 0
    lam = estimate_lambda(honest_costs, region, samples=args.samples,
                          seed=seed)
    cge = cge_bound(n, args.f, coef.mu, coef.gamma, epsilon)
    cwtm = cwtm_bound(d, n, coef.mu, coef.gamma, lam, epsilon)

    data = collections.OrderedDict([('n', n), ('f', args.f),
                                    ('epsilon', epsilon)])
    data.update(sorted(coef.as_dict().items()))
    data.update(sorted(cge.as_dict().items()))
    data.update(sorted(cwtm.as_dict().items()))

    def fmt(v):
        return u'n/a' if v is None else u'%.6g' % v
    lines = [
        u"epsilon     %s" % fmt(epsilon),
        u"mu          %s (unit convention %s)" % (fmt(coef.mu),
                                                   fmt(coef.mu_unit)),
        u"gamma       %s (unit convention %s)" % (fmt(coef.gamma),
                                                   fmt(coef.gamma_unit)),
        u"CGE         alpha=%s D=%s D*eps=%s%s" % (
            fmt(cge.alpha), fmt(cge.D), fmt(cge.bound),
            u'' if cge.applicable else u' (inapplicable: alpha <= 0)'),
        u"CWTM        lambda=%s D'=%s D'*eps=%s%s" % (
            fmt(lam), fmt(cwtm.D_prime), fmt(cwtm.bound),
            u'' if cwtm.applicable else
            u' (inapplicable: lambda >= %s)' % fmt(cwtm.threshold)),
    ]
    return data, lines


def cmd_exhaustive(args):
    costs = load_dataset(args.dataset, header=args.header)
    submitted = SubmittedCosts(costs, args.f)
    for agent_id, cost in args.inject or []:
        if not 1 <= agent_id <= submitted.n:
            raise ValidationError("cannot inject: no agent %d" % agent_id)
        if cost.dimension != costs[0].dimension:
            raise ValidationError(
                "cannot inject: agent %d cost has dimension %d, "
                "expected %d" % (agent_id, cost.dimension,
                                 costs[0].dimension))
        logger.info("Agent %d submits %s", agent_id, cost)
        submitted = submitted.replace(agent_id, cost)
    res = resilient_solve(submitted, force=args.force)
    data = collections.OrderedDict([
        ('x_hat', list(map(float, res.x_hat))),
        ('chosen_set', list(res.chosen_set)),
        ('r_values', [{'T': list(t), 'r_T': r}
                      for t, r in res.r_values.items()]),
    ])
    lines = [u"x_hat       (%s)" % u', '.join('%.6g' % v for v in res.x_hat),
             u"chosen      %s" % list(res.chosen_set)]
    lines += [u"r_T %-20s %.6g" % (list(t), r)
              for t, r in res.r_values.items()]
    return data, lines


SIM_OPTIONS = (('f', 'f'), ('filter', 'filter'), ('fault', 'fault_type'),
               ('fault_std', 'fault_std'), ('faulty', 'faulty_agents'),
               ('iterations', 'iterations'), ('eta_c', 'eta_c'),
               ('x0', 'x0'), ('w_lower', 'w_lower'), ('w_upper', 'w_upper'),
               ('seed', 'seed'))


def _sim_config(args):
    """ Merge config file with command line overrides
    """
    data = (read_config_file(args.config) if args.config
            else AttrDict())
    for option, key in SIM_OPTIONS:
        value = getattr(args, option, None)
        if value is not None:
            data[key] = list(value) if isinstance(value, tuple) else value
    dataset = args.dataset or data.pop('dataset_path', None)
    data.pop('dataset_path', None)
    if not dataset:
        raise ValidationError("dataset is required "
                              "(--dataset or dataset_path in config)")
    return data, dataset


def cmd_simulate(args):
    config, dataset = _sim_config(args)
    if 'n' not in config:
        config['n'] = len(load_dataset(dataset, header=args.header))
    spec = ExperimentSpec(config, dataset_path=dataset, outdir=args.out,
                          header=args.header)
    record, _ = run_experiment(spec, gnuplot=args.gnuplot)
    return record.as_dict(), [record.table_row()]


def cmd_generate(args):
    seed = args.seed if args.seed is not None else 0
    ds = generate_synthetic(args.n, args.d, args.noise_std, seed=seed)
    outdir = args.out or '.'
    if not os.path.isdir(outdir):
        os.makedirs(outdir)
    csv_path = os.path.join(outdir, args.name + '.csv')
    json_path = os.path.join(outdir, args.name + '.json')
    write_dataset(csv_path, ds.costs, header=args.header)
    data = collections.OrderedDict([
        ('n', args.n),
        ('d', args.d),
        ('noise_std', args.noise_std),
        ('seed', seed),
        ('x_star', list(map(float, ds.x_star))),
        ('noise', list(map(float, ds.noise))),
        ('dataset', csv_path),
    ])
    with open(json_path, 'wt') as f:
        f.write(simplejson.dumps(data, indent=2))
        f.write('\n')
    return data, [u"dataset written to %s" % csv_path,
                  u"ground truth written to %s" % json_path]


def cmd_reproduce_table1(args):
    config, dataset = _sim_config(args)
    costs = load_dataset(dataset, header=args.header)
    config.setdefault('n', len(costs))
    records = reproduce_table1(costs, config, outdir=args.out,
                               random_seeds=range(args.random_seeds),
                               gnuplot=args.gnuplot)
    data = {'runs': [r.as_dict() for r in records]}
    return data, [r.table_row() for r in records]


def _add_dataset_args(parser, required=True):
    parser.add_argument('--dataset', required=required,
                        help="CSV file, one row 'a_1,...,a_d,b' per agent")
    parser.add_argument('--header', action='store_true',
                        help="dataset has header line")


def _add_sim_args(parser):
    parser.add_argument('--config',
                        help="YAML simulation config")
    _add_dataset_args(parser, required=False)
    parser.add_argument('--f', type=int, help="maximum number of faulty "
                                              "agents")
    parser.add_argument('--filter', choices=get_filter_names())
    parser.add_argument('--fault', help="fault type (%s)" % (
        ', '.join(get_fault_names())))
    parser.add_argument('--fault-std', type=float, dest='fault_std')
    parser.add_argument('--faulty', type=parse_ids,
                        help="comma separated ids of faulty agents")
    parser.add_argument('--iterations', type=int)
    parser.add_argument('--eta-c', type=float, dest='eta_c',
                        help="step size eta_t = c / (t + 1)")
    parser.add_argument('--x0', type=parse_vector,
                        help="initial estimate, e.g. --x0=-0.0085,-0.5643")
    parser.add_argument('--w-lower', type=float, dest='w_lower')
    parser.add_argument('--w-upper', type=float, dest='w_upper')
    parser.add_argument('--gnuplot', action='store_true',
                        help="write gnuplot script to output directory")


def build_parser():
    """ Build argument parser for all commands
    """
    common = ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help="random seed")
    common.add_argument('--out', default=None,
                        help="output directory")
    common.add_argument('--json', action='store_true',
                        help="print JSON instead of text")
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help="more logging (repeat for debug)")
    common.add_argument('-q', '--quiet', action='store_true',
                        help="log errors only")

    parser = ArgumentParser(
        prog='resilient-dgd',
        description="Approximate Byzantine fault-tolerant distributed "
                    "optimization toolkit")
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + version.version)
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('redundancy', parents=[common],
                       help="measure redundancy of dataset")
    _add_dataset_args(p)
    p.add_argument('--f', type=int, required=True)
    p.add_argument('--force', action='store_true',
                   help="allow more than 20 agents")
    p.set_defaults(func=cmd_redundancy)

    p = sub.add_parser('bounds', parents=[common],
                       help="resilience bounds of CGE and CWTM")
    _add_dataset_args(p)
    p.add_argument('--f', type=int, required=True)
    p.add_argument('--honest', type=parse_ids,
                   help="ids of honest agents (worst case if omitted)")
    p.add_argument('--samples', type=int, default=DEFAULT_LAMBDA_SAMPLES,
                   help="points sampled to estimate lambda")
    p.add_argument('--w-lower', type=float, default=-1000.0,
                   dest='w_lower')
    p.add_argument('--w-upper', type=float, default=1000.0, dest='w_upper')
    p.add_argument('--force', action='store_true')
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser('exhaustive', parents=[common],
                       help="exhaustive resilient algorithm")
    _add_dataset_args(p)
    p.add_argument('--f', type=int, required=True)
    p.add_argument('--inject', type=parse_injection, action='append',
                   help="replace cost of agent: "
                        "AGENT:a_1,...,a_d,b[;a_1,...,a_d,b]")
    p.add_argument('--force', action='store_true')
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser('simulate', parents=[common],
                       help="run DGD simulation")
    _add_sim_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('generate', parents=[common],
                       help="generate synthetic dataset")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--noise-std', type=float, default=0.1,
                   dest='noise_std')
    p.add_argument('--name', default='dataset',
                   help="base name of written files")
    p.add_argument('--header', action='store_true',
                   help="write header line")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('reproduce-table1', parents=[common],
                       help="reproduce linear regression experiment")
    _add_sim_args(p)
    p.add_argument('--random-seeds', type=int, default=10,
                   dest='random_seeds',
                   help="number of seeds for random fault runs")
    p.set_defaults(func=cmd_reproduce_table1)
    return parser


def setup_logging(verbose=0, quiet=False):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    """ Entry point of ``resilient-dgd`` script

        :param list argv: command line arguments (``sys.argv[1:]`` if None)
        :return: exit code
        :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    setup_logging(args.verbose, args.quiet)

    if args.command == 'reproduce-table1' and not (args.config or
                                                   args.dataset):
        args.config = DEFAULT_CONFIG

    try:
        data, lines = args.func(args)
    except NumericalError as exc:
        logger.debug("Numerical failure", exc_info=True)
        sys.stderr.write(u"error: %s\n" % exc)
        return EXIT_NUMERICAL
    except Error as exc:
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(u"error: %s\n" % exc)
        return EXIT_USAGE
    except (IOError, OSError) as exc:
        sys.stderr.write(u"error: %s\n" % exc)
        return EXIT_USAGE

    if args.json:
        sys.stdout.write(simplejson.dumps(data, indent=2, ignore_nan=True))
        sys.stdout.write(u'\n')
    else:
        for line in lines:
            sys.stdout.write(line + u'\n')
    return EXIT_OK


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
