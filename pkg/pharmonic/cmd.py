#!/usr/bin/env python3
#
# Copyright 2026 pharmonic contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
#     Unless required by applicable law or agreed to in writing, software
#     distributed under the License is distributed on an "AS IS" BASIS,
#     WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#     See the License for the specific language governing permissions and
#     limitations under the License.

import argparse
import logging
import math
import sys

import yaml

import pharmonic
import pharmonic.commands
from pharmonic import output
from pharmonic.boundary import EndSpec, VerdictConfig
from pharmonic.capacity import ClassifierConfig
from pharmonic.dirichlet import INITS, METHODS, ORDERINGS, SolverConfig
from pharmonic.exceptions import ConfigError, PharmonicError
from pharmonic.graph import FiniteRegion, GraphFamilySpec, ball, cayley
from pharmonic.royden import (
    FieldOracle, constant_field, dirac_field, end_indicator)

# Run settings that only steer input/output, left out of documents
IO_ONLY = ('config', 'dry_run', 'out', 'verbose')


class _Checker(object):
    """Converts raw option values, collecting every error."""

    def __init__(self):
        self.errors = []

    def number(self, name, value, check=None, message=None, integer=False):
        if value is None:
            return None
        try:
            if integer:
                if isinstance(value, float) or isinstance(value, bool):
                    raise ValueError
                converted = int(value)
            else:
                converted = float(value)
                if not math.isfinite(converted):
                    raise ValueError
        except (TypeError, ValueError):
            self.errors.append('--%s: expected %s, got %r' % (
                name, 'an integer' if integer else 'a number', value))
            return None
        if check is not None and not check(converted):
            self.errors.append('--%s: %s, got %r' % (name, message, value))
            return None
        return converted

    def radii(self, name, value, required=True):
        if value is None:
            if required:
                self.errors.append('--%s is required' % name)
            return None
        items = value if isinstance(value, list) else str(value).split(',')
        radii = []
        for item in items:
            n = self.number(name, item, lambda n: n >= 1,
                            'radii must be >= 1', integer=True)
            if n is None:
                return None
            radii.append(n)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            self.errors.append('--%s: radii must increase, got %s'
                               % (name, radii))
            return None
        return radii

    def config(self, factory, **kwargs):
        """Build a config object, leaving unconverted values at defaults."""
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        try:
            return factory(**kwargs)
        except ConfigError as e:
            self.errors.extend(e.errors)
            return None


class PharmonicCmd(object):

    log = logging.getLogger('pharmonic.cmd')
    csv_commands = ['capacity', 'classify', 'decompose', 'potential',
                    'extend', 'verdict']

    def __init__(self):
        self.subparsers = {}
        self.config_command = None

    def parse_arguments(self, args=sys.argv[1:]):
        args = list(args)
        parser = self.get_arg_parser()
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument('--config')
        known, _ = pre.parse_known_args(args)
        if known.config:
            self.apply_config_file(known.config)
        parsed = parser.parse_args(args)
        if self.config_command not in (None, parsed.command):
            raise ConfigError('%s replays a %s run, not %s' % (
                known.config, self.config_command, parsed.command))
        return parsed

    def apply_config_file(self, path):
        """Use a YAML or JSON mapping of option names as parser defaults.

        An output document, or its config block, replays its run: solver
        settings fill the options they resolve and the echoed graph name
        is skipped.
        """
        try:
            with open(path, encoding='utf-8') as f:
                settings = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError('Can not read config file %s: %s' % (path, e))
        if not isinstance(settings, dict):
            raise ConfigError('Config file %s must hold a mapping' % path)
        if isinstance(settings.get('config'), dict):
            settings = settings['config']
        settings = {str(k).replace('-', '_'): v for k, v in settings.items()}

        self.config_command = settings.pop('command', None)
        if self.config_command is not None:
            settings.pop('graph', None)
        elif 'graph' in settings:
            settings['graph_file'] = settings.pop('graph')
        solver = settings.pop('solver', None)
        if solver is not None:
            if not isinstance(solver, dict):
                raise ConfigError('solver in %s must hold a mapping' % path)
            for key, value in solver.items():
                settings.setdefault(str(key).replace('-', '_'), value)

        known = {action.dest for sub in self.subparsers.values()
                 for action in sub._actions}
        unknown = sorted(set(settings) - known)
        if unknown:
            raise ConfigError(['Unknown setting %r in %s' % (key, path)
                               for key in unknown])
        for sub in self.subparsers.values():
            sub.set_defaults(**settings)
        self.log.debug('Loaded defaults from %s', path)

    def get_arg_parser(self):
        """
        Parse arguments
        """
        common = argparse.ArgumentParser(add_help=False)
        graph_args = common.add_argument_group('graph')
        graph_args.add_argument(
            '--family', default='zn',
            choices=['zn', 'free', 'product', 'edgelist'],
            help='Graph family. Default: zn')
        graph_args.add_argument(
            '--dim', default=1,
            help='Dimension of Z^n. Default: 1')
        graph_args.add_argument(
            '--rank', default=2,
            help='Rank of the free group. Default: 2')
        graph_args.add_argument(
            '--factors', default='free:2,zn:1', metavar='SPEC,SPEC',
            help='Factors of a product, each zn:DIM, free:RANK or '
                 'edgelist:PATH. Default: free:2,zn:1')
        graph_args.add_argument(
            '--graph', dest='graph_file', default=None, metavar='PATH',
            help='Edge list file; implies --family edgelist')

        solver_args = common.add_argument_group('solver')
        solver_args.add_argument(
            '--p', default=2.0,
            help='Exponent p > 1. Default: 2')
        solver_args.add_argument(
            '--tol', default=None,
            help='Residual tolerance on max |Delta_p|. '
                 'Default: 1e-10 for p = 2, 1e-8 otherwise')
        solver_args.add_argument(
            '--max-sweeps', default=5000,
            help='Coordinate sweeps before giving up. Default: 5000')
        solver_args.add_argument(
            '--scalar-tol', default=1e-14,
            help='Tolerance of the per-vertex root finding. Default: 1e-14')
        solver_args.add_argument(
            '--ordering', default='red-black', choices=ORDERINGS,
            help='Vertex update order. Default: red-black')
        solver_args.add_argument(
            '--init', default='mean', choices=INITS,
            help='Initial interior values. Default: mean')
        solver_args.add_argument(
            '--method', default='auto', choices=METHODS,
            help='auto adds a linear or Picard warm start before the '
                 'coordinate sweeps. Default: auto')
        solver_args.add_argument(
            '--max-picard', default=100,
            help='Picard warm start steps. Default: 100')
        solver_args.add_argument(
            '--seed', default=0,
            help='Seed for random initialization. Default: 0')

        common.add_argument(
            '--workers', default=1,
            help='Independent solves to run concurrently. Default: 1')
        common.add_argument(
            '--out', default=None, metavar='PATH',
            help='Write the document there instead of stdout')
        common.add_argument(
            '--format', default='json', choices=['json', 'csv'],
            help='Document format; csv only for per-radius sequences. '
                 'Default: json')
        common.add_argument(
            '--config', default=None, metavar='PATH',
            help='YAML or JSON file of option defaults, keyed by option '
                 'name')
        common.add_argument(
            '-n', '--dry-run', action='store_true',
            help='Stop before executing any commands.')
        common.add_argument(
            '-v', '--verbose', action='store_true',
            help='Log solver progress')

        parser = argparse.ArgumentParser(
            description='pharmonic: discrete nonlinear potential theory on '
                        'bounded-degree graphs',
            prog='pharmonic',
            )
        parser.add_argument(
            '--version', action='version',
            version='%(prog)s ' + pharmonic.__version__)
        sub = parser.add_subparsers(dest='command', metavar='COMMAND')
        sub.required = True

        def add(name, help):
            self.subparsers[name] = sub.add_parser(
                name, parents=[common], help=help, description=help)
            return self.subparsers[name]

        def set_arg(p, default='origin'):
            p.add_argument(
                '--set', default=default, metavar='VERTEX[;VERTEX ...]',
                help='Finite set A, semicolon separated vertices. '
                     'Default: origin')

        def classifier_args(p):
            group = p.add_argument_group('classifier')
            group.add_argument('--slope', default=-0.1,
                               help='Parabolic log-log slope. Default: -0.1')
            group.add_argument('--decay-ratio', default=0.5,
                               help='Parabolic last/first ratio. '
                                    'Default: 0.5')
            group.add_argument('--tail-change', default=0.02,
                               help='Hyperbolic relative tail change. '
                                    'Default: 0.02')
            group.add_argument('--floor', default=1e-6,
                               help='Hyperbolic positive floor. '
                                    'Default: 1e-6')

        def window_args(p, window, window_tol):
            p.add_argument('--window', default=window,
                           help='Observation window radius. Default: %s'
                           % window)
            p.add_argument('--window-tol', default=window_tol,
                           help='Window sup-delta tolerance. Default: %s'
                           % window_tol)

        def verdict_args(p):
            p.add_argument('--threshold', default=1e-2,
                           help='Oscillation that counts as nonconstant. '
                                'Default: 1e-2')
            p.add_argument('--persistence', default=0.5,
                           help='Window sup an inner potential must keep. '
                                'Default: 0.5')

        p = add('solve', 'Solve a p-harmonic Dirichlet problem')
        p.add_argument('--radius', default=None,
                       help='Solve on the ball of that radius around the '
                            'base vertex')
        p.add_argument('--ends', default=None, metavar='LABEL=VALUE,...',
                       help='Sphere data by end label, with --radius')
        p.add_argument('--boundary', default=None,
                       metavar='VERTEX=VALUE[;VERTEX=VALUE ...]',
                       help='Explicit boundary data on a finite graph; the '
                            'region is every other vertex')

        for name, help in (
                ('capacity', 'Capacities of a set over exhausting balls'),
                ('classify', 'p-parabolic or p-hyperbolic verdict')):
            p = add(name, help)
            set_arg(p)
            p.add_argument('--radii', default=None, metavar='N,N,...',
                           help='Increasing ball radii')
            classifier_args(p)

        p = add('decompose', 'Royden decomposition of a bounded field')
        p.add_argument('--field', default='delta',
                       help='delta[:VERTEX], constant:C or end:LABEL. '
                            'Default: delta')
        p.add_argument('--radii', default=None, metavar='N,N,...',
                       help='Increasing exhaustion radii')
        window_args(p, 3, 1e-6)
        p.add_argument('--epsilon', default=None,
                       help='Also report components of {h > epsilon}')

        p = add('potential', 'Inner potential of a massive set')
        p.add_argument('--region', default=None, metavar='end:LABEL',
                       help='The set U. Default: the first end')
        p.add_argument('--radii', default=None, metavar='N,N,...',
                       help='Increasing exhaustion radii')
        window_args(p, None, 1e-3)
        verdict_args(p)

        p = add('extend', 'Extend end values to a p-harmonic function')
        p.add_argument('--ends', default=None, metavar='LABEL=VALUE,...',
                       help='Target value per end label')
        p.add_argument('--radii', default=None, metavar='N,N,...',
                       help='Increasing exhaustion radii')
        window_args(p, 3, 1e-3)
        p.add_argument('--depth', default=None,
                       help='Depth of the per-end averages. '
                            'Default: largest radius - 1')

        p = add('verdict', 'Look for bounded nonconstant p-harmonic '
                           'functions')
        p.add_argument('--radii', default=None, metavar='N,N,...',
                       help='Exhaustion radii. Default: family specific')
        window_args(p, None, 1e-3)
        verdict_args(p)

        p = add('boundary', 'Size class of the p-harmonic boundary')
        set_arg(p)
        p.add_argument('--capacity-radii', default=None, metavar='N,N,...',
                       help='Radii of the capacity sequence')
        p.add_argument('--radii', default=None, metavar='N,N,...',
                       help='Exhaustion radii. Default: family specific')
        window_args(p, None, 1e-3)
        verdict_args(p)
        classifier_args(p)

        return parser

    def build_graph(self, args, check):
        before = len(check.errors)
        if args.graph_file:
            spec = GraphFamilySpec('edgelist', path=args.graph_file)
        elif args.family == 'zn':
            spec = GraphFamilySpec('zn', dim=check.number(
                'dim', args.dim, lambda n: n >= 1, 'must be >= 1',
                integer=True))
        elif args.family == 'free':
            spec = GraphFamilySpec('free', rank=check.number(
                'rank', args.rank, lambda n: 1 <= n <= 26,
                'must be in 1..26', integer=True))
        elif args.family == 'product':
            factors = args.factors
            if isinstance(factors, str):
                factors = factors.split(',')
            try:
                spec = GraphFamilySpec('product', factors=[
                    GraphFamilySpec.parse(f) for f in factors])
            except ConfigError as e:
                check.errors.extend(e.errors)
                return None
        else:
            check.errors.append('--family edgelist needs --graph PATH')
            return None
        errors = spec.validate()
        if errors:
            if len(check.errors) == before:
                check.errors.extend(errors)
            return None
        return cayley(spec)

    def _vertices(self, graph, value, check, name):
        items = value if isinstance(value, list) else str(value).split(';')
        vertices = []
        for item in items:
            try:
                vertices.append(graph.parse_vertex(str(item)))
            except PharmonicError as e:
                check.errors.append('--%s: %s' % (name, e))
        return vertices

    def _field(self, graph, value, check):
        kind, _, param = str(value).partition(':')
        if kind == 'delta':
            vertex = graph.base
            if param:
                found = self._vertices(graph, param, check, 'field')
                vertex = found[0] if found else graph.base
            return dirac_field(vertex, name=value)
        if kind == 'constant':
            c = check.number('field', param)
            return None if c is None else constant_field(c)
        if kind == 'end':
            if param not in graph.end_labels():
                check.errors.append('--field: %s has no end %r'
                                    % (graph, param))
                return None
            return end_indicator(graph, param)
        check.errors.append(
            '--field: expected delta[:VERTEX], constant:C or end:LABEL, '
            'got %r' % value)
        return None

    def _ends(self, value, check, name='ends'):
        if value is None:
            check.errors.append('--%s is required' % name)
            return None
        if isinstance(value, dict):
            value = ','.join('%s=%s' % item for item in value.items())
        try:
            return EndSpec.parse(str(value))
        except ConfigError as e:
            check.errors.extend('--%s: %s' % (name, m) for m in e.errors)
            return None

    def _solve_problem(self, graph, args, check):
        """Region and boundary data for the solve command."""
        if args.boundary is not None:
            if not graph.finite:
                check.errors.append('--boundary needs a finite --graph')
                return None, None
            data = {}
            for item in str(args.boundary).split(';'):
                vertex, sep, value = item.partition('=')
                if not sep:
                    check.errors.append(
                        '--boundary: expected VERTEX=VALUE, got %r' % item)
                    continue
                found = self._vertices(graph, vertex, check, 'boundary')
                number = check.number('boundary', value)
                if found and number is not None:
                    data[found[0]] = number
            rest = [x for x in graph.vertices() if x not in data]
            if not data or not rest:
                check.errors.append(
                    '--boundary must leave at least one free vertex')
                return None, None
            return FiniteRegion(graph, rest), data

        radius = check.number('radius', args.radius, lambda n: n >= 1,
                              'must be >= 1', integer=True)
        if args.radius is None:
            check.errors.append('solve needs --radius or --boundary')
        ends = self._ends(args.ends, check)
        if radius is None or ends is None or check.errors:
            return None, None
        region = ball(graph, graph.base, radius)
        if not region.boundary:
            check.errors.append('The ball of radius %d has no boundary'
                                % radius)
            return None, None
        data = {y: ends.value(graph, y, radius)
                for y in region.boundary_order}
        return region, data

    def build_execution_plan(self, args):
        self.args = args
        check = _Checker()
        graph = self.build_graph(args, check)

        p = check.number('p', args.p, lambda p: p > 1, 'must be > 1')
        solver = check.config(
            SolverConfig, p=p,
            tol=check.number('tol', args.tol),
            max_sweeps=check.number('max-sweeps', args.max_sweeps,
                                    integer=True),
            scalar_tol=check.number('scalar-tol', args.scalar_tol),
            ordering=args.ordering, init=args.init, method=args.method,
            max_picard=check.number('max-picard', args.max_picard,
                                    integer=True),
            seed=check.number('seed', args.seed, integer=True))
        workers = check.number('workers', args.workers, lambda n: n >= 1,
                               'must be >= 1', integer=True)
        if args.format == 'csv' and args.command not in self.csv_commands:
            check.errors.append('--format csv is only available for %s'
                                % ', '.join(self.csv_commands))
        if graph is None:
            raise ConfigError(check.errors)
        # Keep going so command settings are reported in the same error
        if solver is None:
            solver = SolverConfig()

        run_config = {k: v for k, v in sorted(vars(args).items())
                      if k not in IO_ONLY}
        common = dict(run_config=run_config, workers=workers or 1)
        command = self._build_command(args, graph, solver, check, common)
        if check.errors:
            raise ConfigError(check.errors)
        return [command]

    def _classifier(self, args, check):
        return check.config(
            ClassifierConfig,
            slope=check.number('slope', args.slope),
            decay_ratio=check.number('decay-ratio', args.decay_ratio),
            tail_change=check.number('tail-change', args.tail_change),
            floor=check.number('floor', args.floor))

    def _verdict_config(self, args, check):
        return check.config(
            VerdictConfig,
            threshold=check.number('threshold', args.threshold),
            window_tol=check.number('window-tol', args.window_tol),
            persistence=check.number('persistence', args.persistence))

    def _window(self, args, check):
        return check.number('window', args.window, lambda n: n >= 1,
                            'must be >= 1', integer=True)

    def _build_command(self, args, graph, solver, check, common):
        name = args.command
        if name == 'solve':
            region, data = self._solve_problem(graph, args, check)
            return pharmonic.commands.SolveCommand(
                graph, solver, region, data, **common)

        if name in ('capacity', 'classify'):
            cls = (pharmonic.commands.CapacityCommand if name == 'capacity'
                   else pharmonic.commands.ClassifyCommand)
            return cls(graph, solver,
                       self._vertices(graph, args.set, check, 'set'),
                       check.radii('radii', args.radii),
                       self._classifier(args, check), **common)

        if name == 'decompose':
            epsilon = check.number('epsilon', args.epsilon,
                                   lambda e: 0 < e < 1, 'must be in (0, 1)')
            return pharmonic.commands.DecomposeCommand(
                graph, solver, self._field(graph, args.field, check),
                check.radii('radii', args.radii), self._window(args, check),
                check.number('window-tol', args.window_tol,
                             lambda t: t > 0, 'must be > 0'),
                epsilon=epsilon, **common)

        if name == 'potential':
            labels = graph.end_labels()
            region = args.region or ('end:%s' % labels[0] if labels else '')
            kind, _, label = region.partition(':')
            if kind != 'end' or label not in labels:
                check.errors.append('--region: expected end:LABEL with a '
                                    'label of %s, got %r' % (graph, region))
                predicate = None
            else:
                predicate = FieldOracle(
                    lambda x: graph.end_label(x) == label, 0, 1, region)
            verdict_config = self._verdict_config(args, check)
            return pharmonic.commands.PotentialCommand(
                graph, solver, predicate, region,
                check.radii('radii', args.radii), self._window(args, check),
                verdict_config.persistence if verdict_config else None,
                **common)

        if name == 'extend':
            return pharmonic.commands.ExtendCommand(
                graph, solver, self._ends(args.ends, check),
                check.radii('radii', args.radii), self._window(args, check),
                check.number('window-tol', args.window_tol,
                             lambda t: t > 0, 'must be > 0'),
                depth=check.number('depth', args.depth, lambda d: d >= 0,
                                   'must be >= 0', integer=True),
                **common)

        radii = check.radii('radii', args.radii, required=False)
        if radii is None and not graph.default_radii:
            check.errors.append('--radii is required for %s' % graph)
        if name == 'verdict':
            return pharmonic.commands.VerdictCommand(
                graph, solver, radii, self._window(args, check),
                self._verdict_config(args, check), **common)

        return pharmonic.commands.BoundaryCommand(
            graph, solver, self._vertices(graph, args.set, check, 'set'),
            check.radii('capacity-radii', args.capacity_radii), radii,
            self._window(args, check), self._classifier(args, check),
            self._verdict_config(args, check), **common)

    def write(self, command, doc):
        if self.args.format == 'csv':
            text = output.dumps_csv(command.csv_header, command.rows)
        else:
            text = output.dumps_json(doc)
        if self.args.out:
            with open(self.args.out, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            self.log.info('Wrote %s', self.args.out)
        else:
            sys.stdout.write(text)

    def execute(self, plan):
        self.log.debug("Execution plan:")
        for cmd in plan:
            self.log.debug(cmd)
        if self.args.dry_run:
            return
        for command in plan:
            self.log.info(command)
            doc = command.execute()
            self.write(command, doc)


def get_arg_parser():
    """
    Build an argparser with sane default values.

    Intended for documentation generation with sphinx-argparse.
    """
    return PharmonicCmd().get_arg_parser()


def main(argv=None):
    logging.basicConfig(level=logging.INFO)
    pharmonic.colored_logging()

    cmd = PharmonicCmd()
    try:
        args = cmd.parse_arguments(sys.argv[1:] if argv is None else argv)
        if args.verbose:
            logging.getLogger('pharmonic').setLevel(logging.DEBUG)
        plan = cmd.build_execution_plan(args)
        cmd.execute(plan)
    except ConfigError as e:
        cmd.log.error('%s', e)
        sys.stdout.write(output.dumps_json(output.error_document(e)))
        return 2
    except PharmonicError as e:
        cmd.log.error('%s', e)
        sys.stdout.write(output.dumps_json(output.error_document(e)))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
