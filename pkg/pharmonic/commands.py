"""Encapsulates each pipeline the command line can run"""

import logging

from pharmonic import boundary, capacity, dirichlet, royden
from pharmonic import output

log = logging.getLogger(__name__)


class Command(object):
    """Base for commands: execute() returns an output document and leaves
    per-radius rows in ``self.rows`` for CSV output."""

    name = None
    csv_header = None

    def __init__(self, graph, solver, run_config=None, workers=1):
        self.graph = graph
        self.solver = solver
        self.run_config = dict(run_config or {})
        self.workers = workers
        self.rows = None
        self.warnings = []

    def fmt(self, x):
        return self.graph.format_vertex(x)

    def vertex_map(self, field):
        return {self.fmt(x): v for x, v in sorted(field.items())}

    def document(self, traces, result, verdict=None):
        config = dict(self.run_config)
        config['command'] = self.name
        config['graph'] = str(self.graph)
        config['solver'] = self.solver.as_dict()
        return output.document(config, traces, result, verdict=verdict,
                               warnings=self.warnings)

    def execute(self):
        raise NotImplementedError


class SolveCommand(Command):

    name = 'solve'

    def __init__(self, graph, solver, region, boundary_values, **kwargs):
        super(SolveCommand, self).__init__(graph, solver, **kwargs)
        self.region = region
        self.boundary_values = boundary_values

    def execute(self):
        report = dirichlet.solve_dirichlet(
            self.graph, self.region, self.boundary_values, self.solver)
        if not report.converged:
            self.warnings.append(
                'not converged: residual %.3g > %.3g after %d sweeps'
                % (report.max_residual, report.tol, report.sweeps))
        traces = {
            'energy': report.energy_trace,
            'residual': report.residual_trace,
            'warm_start_energy': report.warm_start_trace,
        }
        result = report.summary()
        result['field'] = self.vertex_map(report.field)
        result['region_size'] = len(self.region)
        result['boundary_size'] = len(self.region.boundary)
        return self.document(traces, result)

    def __str__(self):
        return 'Solve p=%g on %d vertices of %s' % (
            self.solver.p, len(self.region), self.graph)


class CapacityCommand(Command):

    name = 'capacity'
    csv_header = ['radius', 'capacity', 'ratio']

    def __init__(self, graph, solver, A, radii, classifier, **kwargs):
        super(CapacityCommand, self).__init__(graph, solver, **kwargs)
        self.A = A
        self.radii = radii
        self.classifier = classifier

    def execute(self):
        seq = capacity.capacity_sequence(
            self.graph, self.A, self.radii, self.solver.p, self.solver,
            classifier=self.classifier, workers=self.workers)
        if seq.diagnostics['message']:
            self.warnings.append(seq.diagnostics['message'])
        self.warnings.append('verdict thresholds are heuristic')
        ratios = [None] + seq.diagnostics['ratio_trace']
        self.rows = [[n, v, r] for n, v, r in zip(seq.radii, seq.values,
                                                   ratios)]
        traces = {
            'radii': seq.radii,
            'capacity': seq.values,
            'sweeps': [r.sweeps if r is not None else 0
                       for r in seq.reports],
        }
        result = {
            'set': sorted(self.fmt(a) for a in seq.A),
            'p': seq.p,
            'values': seq.values,
            'diagnostics': seq.diagnostics,
        }
        return self.document(traces, result, verdict=seq.verdict)

    def __str__(self):
        return 'Capacity of %s for p=%g on %s, radii %s' % (
            ','.join(sorted(self.fmt(a) for a in self.A)), self.solver.p,
            self.graph, self.radii)


class ClassifyCommand(CapacityCommand):

    name = 'classify'

    def __str__(self):
        return 'Classify %s for p=%g, radii %s' % (
            self.graph, self.solver.p, self.radii)


class DecomposeCommand(Command):

    name = 'decompose'
    csv_header = ['radius', 'delta', 'energy']

    def __init__(self, graph, solver, field, radii, window, window_tol,
                 epsilon=None, **kwargs):
        super(DecomposeCommand, self).__init__(graph, solver, **kwargs)
        self.field = field
        self.radii = radii
        self.window = window
        self.window_tol = window_tol
        self.epsilon = epsilon

    def execute(self):
        u, h, report = royden.decompose(
            self.graph, self.field, self.radii, self.window, self.solver.p,
            cfg=self.solver, window_tol=self.window_tol,
            workers=self.workers)
        if not report.converged:
            self.warnings.append(
                'window not converged: last delta %.3g >= %.3g'
                % (report.deltas[-1], self.window_tol))
        self.rows = [[n, d, e] for n, d, e in zip(
            report.radii, [None] + report.deltas, report.energies)]
        traces = {'radii': report.radii, 'deltas': report.deltas,
                  'energies': report.energies, 'solves': report.solves}
        result = {
            'field': report.field,
            'harmonic': self.vertex_map(h),
            'potential': self.vertex_map(u),
            'converged': report.converged,
        }
        if self.epsilon is not None:
            components = boundary.sublevel_components(
                self.graph, report.last_field, self.epsilon)
            result['components'] = [
                {'size': len(c), 'first': self.fmt(c.interior_order[0])}
                for c in components]
        return self.document(traces, result)

    def __str__(self):
        return 'Decompose %s for p=%g, radii %s, window %s' % (
            self.field, self.solver.p, self.radii, self.window)


class PotentialCommand(Command):

    name = 'potential'
    csv_header = ['radius', 'window_sup']

    def __init__(self, graph, solver, predicate, region_name, radii, window,
                 persistence, **kwargs):
        super(PotentialCommand, self).__init__(graph, solver, **kwargs)
        self.predicate = predicate
        self.region_name = region_name
        self.radii = radii
        self.window = window
        self.persistence = persistence

    def execute(self):
        report = boundary.inner_potential(
            self.graph, self.predicate, self.radii, self.solver.p,
            cfg=self.solver, window=self.window,
            persistence=self.persistence, name=self.region_name,
            workers=self.workers)
        self.rows = [[n, s] for n, s in zip(report.radii, report.raw_sups)]
        traces = {'radii': report.radii, 'window_sup': report.raw_sups}
        result = {
            'region': report.name,
            'scale': report.scale,
            'residual': report.residual,
            'boundary_max': report.boundary_max,
            'potential': self.vertex_map(
                {x: report.potential[x] for x in report.window}),
        }
        return self.document(traces, result, verdict=report.status)

    def __str__(self):
        return 'Inner potential of %s for p=%g, radii %s' % (
            self.region_name, self.solver.p, self.radii)


class ExtendCommand(Command):

    name = 'extend'
    csv_header = ['radius', 'root_value', 'delta']

    def __init__(self, graph, solver, ends, radii, window, window_tol,
                 depth=None, **kwargs):
        super(ExtendCommand, self).__init__(graph, solver, **kwargs)
        self.ends = ends
        self.radii = radii
        self.window = window
        self.window_tol = window_tol
        self.depth = depth

    def execute(self):
        ext = boundary.extend_ends(
            self.graph, self.ends, self.radii, self.window, self.solver.p,
            cfg=self.solver, depth=self.depth, window_tol=self.window_tol,
            workers=self.workers)
        if not ext.converged:
            self.warnings.append(
                'window not converged: last delta %.3g >= %.3g'
                % (ext.deltas[-1], self.window_tol))
        self.rows = [[n, r, d] for n, r, d in zip(
            ext.radii, ext.root_values, [None] + ext.deltas)]
        traces = {'radii': ext.radii, 'root_value': ext.root_values,
                  'deltas': ext.deltas, 'solves': ext.solves}
        result = {
            'ends': dict(ext.ends.values),
            'field': self.vertex_map(ext.field),
            'root_value': ext.root_values[-1],
            'depth': ext.depth,
            'averages': dict(ext.averages),
            'converged': ext.converged,
        }
        return self.document(traces, result)

    def __str__(self):
        return 'Extend ends %s for p=%g, radii %s' % (
            self.ends, self.solver.p, self.radii)


class VerdictCommand(Command):

    name = 'verdict'

    def __init__(self, graph, solver, radii, window, verdict_config,
                 **kwargs):
        super(VerdictCommand, self).__init__(graph, solver, **kwargs)
        self.radii = radii
        self.window = window
        self.verdict_config = verdict_config

    def _run(self):
        return boundary.nonconstant_harmonic_verdict(
            self.graph, radii=self.radii, window=self.window,
            p=self.solver.p, cfg=self.solver, config=self.verdict_config,
            workers=self.workers)

    def _probe_results(self, report):
        return [{
            'probe': r.name,
            'status': r.status,
            'oscillations': r.oscillations,
            'extrapolated': r.extrapolated,
            'deltas': r.deltas,
            'converged': r.converged,
            'reason': r.reason,
        } for r in report.probes]

    def execute(self):
        report = self._run()
        self.warnings.append('evidence at the scale of the radii used')
        self.csv_header = ['radius'] + [r.name for r in report.probes]
        self.rows = [
            [n] + [r.oscillations[i] if r.oscillations else None
                   for r in report.probes]
            for i, n in enumerate(report.radii)]
        traces = {'radii': report.radii,
                  'probes': self._probe_results(report)}
        result = {'thresholds': report.config.as_dict(), 'witness': None}
        if report.witness is not None:
            result['witness'] = {
                'probe': report.witness.name,
                'oscillation': report.witness.oscillations[-1],
                'field': self.vertex_map(report.witness.field),
            }
        return self.document(traces, result, verdict=report.verdict)

    def __str__(self):
        return 'Nonconstant harmonic verdict on %s for p=%g' % (
            self.graph, self.solver.p)


class BoundaryCommand(VerdictCommand):

    name = 'boundary'

    def __init__(self, graph, solver, A, capacity_radii, radii, window,
                 classifier, verdict_config, **kwargs):
        super(BoundaryCommand, self).__init__(
            graph, solver, radii, window, verdict_config, **kwargs)
        self.A = A
        self.capacity_radii = capacity_radii
        self.classifier = classifier

    def execute(self):
        seq = capacity.capacity_sequence(
            self.graph, self.A, self.capacity_radii, self.solver.p,
            self.solver, classifier=self.classifier, workers=self.workers)
        report = self._run()
        size_class = boundary.harmonic_boundary_class(
            seq.verdict, report.verdict)
        self.warnings.append('evidence at the scale of the radii used')
        traces = {'capacity_radii': seq.radii, 'capacity': seq.values,
                  'radii': report.radii,
                  'probes': self._probe_results(report)}
        result = {'capacity_verdict': seq.verdict,
                  'harmonic_verdict': report.verdict}
        return self.document(traces, result, verdict=size_class)

    def __str__(self):
        return 'Harmonic boundary class of %s for p=%g' % (
            self.graph, self.solver.p)
