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

"""Finite surrogates for the p-harmonic boundary.

Inner potentials of massive sets, superlevel components, extension of end
values to bounded p-harmonic functions and the verdict on whether bounded
nonconstant p-harmonic functions exist. Everything is evidence at the
scale of the radii used, never a proof.
"""

from collections import OrderedDict
import logging
import math

import networkx

from pharmonic.capacity import HYPERBOLIC, PARABOLIC
from pharmonic.dirichlet import SolverConfig, solve_dirichlet
from pharmonic.exceptions import (
    ConfigError, EndError, MassiveSetError, NotConverged)
from pharmonic.graph import FiniteRegion, ball
from pharmonic.royden import (
    check_radii, end_indicator, exhaust, sup_deltas, window_vertices)
from pharmonic.util import parallel_map

log = logging.getLogger(__name__)

SUSTAINED = 'sustained'
COLLAPSING = 'collapsing'
UNDETERMINED = 'undetermined'

NONCONSTANT = 'nonconstant-found'
CONSTANTS_ONLY = 'constants-only-evidence'
INCONCLUSIVE = 'inconclusive'
# The oscillation persists but the field has infinite energy
INFINITE_ENERGY = 'infinite-energy'


class EndSpec(object):
    """Target values per end label.

    ``rule`` maps a vertex to its label and defaults to the graph's own
    end labels.
    """

    def __init__(self, values, rule=None):
        self.values = OrderedDict(values)
        if not self.values:
            raise ConfigError('At least one end value is needed')
        for label, value in self.values.items():
            if not math.isfinite(float(value)):
                raise ConfigError('End value for %s is not finite' % label)
        self.rule = rule

    @classmethod
    def parse(cls, string):
        """Parse 'a=1,b=0,A=0,B=0'."""
        values = OrderedDict()
        errors = []
        for item in string.split(','):
            label, sep, value = item.partition('=')
            label = label.strip()
            try:
                values[label] = float(value)
            except ValueError:
                errors.append('End value %r is not LABEL=NUMBER' % item)
                continue
            if not sep or not label:
                errors.append('End value %r is not LABEL=NUMBER' % item)
        if errors:
            raise ConfigError(errors)
        return cls(values)

    def label(self, g, x):
        if self.rule is not None:
            return self.rule(x)
        return g.end_label(x)

    def value(self, g, x, radius):
        label = self.label(g, x)
        if label is None:
            raise EndError(x, radius)
        try:
            return float(self.values[label])
        except KeyError:
            raise EndError(x, radius, reason='has label %r with no value'
                           % (label,))

    def __str__(self):
        return ','.join('%s=%g' % item for item in self.values.items())


class MassiveSetReport(object):

    def __init__(self, name, region, potential, raw_sups, scale, residual,
                 boundary_max, status, window, radii, persistence):
        self.name = name
        self.region = region
        self.potential = potential
        self.raw_sups = raw_sups
        self.scale = scale
        self.residual = residual
        self.boundary_max = boundary_max
        self.status = status
        self.window = window
        self.radii = radii
        self.persistence = persistence

    @property
    def sup(self):
        return max(self.potential[x] for x in self.window)

    def __repr__(self):
        return '<MassiveSetReport %s %s sups=%s>' % (
            self.name, self.status, self.raw_sups)


def inner_potential(g, U, radii, p, cfg=None, window=None, persistence=0.5,
                    name='U', workers=1):
    """Exhaust B_n(o) intersected with U, 1 on the sphere and 0 on dU.

    The last potential is rescaled so its supremum over the window (U
    inside B_window, default the smallest radius) is 1. The raw window
    suprema decide the status: 'sustained' when the last three stay at or
    above ``persistence``, 'collapsing' when they decrease below it.
    """
    cfg = SolverConfig(p=p) if cfg is None else cfg.replace(p=p)
    radii = check_radii(radii)
    if window is None:
        window = radii[0]

    def solve(n):
        B = ball(g, g.base, n)
        inside = [x for x in B.interior_order if U(x)]
        if not inside:
            raise MassiveSetError('%s does not meet B_%d' % (name, n))
        region = FiniteRegion(g, inside, check=False)
        data = {y: 1.0 if U(y) else 0.0 for y in region.boundary_order}
        if 1.0 not in data.values():
            raise MassiveSetError(
                '%s does not reach the sphere of radius %d, it looks finite'
                % (name, n))
        if 0.0 not in data.values():
            raise MassiveSetError('%s has no boundary inside B_%d'
                                  % (name, n))
        report = solve_dirichlet(g, region, data, cfg)
        if not report.converged:
            raise NotConverged(report, 'Inner potential on B_%d' % n)
        return region, report

    results = parallel_map(solve, radii, workers=workers)
    W = [x for x in window_vertices(g, window) if U(x)]
    if not W:
        raise MassiveSetError('%s does not meet the window' % name)
    missing = [x for x in W if x not in results[0][0].vertices]
    if missing:
        raise MassiveSetError('Window vertex %r lies outside B_%d'
                              % (missing[0], radii[0]))

    raw_sups = [max(report.field[x] for x in W) for _, report in results]
    region, last = results[-1]
    scale = raw_sups[-1]
    if scale <= 0:
        raise MassiveSetError('Potential of %s vanishes on the window'
                              % name)
    potential = {x: v / scale for x, v in last.field.items()}
    boundary_max = max(abs(potential[y]) for y in region.boundary
                       if not U(y))

    tail = raw_sups[-3:]
    if len(tail) == 3 and min(tail) >= persistence:
        status = SUSTAINED
    elif all(b < a for a, b in zip(tail, tail[1:])) \
            and tail[-1] < persistence:
        status = COLLAPSING
    else:
        status = UNDETERMINED
    log.info('Inner potential of %s: window sups %s, %s',
             name, ', '.join('%.6g' % s for s in raw_sups), status)
    return MassiveSetReport(
        name=name, region=region, potential=potential, raw_sups=raw_sups,
        scale=scale, residual=last.max_residual, boundary_max=boundary_max,
        status=status, window=W, radii=radii, persistence=persistence)


def sublevel_components(g, h, eps):
    """Components of {x : h(x) > eps} among the valued vertices."""
    if not 0 < eps < 1:
        raise ValueError('eps must lie in (0, 1), got %r' % (eps,))
    above = [x for x in sorted(h) if h[x] > eps]
    level = networkx.Graph()
    level.add_nodes_from(above)
    members = set(above)
    level.add_edges_from((x, y) for x in above for y in g.neighbors(x)
                         if y in members)
    components = [sorted(c) for c in networkx.connected_components(level)]
    components.sort(key=lambda c: c[0])
    return [FiniteRegion(g, c, check=False) for c in components]


class EndExtension(object):

    def __init__(self, ends, window, field, radii, deltas, converged,
                 window_tol, root_values, depth, averages, solves,
                 last_field):
        self.ends = ends
        self.window = window
        self.field = field
        self.radii = radii
        self.deltas = deltas
        self.converged = converged
        self.window_tol = window_tol
        self.root_values = root_values
        self.depth = depth
        self.averages = averages
        self.solves = solves
        self.last_field = last_field

    def __repr__(self):
        return '<EndExtension %s radii=%s converged=%s>' % (
            self.ends, self.radii, self.converged)


def extend_ends(g, ends, radii, window, p, cfg=None, depth=None,
                window_tol=1e-3, workers=1):
    """Extend end values to a p-harmonic field by exhaustion.

    Per-end averages are taken over the vertices of each end at ``depth``
    (default: largest radius - 1) of the largest ball.
    """
    cfg = SolverConfig(p=p) if cfg is None else cfg.replace(p=p)
    radii = check_radii(radii)
    if depth is None:
        depth = radii[-1] - 1
    if not 0 <= depth < radii[-1]:
        raise ConfigError('depth must lie in [0, %d), got %r'
                          % (radii[-1], depth))
    W = window_vertices(g, window)
    first = ball(g, g.base, radii[0])
    missing = [x for x in W if x not in first.vertices]
    if missing:
        raise ConfigError('Window vertex %r lies outside B_%d'
                          % (missing[0], radii[0]))

    solves = exhaust(g, lambda y, n: ends.value(g, y, n), radii, cfg,
                     workers=workers)
    fields = [report.field for _, report in solves]
    deltas = sup_deltas(fields, W)
    converged = deltas[-1] < window_tol

    largest = solves[-1][0]
    layer = largest.layers[depth] if depth < len(largest.layers) else []
    averages = OrderedDict()
    for label in ends.values:
        cone = [fields[-1][x] for x in layer if ends.label(g, x) == label]
        averages[label] = math.fsum(cone) / len(cone) if cone else None

    log.info('Extension of %s: h(o) per radius %s, deep averages %s',
             ends, ', '.join('%.6g' % f[g.base] for f in fields),
             ', '.join('%s=%s' % (label, 'n/a' if v is None else '%.4g' % v)
                       for label, v in averages.items()))
    return EndExtension(
        ends=ends, window=W, field={x: fields[-1][x] for x in W},
        radii=radii, deltas=deltas, converged=converged,
        window_tol=window_tol, root_values=[f[g.base] for f in fields],
        depth=depth, averages=averages,
        solves=[report.summary() for _, report in solves],
        last_field=fields[-1])


class VerdictConfig(object):

    def __init__(self, threshold=1e-2, window_tol=1e-3, persistence=0.5):
        errors = []
        if not threshold > 0:
            errors.append('threshold must be > 0, got %r' % (threshold,))
        if not window_tol > 0:
            errors.append('window_tol must be > 0, got %r' % (window_tol,))
        if not 0 < persistence <= 1:
            errors.append('persistence must be in (0, 1], got %r'
                          % (persistence,))
        if errors:
            raise ConfigError(errors)
        self.threshold = threshold
        self.window_tol = window_tol
        self.persistence = persistence

    def as_dict(self):
        return {'threshold': self.threshold, 'window_tol': self.window_tol,
                'persistence': self.persistence}


def default_probes(g):
    """Indicators of the graph's ends.

    With exactly two ends the indicators are complementary and one is
    enough.
    """
    labels = list(g.end_labels())
    if len(labels) == 2:
        labels = labels[:1]
    return [end_indicator(g, label) for label in labels]


def aitken(values):
    """Limit estimate from the last three values by Aitken's delta-squared,
    clamped to [0, last value]."""
    if len(values) < 3:
        return values[-1]
    a, b, c = values[-3:]
    denominator = c - 2 * b + a
    if abs(denominator) <= 1e-15 * max(abs(a), abs(b), abs(c), 1e-300):
        return c
    estimate = c - (c - b) ** 2 / denominator
    return min(max(estimate, 0.0), c)


class ProbeResult(object):

    def __init__(self, name, status, oscillations=(), extrapolated=None,
                 deltas=(), converged=False, field=None, reason=None):
        self.name = name
        self.status = status
        self.oscillations = list(oscillations)
        self.extrapolated = extrapolated
        self.deltas = list(deltas)
        self.converged = converged
        self.field = field
        self.reason = reason

    def __repr__(self):
        return '<ProbeResult %s %s>' % (self.name, self.status)


class VerdictReport(object):

    def __init__(self, verdict, witness, probes, radii, window, config):
        self.verdict = verdict
        self.witness = witness
        self.probes = probes
        self.radii = radii
        self.window = window
        self.config = config

    def __repr__(self):
        return '<VerdictReport %s>' % self.verdict


def _probe(g, probe, radii, W, cfg, config, workers):
    try:
        solves = exhaust(g, lambda y, n: probe.checked(y), radii, cfg,
                         workers=workers)
    except NotConverged as e:
        log.warning('Probe %s is inconclusive: %s', probe, e)
        return ProbeResult(probe.name, INCONCLUSIVE, reason=str(e))
    fields = [report.field for _, report in solves]
    oscillations = [max(f[x] for x in W) - min(f[x] for x in W)
                    for f in fields]
    deltas = sup_deltas(fields, W)
    extrapolated = aitken(oscillations)
    contracting = len(deltas) >= 2 and deltas[-1] < deltas[-2]
    converged = deltas[-1] < config.window_tol or contracting

    if extrapolated > config.threshold and converged:
        status = 'nonconstant'
    elif extrapolated <= config.threshold:
        status = 'constant'
    else:
        status = INCONCLUSIVE
    if status == 'nonconstant' and probe.finite_energy is False:
        log.warning('Field %s keeps its oscillation but has infinite '
                    'energy, it is not a witness', probe)
        status = INFINITE_ENERGY
    log.info('Probe %s: oscillation %s, extrapolated %.3g, %s', probe,
             ', '.join('%.4g' % o for o in oscillations), extrapolated,
             status)
    return ProbeResult(probe.name, status, oscillations, extrapolated,
                       deltas, converged, {x: fields[-1][x] for x in W})


def nonconstant_harmonic_verdict(g, probes=None, radii=None, window=None,
                                 p=2.0, cfg=None, config=None, workers=1):
    """Look for bounded nonconstant p-harmonic functions.

    Each probe is exhausted by balls; a probe whose window oscillation
    extrapolates above the threshold with a converging trace is a witness,
    unless its energy is known to be infinite.
    Oscillation decaying like 1/R extrapolates to about zero.
    """
    cfg = SolverConfig(p=p) if cfg is None else cfg.replace(p=p)
    if config is None:
        config = VerdictConfig()
    if probes is None:
        probes = default_probes(g)
    if radii is None:
        radii = g.default_radii
    if not radii:
        raise ConfigError('No radii given and %s has no default radii' % g)
    radii = check_radii(radii)
    if window is None:
        window = max(1, radii[0] // 2)
    W = window_vertices(g, window)

    results = [_probe(g, probe, radii, W, cfg, config, workers)
               for probe in probes]
    witness = None
    for result in results:
        if result.status == 'nonconstant':
            witness = result
            break
    if witness is not None:
        verdict = NONCONSTANT
    elif not results or any(r.status in ('constant', INFINITE_ENERGY)
                            for r in results):
        verdict = CONSTANTS_ONLY
    else:
        verdict = INCONCLUSIVE
    if not results:
        log.warning('%s has no probes, reporting constants only', g)
    log.info('Verdict for %s at p=%g: %s', g, cfg.p, verdict)
    return VerdictReport(verdict, witness, results, radii, W, config)


def harmonic_boundary_class(capacity_verdict, harmonic_verdict):
    """Size class of the p-harmonic boundary from the two verdicts.

    parabolic -> 'empty'; nonconstant bounded p-harmonic functions ->
    'several'; hyperbolic with constants only -> 'single'.
    """
    if capacity_verdict == PARABOLIC and harmonic_verdict == NONCONSTANT:
        log.warning('Parabolic graph with a nonconstant bounded p-harmonic '
                    'witness, the radii are too small to decide')
        return 'undetermined'
    if capacity_verdict == PARABOLIC:
        return 'empty'
    if harmonic_verdict == NONCONSTANT:
        return 'several'
    if capacity_verdict == HYPERBOLIC and harmonic_verdict == CONSTANTS_ONLY:
        return 'single'
    return 'undetermined'
