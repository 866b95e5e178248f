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

"""Royden decomposition f = u + h of bounded Dirichlet-finite fields.

The harmonic part is the limit of h_n, p-harmonic on B_n(o) and equal to f
outside. Convergence is certified on a fixed observation window only.
"""

import logging
import math

from pharmonic.dirichlet import SolverConfig, solve_dirichlet
from pharmonic.energy import region_energy
from pharmonic.exceptions import NotConverged, RoydenError
from pharmonic.graph import ball
from pharmonic.util import parallel_map

log = logging.getLogger(__name__)


class FieldOracle(object):
    """A field evaluated on demand, with declared bounds [lower, upper].

    ``finite_energy`` tells whether the field has finite p-energy on the
    whole graph; None when unknown.
    """

    def __init__(self, func, lower, upper, name='field', finite_energy=None):
        if not lower <= upper:
            raise RoydenError('Empty bound [%r, %r] for %s'
                              % (lower, upper, name))
        self.func = func
        self.lower = float(lower)
        self.upper = float(upper)
        self.name = name
        self.finite_energy = finite_energy

    def __call__(self, x):
        return float(self.func(x))

    def checked(self, x):
        value = self(x)
        if not (math.isfinite(value) and self.lower <= value <= self.upper):
            raise RoydenError(
                '%s(%r) = %r lies outside the declared bound [%g, %g]'
                % (self.name, x, value, self.lower, self.upper),
                vertex=x, value=value)
        return value

    def __str__(self):
        return self.name


def constant_field(c):
    return FieldOracle(lambda x: c, c, c, name='constant:%g' % c,
                       finite_energy=True)


def dirac_field(vertex, name=None):
    return FieldOracle(lambda x: 1.0 if x == vertex else 0.0, 0.0, 1.0,
                       name=name or 'delta', finite_energy=True)


def end_indicator(g, label):
    """1 on the vertices of one end, 0 elsewhere."""
    return FieldOracle(lambda x: 1.0 if g.end_label(x) == label else 0.0,
                       0.0, 1.0, name='end:%s' % label,
                       finite_energy=g.finite_end_cuts)


class DecompositionReport(object):

    def __init__(self, field, window, harmonic, potential, radii, deltas,
                 energies, converged, window_tol, solves, last_field):
        self.field = field
        self.window = window
        self.harmonic = harmonic
        self.potential = potential
        self.radii = radii
        self.deltas = deltas
        self.energies = energies
        self.converged = converged
        self.window_tol = window_tol
        self.solves = solves
        # h_n of the largest radius on the whole ball closure
        self.last_field = last_field

    def __repr__(self):
        return '<DecompositionReport %s radii=%s converged=%s>' % (
            self.field, self.radii, self.converged)


def window_vertices(g, window):
    """An integer window means the open ball of that radius."""
    if isinstance(window, int) and not isinstance(window, bool):
        return ball(g, g.base, window).interior_order
    vertices = sorted(window)
    if not vertices:
        raise RoydenError('Observation window is empty')
    return vertices


def check_radii(radii, what='exhaustion'):
    radii = list(radii)
    if len(radii) < 2:
        raise RoydenError('An %s needs at least two radii, got %s'
                          % (what, radii))
    for a, b in zip(radii, radii[1:]):
        if b <= a:
            raise RoydenError('Radii must increase, got %d then %d' % (a, b))
    if radii[0] < 1:
        raise RoydenError('Radii must be >= 1, got %d' % radii[0])
    if len(radii) < 3:
        log.warning('Only %d radii, window convergence is weakly supported',
                    len(radii))
    return radii


def exhaust(g, boundary_value, radii, cfg, workers=1):
    """Solve on B_n(o) for every radius with data boundary_value(y, n).

    Returns (ball, SolveReport) pairs in radius order.
    """
    def solve(n):
        B = ball(g, g.base, n)
        data = {y: boundary_value(y, n) for y in B.boundary_order}
        report = solve_dirichlet(g, B, data, cfg)
        if not report.converged:
            raise NotConverged(report, 'Exhaustion solve on B_%d' % n)
        return B, report

    return parallel_map(solve, radii, workers=workers)


def sup_deltas(fields, window):
    return [max(abs(b[x] - a[x]) for x in window)
            for a, b in zip(fields, fields[1:])]


def _check_window(window, first_ball):
    outside = [x for x in window if x not in first_ball.vertices]
    if outside:
        raise RoydenError('Window vertex %r lies outside B_%d'
                          % (outside[0], first_ball.radius))


def harmonic_part(g, f, radii, window, p, cfg=None, window_tol=1e-6,
                  workers=1):
    """Exhaust f by balls and report the harmonic part on the window."""
    cfg = SolverConfig(p=p) if cfg is None else cfg.replace(p=p)
    radii = check_radii(radii)
    window = window_vertices(g, window)
    _check_window(window, ball(g, g.base, radii[0]))

    solves = exhaust(g, lambda y, n: f.checked(y), radii, cfg,
                     workers=workers)
    fields = [report.field for _, report in solves]
    slack = 10 * cfg.tol
    for (B, report) in solves:
        low = min(report.field.values())
        high = max(report.field.values())
        assert f.lower - slack <= low and high <= f.upper + slack, \
            'h_%d left the bound of %s' % (B.radius, f)

    deltas = sup_deltas(fields, window)

    # Energies of h_n, extended by f, over the largest ball
    largest = solves[-1][0]
    f_values = {x: f.checked(x) for x in sorted(largest.closure)}
    energies = []
    for field in fields:
        extended = dict(f_values)
        extended.update(field)
        energies.append(region_energy(g, extended, largest, cfg.p))
    for n, (a, b) in zip(radii[1:], zip(energies, energies[1:])):
        assert b <= a + slack * max(1.0, a), \
            'energy of h_%d exceeds the previous one for %s' % (n, f)

    harmonic = {x: fields[-1][x] for x in window}
    potential = {x: f_values[x] - harmonic[x] for x in window}
    converged = deltas[-1] < window_tol
    if converged:
        log.info('Harmonic part of %s converged on %d window vertices '
                 '(last delta %.3g)', f, len(window), deltas[-1])
    else:
        log.warning('Harmonic part of %s not converged on the window: '
                    'last delta %.3g >= %.3g', f, deltas[-1], window_tol)
    return DecompositionReport(
        field=str(f), window=window, harmonic=harmonic, potential=potential,
        radii=radii, deltas=deltas, energies=energies, converged=converged,
        window_tol=window_tol,
        solves=[report.summary() for _, report in solves],
        last_field=fields[-1])


def decompose(g, f, radii, window, p, cfg=None, window_tol=1e-6, workers=1):
    """Return (u, h, report) with u = f - h on the window."""
    report = harmonic_part(g, f, radii, window, p, cfg=cfg,
                           window_tol=window_tol, workers=workers)
    return report.potential, report.harmonic, report
