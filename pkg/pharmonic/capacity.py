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

"""p-capacities relative to exhausting balls and parabolicity verdicts.

Cap_p(A, B_n) is I_p(u, V) for the function equal to 1 on A, 0 outside
B_n and p-harmonic in between. The infinite volume capacity is the limit
of this nonincreasing sequence; the verdict on a finite stretch of it is a
heuristic whose thresholds are configuration.
"""

import logging
import math

import numpy as np

from pharmonic.dirichlet import SolverConfig, solve_dirichlet
from pharmonic.energy import dirichlet_sum
from pharmonic.exceptions import CapacityError, ConfigError, NotConverged
from pharmonic.graph import FiniteRegion, ball, outer_boundary
from pharmonic.util import parallel_map

log = logging.getLogger(__name__)

PARABOLIC = 'parabolic'
HYPERBOLIC = 'hyperbolic'
INCONCLUSIVE = 'inconclusive'


class ClassifierConfig(object):
    """Thresholds of the decay heuristic.

    parabolic: log-log slope <= ``slope`` and last value below
    ``decay_ratio`` times the first.
    hyperbolic: relative change between consecutive values among the last
    three radii below ``tail_change`` while staying above ``floor``.
    """

    def __init__(self, slope=-0.1, decay_ratio=0.5, tail_change=0.02,
                 floor=1e-6, min_points=4):
        errors = []
        if not _real(slope) or slope >= 0:
            errors.append('slope threshold must be negative, got %r'
                          % (slope,))
        if not _real(decay_ratio) or not 0 < decay_ratio < 1:
            errors.append('decay_ratio must be in (0, 1), got %r'
                          % (decay_ratio,))
        if not _real(tail_change) or tail_change <= 0:
            errors.append('tail_change must be > 0, got %r' % (tail_change,))
        if not _real(floor) or floor < 0:
            errors.append('floor must be >= 0, got %r' % (floor,))
        if not isinstance(min_points, int) or min_points < 3:
            errors.append('min_points must be an integer >= 3, got %r'
                          % (min_points,))
        if errors:
            raise ConfigError(errors)
        self.slope = slope
        self.decay_ratio = decay_ratio
        self.tail_change = tail_change
        self.floor = floor
        self.min_points = min_points

    def as_dict(self):
        return {
            'slope': self.slope,
            'decay_ratio': self.decay_ratio,
            'tail_change': self.tail_change,
            'floor': self.floor,
            'min_points': self.min_points,
        }


def _real(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(value)


class CapacitySequence(object):
    """Capacities Cap_p(A, B_n) over increasing radii.

    Values must be nonnegative and nonincreasing up to ``slack``.
    """

    def __init__(self, radii, values, A, p, slack=0.0):
        radii = [int(n) for n in radii]
        values = [float(v) for v in values]
        if len(radii) != len(values):
            raise CapacityError('%d radii but %d values'
                                % (len(radii), len(values)))
        for a, b in zip(radii, radii[1:]):
            if b <= a:
                raise CapacityError('Radii must increase, got %d then %d'
                                    % (a, b))
        for n, v in zip(radii, values):
            if not math.isfinite(v) or v < -slack:
                raise CapacityError('Capacity at radius %d is %r' % (n, v))
        for i in range(len(values) - 1):
            if values[i + 1] > values[i] + slack:
                raise CapacityError(
                    'Capacities must not increase with the radius: %.12g at '
                    'radius %d then %.12g at radius %d'
                    % (values[i], radii[i], values[i + 1], radii[i + 1]))
        self.radii = radii
        self.values = values
        self.A = frozenset(A)
        self.p = p
        self.verdict = None
        self.diagnostics = {}
        self.reports = []

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return '<CapacitySequence p=%g radii=%s verdict=%s>' % (
            self.p, self.radii, self.verdict)


def _capacity(g, A, n, cfg):
    A = frozenset(A)
    if not A:
        raise CapacityError('Capacity needs a nonempty set')
    B = ball(g, g.base, n)
    outside = sorted(a for a in A if a not in B.vertices)
    if outside:
        raise CapacityError('%r is not inside the open ball of radius %d'
                            % (outside[0], n))

    u = dict.fromkeys(A, 1.0)
    report = None
    free = B.vertices - A
    if free:
        region = FiniteRegion(g, free)
        data = {y: 1.0 if y in A else 0.0 for y in region.boundary}
        report = solve_dirichlet(g, region, data, cfg)
        if not report.converged:
            raise NotConverged(report, 'Capacity solve on B_%d' % n)
        u.update(report.field)
    # Without free vertices u is the hard cutoff of A
    support = B.vertices | B.boundary
    for y in B.boundary | outer_boundary(g, support):
        u.setdefault(y, 0.0)
    value = dirichlet_sum(g, u, support, cfg.p)
    log.info('Cap_%g on B_%d: %.12g', cfg.p, n, value)
    return value, report


def capacity_on_ball(g, A, n, p, cfg=None):
    """Cap_p(A, B_n(o)); A must lie inside the open ball."""
    cfg = _solver_config(cfg, p)
    return _capacity(g, A, n, cfg)[0]


def _solver_config(cfg, p):
    if cfg is None:
        return SolverConfig(p=p)
    if cfg.p != p:
        return cfg.replace(p=p)
    return cfg


def capacity_sequence(g, A, radii, p, cfg=None, classifier=None, workers=1):
    cfg = _solver_config(cfg, p)
    radii = list(radii)
    if not radii:
        raise CapacityError('At least one radius is needed')
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise CapacityError('Radii must be increasing, got %s' % radii)

    results = parallel_map(lambda n: _capacity(g, A, n, cfg), radii,
                           workers=workers)
    seq = CapacitySequence(radii, [value for value, _ in results], A, cfg.p,
                           slack=10 * cfg.tol)
    seq.reports = [report for _, report in results]
    seq.diagnostics = diagnose(seq, classifier)
    seq.verdict = seq.diagnostics['verdict']
    log.info('Capacity sequence for p=%g: %s', cfg.p, seq.verdict)
    return seq


def diagnose(seq, config=None):
    """Decay diagnostics of a capacity sequence, verdict included."""
    if config is None:
        config = ClassifierConfig()
    values = seq.values
    radii = seq.radii
    first, last = values[0], values[-1]
    diagnostics = {
        'heuristic': True,
        'thresholds': config.as_dict(),
        'last_value': last,
        'decay_ratio': last / first if first > 0 else None,
        'ratio_trace': [b / a if a > 0 else None
                        for a, b in zip(values, values[1:])],
        'slope': None,
        'tail_change': None,
        'message': None,
    }
    if len(values) >= 2 and all(v > 0 for v in values):
        diagnostics['slope'] = float(
            np.polyfit(np.log(radii), np.log(values), 1)[0])
    tail = values[-3:]
    if len(tail) >= 2:
        diagnostics['tail_change'] = max(
            abs(b - a) / a if a > 0 else math.inf
            for a, b in zip(tail, tail[1:]))

    if len(values) < config.min_points:
        diagnostics['message'] = (
            'Need at least %d radii to classify, got %d'
            % (config.min_points, len(values)))
        diagnostics['verdict'] = INCONCLUSIVE
        return diagnostics

    slope = diagnostics['slope']
    decayed = last < config.decay_ratio * first
    if decayed and (last <= config.floor or
                    (slope is not None and slope <= config.slope)):
        verdict = PARABOLIC
    elif diagnostics['tail_change'] < config.tail_change \
            and last > config.floor:
        verdict = HYPERBOLIC
    else:
        verdict = INCONCLUSIVE
        diagnostics['message'] = 'Neither decay nor a stable tail is visible'
    diagnostics['verdict'] = verdict
    return diagnostics


def classify(seq, config=None):
    """parabolic, hyperbolic or inconclusive; see ClassifierConfig."""
    return diagnose(seq, config)['verdict']
