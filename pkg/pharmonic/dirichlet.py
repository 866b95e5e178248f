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

"""p-harmonic Dirichlet problems on finite regions.

The solution minimizes the region energy (every edge touching S counted
from both ends) among fields equal to the boundary data on the outer
boundary. Minimization is cyclic coordinate descent: each update solves
the scalar equation

    sum_y sign(f(y) - t) |f(y) - t|^(p-1) = 0

whose left side is continuous and strictly decreasing in t, with its root
between the smallest and largest neighbor value. The ``sorted`` ordering
updates one vertex at a time with Brent's method; ``red-black`` updates
whole color classes of non-adjacent vertices at once by vectorized
bisection.

With ``method='auto'`` the sweeps are preceded by a warm start: the exact
sparse linear solve when p = 2, lagged diffusivity (Picard) steps with an
exact line search otherwise. Sweeps then certify the residual with the
unregularized p-Laplacian.
"""

import logging
import math

import networkx
import numpy as np
from scipy import optimize, sparse
from scipy.sparse.linalg import spsolve

from pharmonic.energy import check_exponent, p_laplacian
from pharmonic.exceptions import (
    ConfigError, DirichletError, ExponentError, GraphError)

log = logging.getLogger(__name__)

ORDERINGS = ('red-black', 'sorted')
INITS = ('mean', 'random', 'harmonic')
METHODS = ('auto', 'coordinate')


def default_tol(p):
    return 1e-10 if p == 2 else 1e-8


class SolverConfig(object):
    """Dirichlet solver settings; every invalid field is reported at once."""

    def __init__(self, p=2.0, tol=None, max_sweeps=5000, scalar_tol=1e-14,
                 ordering='red-black', init='mean', seed=0, method='auto',
                 max_picard=100):
        self._params = dict(p=p, tol=tol, max_sweeps=max_sweeps,
                            scalar_tol=scalar_tol, ordering=ordering,
                            init=init, seed=seed, method=method,
                            max_picard=max_picard)
        errors = []
        try:
            self.p = check_exponent(p)
        except ExponentError as e:
            errors.append(str(e))
            self.p = None

        if tol is None and self.p is not None:
            tol = default_tol(self.p)
        self.tol = tol
        if tol is not None and not _positive(tol):
            errors.append('tol must be > 0, got %r' % (tol,))
        self.max_sweeps = max_sweeps
        if not _integer(max_sweeps) or max_sweeps < 1:
            errors.append('max_sweeps must be an integer >= 1, got %r'
                          % (max_sweeps,))
        self.scalar_tol = scalar_tol
        if not _positive(scalar_tol):
            errors.append('scalar_tol must be > 0, got %r' % (scalar_tol,))
        self.ordering = ordering
        if ordering not in ORDERINGS:
            errors.append('ordering must be one of %s, got %r'
                          % (', '.join(ORDERINGS), ordering))
        self.init = init
        if init not in INITS:
            errors.append('init must be one of %s, got %r'
                          % (', '.join(INITS), init))
        self.seed = seed
        if not _integer(seed) or seed < 0:
            errors.append('seed must be a nonnegative integer, got %r'
                          % (seed,))
        self.method = method
        if method not in METHODS:
            errors.append('method must be one of %s, got %r'
                          % (', '.join(METHODS), method))
        self.max_picard = max_picard
        if not _integer(max_picard) or max_picard < 0:
            errors.append('max_picard must be an integer >= 0, got %r'
                          % (max_picard,))
        if errors:
            raise ConfigError(errors)

    def replace(self, **changes):
        params = dict(self._params)
        params.update(changes)
        return SolverConfig(**params)

    def as_dict(self):
        return {
            'p': self.p,
            'tol': self.tol,
            'max_sweeps': self.max_sweeps,
            'scalar_tol': self.scalar_tol,
            'ordering': self.ordering,
            'init': self.init,
            'seed': self.seed,
            'method': self.method,
            'max_picard': self.max_picard,
        }

    def __repr__(self):
        return 'SolverConfig(%s)' % ', '.join(
            '%s=%r' % item for item in sorted(self.as_dict().items()))


def _positive(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) \
        and math.isfinite(value) and value > 0


def _integer(value):
    return isinstance(value, int) and not isinstance(value, bool)


class SolveReport(object):

    def __init__(self, region, field, max_residual, energy_trace,
                 residual_trace, warm_start_trace, sweeps, converged, tol,
                 method):
        self.region = region
        self.field = field
        self.max_residual = max_residual
        self.energy_trace = energy_trace
        self.residual_trace = residual_trace
        self.warm_start_trace = warm_start_trace
        self.sweeps = sweeps
        self.converged = converged
        self.tol = tol
        self.method = method

    def summary(self):
        return {
            'converged': self.converged,
            'max_residual': self.max_residual,
            'sweeps': self.sweeps,
            'method': self.method,
            'final_energy': self.energy_trace[-1],
        }

    def __repr__(self):
        return ('<SolveReport converged=%s sweeps=%d residual=%.3g>'
                % (self.converged, self.sweeps, self.max_residual))


class _Stencil(object):
    """Index arrays over the region closure: interior first, then boundary.

    Rows shorter than the largest degree are padded with the row's own
    index and a zero mask entry.
    """

    def __init__(self, g, region):
        interior = region.interior_order
        self.vertices = interior + region.boundary_order
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.m = m = len(interior)
        width = max(g.degree(x) for x in interior)
        self.nbr = np.empty((m, width), dtype=np.intp)
        self.mask = np.zeros((m, width))
        self.deg = np.empty(m, dtype=np.intp)
        for i, x in enumerate(interior):
            ys = g.neighbors(x)
            self.deg[i] = len(ys)
            for j, y in enumerate(ys):
                try:
                    self.nbr[i, j] = self.index[y]
                except KeyError:
                    raise GraphError(
                        'Neighbor %r of %r is missing from the region closure'
                        % (y, x))
                self.mask[i, j] = 1.0
            self.nbr[i, len(ys):] = i
        # Edges to the boundary are seen from one side only, count them twice
        self.weight = np.where(self.nbr < m, 1.0, 2.0) * self.mask
        self._inner = (self.nbr < m) & (self.mask > 0)

    def differences(self, vals):
        return vals[self.nbr] - vals[:self.m, None]

    def energy(self, vals, p):
        terms = self.weight * np.abs(self.differences(vals)) ** p
        return math.fsum(terms.ravel())

    def laplacian(self, vals, p):
        d = self.differences(vals)
        return (self.mask * np.sign(d) * np.abs(d) ** (p - 1)).sum(axis=1)

    def residual(self, vals, p):
        if self.m == 0:
            return 0.0
        return float(np.abs(self.laplacian(vals, p)).max())

    def weighted_solve(self, vals, weights):
        """Interior values of the weighted harmonic extension."""
        m = self.m
        rows = np.repeat(np.arange(m), self.nbr.shape[1]).reshape(
            self.nbr.shape)
        inner = self._inner
        data = np.concatenate([-weights[inner], weights.sum(axis=1)])
        cols = np.concatenate([self.nbr[inner], np.arange(m)])
        rows = np.concatenate([rows[inner], np.arange(m)])
        matrix = sparse.coo_matrix((data, (rows, cols)), shape=(m, m))
        outer = np.where(inner, 0.0, weights)
        rhs = (outer * vals[self.nbr]).sum(axis=1)
        return np.atleast_1d(spsolve(matrix.tocsc(), rhs))

    def color_classes(self, ordering):
        if ordering == 'sorted':
            return None
        conflict = networkx.Graph()
        conflict.add_nodes_from(range(self.m))
        rows, cols = np.nonzero(self._inner)
        targets = self.nbr[rows, cols]
        conflict.add_edges_from(
            (int(i), int(j)) for i, j in zip(rows, targets) if i < j)
        if networkx.is_bipartite(conflict):
            coloring = networkx.bipartite.color(conflict)
        else:
            coloring = networkx.greedy_color(
                conflict, strategy='largest_first')
        classes = {}
        for i, color in coloring.items():
            classes.setdefault(color, []).append(i)
        return [np.array(sorted(classes[c]), dtype=np.intp)
                for c in sorted(classes)]


def _signed(d, e):
    return np.sign(d) * np.abs(d) ** e


# Relative rounding allowance on local energies. The scalar root is the
# unique coordinate minimizer.
LOCAL_SLACK = 1e-13


def _update_class(stencil, vals, rows, p, xtol):
    """Exact coordinate minimization of non-adjacent rows at once."""
    nb = vals[stencil.nbr[rows]]
    mask = stencil.mask[rows]
    valid = mask > 0
    lo = np.where(valid, nb, np.inf).min(axis=1)
    hi = np.where(valid, nb, -np.inf).max(axis=1)
    span = float((hi - lo).max())
    steps = 0
    if span > 0:
        steps = min(200, int(math.ceil(math.log2(max(span, xtol) / xtol))) + 1)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        g_mid = (mask * _signed(nb - mid[:, None], p - 1)).sum(axis=1)
        above = g_mid > 0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    t = 0.5 * (lo + hi)
    old = vals[rows]
    local_new = (mask * np.abs(nb - t[:, None]) ** p).sum(axis=1)
    local_old = (mask * np.abs(nb - old[:, None]) ** p).sum(axis=1)
    accept = local_new <= local_old * (1 + LOCAL_SLACK)
    vals[rows] = np.where(accept, t, old)


def _update_vertex(stencil, vals, i, p, xtol):
    nb = vals[stencil.nbr[i, :stencil.deg[i]]]
    lo, hi = float(nb.min()), float(nb.max())

    def g(t):
        return float(_signed(nb - t, p - 1).sum())

    if hi == lo:
        t = lo
    elif g(lo) == 0:
        t = lo
    elif g(hi) == 0:
        t = hi
    else:
        t = optimize.brentq(g, lo, hi, xtol=xtol)
    old = vals[i]
    local_new = np.sum(np.abs(nb - t) ** p)
    local_old = np.sum(np.abs(nb - old) ** p)
    if local_new <= local_old * (1 + LOCAL_SLACK):
        vals[i] = t


def _initial_values(stencil, vals, cfg, lower, upper):
    m = stencil.m
    boundary = vals[m:]
    if cfg.init == 'mean':
        vals[:m] = math.fsum(boundary) / len(boundary)
    elif cfg.init == 'random':
        rng = np.random.default_rng(cfg.seed)
        vals[:m] = rng.uniform(lower, upper, size=m)
    else:
        vals[:m] = np.clip(
            stencil.weighted_solve(vals, stencil.mask), lower, upper)


def _warm_start(stencil, vals, p, target, max_steps, lower, upper, scale):
    """Lagged diffusivity steps with a line search on the true energy.

    Returns the energy trace; a step is only taken when it lowers the
    energy, and values are clipped to the boundary envelope (clipping
    never increases an edge difference).
    """
    m = stencil.m
    energy = stencil.energy(vals, p)
    trace = [energy]
    if p == 2:
        vals[:m] = np.clip(
            stencil.weighted_solve(vals, stencil.mask), lower, upper)
        trace.append(stencil.energy(vals, p))
        return trace

    eps = 1e-10 * scale
    trial = vals.copy()
    for step in range(max_steps):
        if stencil.residual(vals, p) <= target:
            break
        d = np.abs(stencil.differences(vals))
        weights = stencil.mask * np.maximum(d, eps) ** (p - 2)
        direction = stencil.weighted_solve(vals, weights) - vals[:m]

        def along(s):
            trial[:m] = np.clip(vals[:m] + s * direction, lower, upper)
            return stencil.energy(trial, p)

        found = optimize.minimize_scalar(
            along, bounds=(0.0, 2.0), method='bounded',
            options={'xatol': 1e-8})
        s, best = float(found.x), float(found.fun)
        at_one = along(1.0)
        if at_one <= best:
            s, best = 1.0, at_one
        if not best < energy:
            log.debug('Picard step %d made no progress, stopping', step)
            break
        vals[:m] = np.clip(vals[:m] + s * direction, lower, upper)
        progress = energy - best
        energy = best
        trace.append(energy)
        log.debug('Picard step %d: step size %.3g, energy %.12g',
                  step, s, energy)
        if progress <= 1e-15 * max(energy, 1e-300):
            break
    return trace


def solve_dirichlet(g, region, boundary, cfg=None):
    """Solve Delta_p f = 0 on region.S with f = boundary on the boundary.

    Returns a SolveReport; non-convergence within the sweep budget is
    reported with ``converged=False`` and never raised.
    """
    if cfg is None:
        cfg = SolverConfig()
    p = cfg.p
    if not region.boundary:
        raise DirichletError('Dirichlet problem needs boundary')
    stencil = _Stencil(g, region)
    m = stencil.m

    vals = np.zeros(len(stencil.vertices))
    for k, y in enumerate(stencil.vertices[m:], start=m):
        try:
            value = float(boundary[y])
        except KeyError:
            raise DirichletError('Boundary value missing at %r' % (y,))
        if not math.isfinite(value):
            raise DirichletError('Boundary value at %r is not finite' % (y,))
        vals[k] = value
    lower, upper = float(vals[m:].min()), float(vals[m:].max())
    scale = max(1.0, upper - lower)
    xtol = cfg.scalar_tol * scale

    _initial_values(stencil, vals, cfg, lower, upper)

    if cfg.method == 'auto':
        method = 'linear' if p == 2 else 'picard'
        warm_start_trace = _warm_start(
            stencil, vals, p, 1e-2 * cfg.tol, cfg.max_picard, lower, upper,
            scale)
    else:
        method = 'coordinate'
        warm_start_trace = []

    classes = stencil.color_classes(cfg.ordering)
    residual_now = stencil.residual(vals, p)
    energy_trace = [stencil.energy(vals, p)]
    residual_trace = [residual_now]
    sweeps = 0
    while residual_now > cfg.tol and sweeps < cfg.max_sweeps:
        if classes is None:
            for i in range(m):
                _update_vertex(stencil, vals, i, p, xtol)
        else:
            for rows in classes:
                _update_class(stencil, vals, rows, p, xtol)
        sweeps += 1
        residual_now = stencil.residual(vals, p)
        energy_trace.append(stencil.energy(vals, p))
        residual_trace.append(residual_now)
        if sweeps % 500 == 0:
            log.debug('Sweep %d: residual %.3g, energy %.12g',
                      sweeps, residual_now, energy_trace[-1])

    np.clip(vals[:m], lower, upper, out=vals[:m])
    assert np.all(vals[:m] >= lower) and np.all(vals[:m] <= upper), \
        'solution left the boundary envelope'

    converged = residual_now <= cfg.tol
    if converged:
        log.debug('Solved %d vertices with p=%g (%s, %d sweeps), '
                  'residual %.3g', m, p, method, sweeps, residual_now)
    else:
        log.warning('Dirichlet solve on %d vertices with p=%g did not '
                    'converge: residual %.3g > %.3g after %d sweeps',
                    m, p, residual_now, cfg.tol, sweeps)
    field = dict(zip(stencil.vertices, vals.tolist()))
    return SolveReport(region, field, residual_now, energy_trace,
                       residual_trace, warm_start_trace, sweeps, converged,
                       cfg.tol, method)


def solve_linear(g, region, boundary):
    """Direct sparse solve of Delta_2 f = 0, used as a p = 2 oracle."""
    if not region.boundary:
        raise DirichletError('Dirichlet problem needs boundary')
    stencil = _Stencil(g, region)
    vals = np.zeros(len(stencil.vertices))
    for k, y in enumerate(stencil.vertices[stencil.m:], start=stencil.m):
        try:
            vals[k] = boundary[y]
        except KeyError:
            raise DirichletError('Boundary value missing at %r' % (y,))
    vals[:stencil.m] = stencil.weighted_solve(vals, stencil.mask)
    return dict(zip(stencil.vertices, vals.tolist()))


def residual(g, f, S, p):
    """max over S of |Delta_p f|."""
    p = check_exponent(p)
    return max((abs(p_laplacian(g, f, x, p)) for x in sorted(S)),
               default=0.0)
