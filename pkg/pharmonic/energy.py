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

"""p-gradients, p-Dirichlet sums, the p-Laplacian, pairings and norms.

A scalar field is any mapping from vertices to finite reals. Global sums
are always truncated to a caller supplied finite vertex set and walk it in
sorted order with :func:`math.fsum`, so results are bit reproducible.

``|t|^(p-2) t`` is evaluated as ``sign(t) |t|^(p-1)`` with ``0 -> 0`` for
every p.
"""

from collections import namedtuple
import math

from pharmonic.exceptions import ExponentError, FieldUndefined
from pharmonic.graph import FiniteRegion, outer_boundary

Norms = namedtuple('Norms', ['dp_norm', 'bdp_norm', 'sup_norm', 'truncation'])


def check_exponent(p):
    if isinstance(p, bool):
        raise ExponentError(p)
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise ExponentError(p)
    if not math.isfinite(value) or value <= 1:
        raise ExponentError(p)
    return value


def conjugate(p):
    """Hoelder conjugate q = p / (p - 1)."""
    p = check_exponent(p)
    return p / (p - 1)


def signed_power(t, e):
    if t == 0:
        return 0.0
    return math.copysign(abs(t) ** e, t)


def _value(f, x):
    try:
        return f[x]
    except KeyError:
        raise FieldUndefined(x)


def _vertex_set(S):
    if isinstance(S, FiniteRegion):
        return S.vertices
    return frozenset(S)


def gradient_p(g, f, x, p):
    """|Df(x)|^p, the sum of |f(y) - f(x)|^p over the neighbors y of x."""
    p = check_exponent(p)
    fx = _value(f, x)
    return math.fsum(abs(_value(f, y) - fx) ** p for y in g.neighbors(x))


def dirichlet_sum(g, f, S, p):
    """I_p(f, S); every edge inside S is counted from both endpoints."""
    p = check_exponent(p)
    return math.fsum(gradient_p(g, f, x, p) for x in sorted(_vertex_set(S)))


def region_energy(g, f, region, p):
    """Energy minimized by the p-harmonic extension on a region.

    Every edge touching S counts from both of its endpoints, including
    edges between S and its boundary, which I_p(f, S) counts once. Its
    stationarity condition on S is exactly Delta_p f = 0.
    """
    p = check_exponent(p)
    if not isinstance(region, FiniteRegion):
        region = FiniteRegion(g, region)
    inside = region.vertices
    terms = []
    for x in region.interior_order:
        fx = _value(f, x)
        for y in g.neighbors(x):
            weight = 1.0 if y in inside else 2.0
            terms.append(weight * abs(_value(f, y) - fx) ** p)
    return math.fsum(terms)


def p_laplacian(g, f, x, p):
    p = check_exponent(p)
    fx = _value(f, x)
    return math.fsum(signed_power(_value(f, y) - fx, p - 1)
                     for y in g.neighbors(x))


def _pairing_terms(g, h, f, support):
    """Edge terms (dh, df) of the truncated double sum.

    x runs over support and its outer boundary; a term is kept when both
    fields are valued at both endpoints.
    """
    support = _vertex_set(support)
    nodes = sorted(support | outer_boundary(g, support))
    for x in nodes:
        hx = _value(h, x)
        fx = _value(f, x)
        for y in g.neighbors(x):
            if y in h and y in f:
                yield h[y] - hx, f[y] - fx


def pairing(g, h, f, support, p):
    """<Delta_p h, f> truncated to support and its outer boundary.

    Expanding the double sum gives pairing(h, delta_x) = -2 Delta_p h(x).
    """
    p = check_exponent(p)
    return math.fsum(signed_power(dh, p - 1) * df
                     for dh, df in _pairing_terms(g, h, f, support))


def pairing_bound(g, h, f, support, p):
    """Hoelder bound on |pairing(h, f)| over the same edge terms."""
    p = check_exponent(p)
    q = p / (p - 1)
    terms = list(_pairing_terms(g, h, f, support))
    h_part = math.fsum(abs(dh) ** ((p - 1) * q) for dh, _ in terms)
    f_part = math.fsum(abs(df) ** p for _, df in terms)
    return h_part ** (1 / q) * f_part ** (1 / p)


def monotonicity_gap(g, f1, f2, support, p):
    """<Delta_p f1 - Delta_p f2, f1 - f2>, nonnegative term by term.

    It vanishes exactly when f1 - f2 is constant on every edge counted.
    """
    p = check_exponent(p)
    support = _vertex_set(support)
    nodes = sorted(support | outer_boundary(g, support))
    terms = []
    for x in nodes:
        a, b = _value(f1, x), _value(f2, x)
        for y in g.neighbors(x):
            if y in f1 and y in f2:
                d1, d2 = f1[y] - a, f2[y] - b
                terms.append((signed_power(d1, p - 1)
                              - signed_power(d2, p - 1)) * (d1 - d2))
    return math.fsum(terms)


def norms(g, f, region, p):
    """D_p, BD_p and sup norms truncated to the region.

    The D_p norm anchors at the base vertex, which must be valued.
    """
    p = check_exponent(p)
    S = _vertex_set(region)
    base = _value(f, g.base)
    energy = dirichlet_sum(g, f, S, p)
    closure = S | outer_boundary(g, S)
    sup = max(abs(_value(f, x)) for x in closure)
    return Norms(dp_norm=(energy + abs(base) ** p) ** (1 / p),
                 bdp_norm=energy ** (1 / p) + sup,
                 sup_norm=sup,
                 truncation=frozenset(S))
