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

"""Connected bounded-degree graphs, balls, boundaries and distances.

Infinite families are never materialized: a graph is a neighbor oracle and
every computation goes through a finite :class:`FiniteRegion`. Balls follow
the strict convention ``B_n(x) = {y : d(x, y) < n}`` so the outer boundary
of a ball is exactly the sphere of radius ``n``.
"""

from functools import cached_property
import logging

import networkx

from pharmonic.exceptions import (
    ConfigError, GraphError, UnknownVertex, Unreachable)

log = logging.getLogger(__name__)


class Graph(object):
    """Neighbor oracle for a connected, loop-free, bounded-degree graph.

    Subclasses set ``family``, ``base`` and ``degree_bound`` and implement
    :meth:`neighbors`, :meth:`has_vertex` and :meth:`parse_vertex`.
    Vertices are hashable and orderable; instances are immutable.
    """

    family = None
    base = None
    degree_bound = None
    finite = False
    # End indicators have finite p-energy: finitely many edges join ends
    finite_end_cuts = False
    # Radii used by the nonconstant harmonic verdict when none are given
    default_radii = ()

    def neighbors(self, x):
        raise NotImplementedError

    def has_vertex(self, x):
        raise NotImplementedError

    def parse_vertex(self, token):
        raise NotImplementedError

    def format_vertex(self, x):
        return str(x)

    def degree(self, x):
        return len(self.neighbors(x))

    def end_label(self, x):
        """Label of the end the vertex belongs to, None when unlabeled."""
        return None

    def end_labels(self):
        return ()

    def require_vertex(self, x):
        if not self.has_vertex(x):
            raise UnknownVertex(x)
        return x

    def __repr__(self):
        return '<%s %s>' % (self.__class__.__name__, self)


class FiniteRegion(object):
    """A finite vertex set S together with its outer boundary."""

    def __init__(self, graph, vertices, boundary=None, check=True):
        self.graph = graph
        self.vertices = frozenset(vertices)
        if not self.vertices:
            raise GraphError('A region needs at least one vertex')
        if boundary is None:
            boundary = outer_boundary(graph, self.vertices)
        self.boundary = frozenset(boundary)
        if check:
            self.check()

    def check(self):
        overlap = self.vertices & self.boundary
        if overlap:
            raise GraphError(
                'Boundary intersects the region at %r' % (min(overlap),))
        for y in self.boundary:
            if not any(z in self.vertices for z in self.graph.neighbors(y)):
                raise GraphError(
                    'Boundary vertex %r has no neighbor in the region' % (y,))
        for x in self.vertices:
            for y in self.graph.neighbors(x):
                if y not in self.vertices and y not in self.boundary:
                    raise GraphError(
                        'Neighbor %r of %r is neither in the region nor on '
                        'its boundary' % (y, x))

    @cached_property
    def interior_order(self):
        return sorted(self.vertices)

    @cached_property
    def boundary_order(self):
        return sorted(self.boundary)

    @property
    def closure(self):
        return self.vertices | self.boundary

    def __contains__(self, x):
        return x in self.vertices

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return '<FiniteRegion |S|=%d |dS|=%d>' % (
            len(self.vertices), len(self.boundary))


class Ball(FiniteRegion):
    """Metric ball around ``center``; ``layers[k]`` is the sphere of radius k.
    """

    def __init__(self, graph, center, radius, layers):
        self.center = center
        self.radius = radius
        self.layers = layers
        inner = [x for layer in layers[:radius] for x in layer]
        sphere = layers[radius] if len(layers) > radius else []
        super(Ball, self).__init__(graph, inner, sphere, check=False)

    @cached_property
    def depth(self):
        return {x: k for k, layer in enumerate(self.layers) for x in layer}

    @property
    def sphere(self):
        return self.boundary

    def __repr__(self):
        return '<Ball center=%r radius=%d |S|=%d>' % (
            self.center, self.radius, len(self.vertices))


def bfs_layers(g, center, depth):
    """Yield the spheres of radius 0..depth around center, each sorted."""
    seen = {center}
    layer = [center]
    yield layer
    for _ in range(depth):
        following = []
        for x in layer:
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    following.append(y)
        if not following:
            return
        following.sort()
        layer = following
        yield layer


def ball(g, center, n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GraphError('Ball radius must be an integer >= 1, got %r' % (n,))
    g.require_vertex(center)
    return Ball(g, center, n, list(bfs_layers(g, center, n)))


def distance(g, x, y, budget=100000):
    """Shortest path length, exploring at most ``budget`` vertices."""
    g.require_vertex(x)
    g.require_vertex(y)
    if x == y:
        return 0
    seen = {x}
    layer = [x]
    d = 0
    while layer:
        d += 1
        following = []
        for v in layer:
            for w in g.neighbors(v):
                if w == y:
                    return d
                if w not in seen:
                    seen.add(w)
                    following.append(w)
                    if len(seen) > budget:
                        raise Unreachable(x, y, budget)
        layer = following
    # Only a finite disconnected truncation can get here
    raise Unreachable(x, y, budget)


def outer_boundary(g, S):
    S = frozenset(S)
    if not S:
        raise GraphError('Outer boundary of an empty set is undefined')
    return frozenset(y for x in S for y in g.neighbors(x) if y not in S)


def check_graph(g, vertices):
    """Check symmetry, loops and the degree bound on a finite truncation.

    Returns the number of vertices checked.
    """
    count = 0
    for x in vertices:
        nbrs = g.neighbors(x)
        if x in nbrs:
            raise GraphError('Self-loop at %r' % (x,))
        if len(set(nbrs)) != len(nbrs):
            raise GraphError('Repeated neighbor at %r' % (x,))
        if g.degree_bound is not None and len(nbrs) > g.degree_bound:
            raise GraphError('Degree %d of %r exceeds the bound %d' % (
                len(nbrs), x, g.degree_bound))
        for y in nbrs:
            if x not in g.neighbors(y):
                raise GraphError(
                    'Adjacency is not symmetric between %r and %r' % (x, y))
        count += 1
    return count


def load_edge_list(text, name='<string>'):
    """Parse an edge-list document into a finite graph.

    One edge per line, two whitespace separated vertex tokens, lines
    starting with '#' are comments. Duplicate edges are collapsed and the
    first vertex seen becomes the base vertex.
    """
    from pharmonic.families.edgelist import EdgeListGraph

    nx_graph = networkx.Graph()
    base = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphError(
                'expected two vertex tokens, got %d' % len(tokens),
                line=lineno)
        u, v = tokens
        if u == v:
            raise GraphError('self-loop at vertex %s' % u, line=lineno)
        if base is None:
            base = u
        nx_graph.add_edge(u, v)

    if base is None:
        raise GraphError('Edge list %s is empty' % name)
    if not networkx.is_connected(nx_graph):
        unreached = len(nx_graph) - len(
            networkx.node_connected_component(nx_graph, base))
        raise GraphError(
            'Edge list %s is disconnected: %d vertices unreachable from %s'
            % (name, unreached, base))

    log.debug('Loaded %s: %d vertices, %d edges',
              name, nx_graph.number_of_nodes(), nx_graph.number_of_edges())
    return EdgeListGraph(nx_graph, base, name=name)


class GraphFamilySpec(object):
    """Which graph to build: edge list, Z^n, F_k or a direct product."""

    def __init__(self, family, dim=None, rank=None, factors=None, path=None):
        self.family = family
        self.dim = dim
        self.rank = rank
        self.factors = list(factors or [])
        self.path = path

    @classmethod
    def parse(cls, string):
        """Parse 'zn:2', 'free:3' or 'edgelist:PATH'."""
        family, _, param = string.partition(':')
        family = family.strip().lower()
        if family == 'zn':
            return cls('zn', dim=_parse_int(param, 1))
        if family == 'free':
            return cls('free', rank=_parse_int(param, 2))
        if family == 'edgelist':
            return cls('edgelist', path=param or None)
        raise ConfigError('Unknown graph family %r' % string)

    def validate(self):
        errors = []
        if self.family == 'zn':
            if not _positive_int(self.dim):
                errors.append('zn dimension must be an integer >= 1, got %r'
                              % (self.dim,))
        elif self.family == 'free':
            if not _positive_int(self.rank) or self.rank > 26:
                errors.append('free group rank must be in 1..26, got %r'
                              % (self.rank,))
        elif self.family == 'product':
            if len(self.factors) != 2:
                errors.append('product needs exactly two factors, got %d'
                              % len(self.factors))
            for factor in self.factors:
                errors.extend(factor.validate())
        elif self.family == 'edgelist':
            if not self.path:
                errors.append('edgelist family needs a graph path')
        else:
            errors.append('Unknown graph family %r' % (self.family,))
        return errors

    def __str__(self):
        if self.family == 'zn':
            return 'zn:%s' % self.dim
        if self.family == 'free':
            return 'free:%s' % self.rank
        if self.family == 'product':
            return 'product(%s)' % ','.join(str(f) for f in self.factors)
        return '%s:%s' % (self.family, self.path)


def _parse_int(value, default):
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        raise ConfigError('Expected an integer, got %r' % value)


def _positive_int(value):
    return isinstance(value, int) and not isinstance(value, bool) \
        and value >= 1


def cayley(spec):
    """Build the graph described by a GraphFamilySpec."""
    errors = spec.validate()
    if errors:
        raise ConfigError(errors)

    from pharmonic.families import get_family_class
    graph = get_family_class(spec.family).from_spec(spec)
    log.debug('Built %s', graph)
    return graph
