"""Finite graphs given by an edge list, stored in networkx."""

import networkx

from pharmonic.exceptions import ConfigError, GraphError, UnknownVertex
from pharmonic.graph import Graph


class EdgeListGraph(Graph):

    family = 'edgelist'
    finite = True

    def __init__(self, nx_graph, base, name='<graph>'):
        self.nx_graph = nx_graph
        self.base = base
        self.name = name
        self._adjacency = {
            x: tuple(sorted(nx_graph.adj[x])) for x in nx_graph.nodes}
        self.degree_bound = max(len(n) for n in self._adjacency.values())

    @classmethod
    def from_spec(cls, spec):
        from pharmonic.graph import load_edge_list
        try:
            with open(spec.path, encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ConfigError('Can not read edge list %s: %s'
                              % (spec.path, e))
        return load_edge_list(text, name=spec.path)

    @classmethod
    def from_networkx(cls, nx_graph, base=None, name='<networkx>'):
        """Wrap an undirected networkx graph, checking it is usable."""
        if nx_graph.number_of_nodes() == 0:
            raise GraphError('Graph %s is empty' % name)
        loops = list(networkx.nodes_with_selfloops(nx_graph))
        if loops:
            raise GraphError('Graph %s has a self-loop at %r'
                             % (name, loops[0]))
        if not networkx.is_connected(nx_graph):
            raise GraphError('Graph %s is disconnected' % name)
        if base is None:
            base = min(nx_graph.nodes)
        return cls(networkx.Graph(nx_graph), base, name=name)

    def neighbors(self, x):
        return self._adjacency[x]

    def has_vertex(self, x):
        return x in self._adjacency

    def vertices(self):
        return sorted(self._adjacency)

    def parse_vertex(self, token):
        token = token.strip()
        if token in ('origin', 'o') and token not in self._adjacency:
            return self.base
        if token not in self._adjacency:
            raise UnknownVertex(token)
        return token

    def __str__(self):
        return 'edgelist %s (%d vertices)' % (self.name, len(self._adjacency))
