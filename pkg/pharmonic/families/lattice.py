"""The integer lattice Z^n with generators +-e_i."""

from pharmonic.exceptions import UnknownVertex
from pharmonic.graph import Graph


class Lattice(Graph):
    """Cayley graph of Z^n; vertices are integer tuples.

    Ends are the two lexicographic half-spaces: a vertex is labeled '+' or
    '-' after the sign of its first nonzero coordinate.
    """

    family = 'zn'

    def __init__(self, dim):
        self.dim = dim
        self.base = (0,) * dim
        self.degree_bound = 2 * dim
        self._steps = []
        for i in range(dim):
            for sign in (1, -1):
                step = [0] * dim
                step[i] = sign
                self._steps.append(tuple(step))

    @classmethod
    def from_spec(cls, spec):
        return cls(spec.dim)

    @property
    def finite_end_cuts(self):
        return self.dim == 1

    @property
    def default_radii(self):
        if self.dim == 1:
            return (8, 16, 32, 64)
        return (8, 16, 32)

    def neighbors(self, x):
        return tuple(tuple(a + b for a, b in zip(x, step))
                     for step in self._steps)

    def has_vertex(self, x):
        return isinstance(x, tuple) and len(x) == self.dim \
            and all(isinstance(c, int) for c in x)

    def parse_vertex(self, token):
        token = token.strip()
        if token in ('origin', 'o'):
            return self.base
        try:
            x = tuple(int(c) for c in token.split(','))
        except ValueError:
            raise UnknownVertex(token, 'expected integer coordinates')
        if len(x) != self.dim:
            raise UnknownVertex(token, 'expected %d coordinates' % self.dim)
        return x

    def format_vertex(self, x):
        return ','.join(str(c) for c in x)

    def end_label(self, x):
        for c in x:
            if c > 0:
                return '+'
            if c < 0:
                return '-'
        return None

    def end_labels(self):
        return ('+', '-')

    def __str__(self):
        return 'Z^%d' % self.dim
