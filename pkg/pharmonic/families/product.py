"""Direct products; the Cayley graph of G x H with the union of generators.
"""

from pharmonic.exceptions import UnknownVertex
from pharmonic.graph import Graph


class Product(Graph):

    family = 'product'

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.base = (left.base, right.base)
        self.degree_bound = left.degree_bound + right.degree_bound
        self.default_radii = left.default_radii or right.default_radii

    @classmethod
    def from_spec(cls, spec):
        from pharmonic.graph import cayley
        left, right = (cayley(factor) for factor in spec.factors)
        return cls(left, right)

    def neighbors(self, x):
        l, r = x
        return tuple((y, r) for y in self.left.neighbors(l)) + \
            tuple((l, z) for z in self.right.neighbors(r))

    def has_vertex(self, x):
        return isinstance(x, tuple) and len(x) == 2 \
            and self.left.has_vertex(x[0]) and self.right.has_vertex(x[1])

    def parse_vertex(self, token):
        token = token.strip()
        if token in ('origin', 'o'):
            return self.base
        # Factors may themselves be products, try every split
        parts = token.split('|')
        for i in range(1, len(parts)):
            try:
                return (self.left.parse_vertex('|'.join(parts[:i])),
                        self.right.parse_vertex('|'.join(parts[i:])))
            except UnknownVertex:
                continue
        raise UnknownVertex(token, "expected 'left|right'")

    def format_vertex(self, x):
        return '%s|%s' % (self.left.format_vertex(x[0]),
                          self.right.format_vertex(x[1]))

    def end_label(self, x):
        l, r = x
        if l != self.left.base:
            return self.left.end_label(l)
        return self.right.end_label(r)

    def end_labels(self):
        labels = list(self.left.end_labels())
        labels.extend(label for label in self.right.end_labels()
                      if label not in labels)
        return tuple(labels)

    def __str__(self):
        return '%s x %s' % (self.left, self.right)
