"""Graph families: Cayley graphs of Z^n, F_k, products and edge lists."""

import sys

from pharmonic.exceptions import ConfigError
from pharmonic.graph import Graph
from pharmonic.families.edgelist import EdgeListGraph
from pharmonic.families.free import FreeGroup
from pharmonic.families.lattice import Lattice
from pharmonic.families.product import Product

__all__ = ['EdgeListGraph', 'FreeGroup', 'Lattice', 'Product',
           'get_family_class']


def get_family_class(family):
    this_module = sys.modules[__name__]
    for attr in dir(this_module):
        candidate = getattr(this_module, attr)
        if isinstance(candidate, type) and issubclass(candidate, Graph) \
                and candidate.family == family.lower():
            return candidate
    raise ConfigError('Graph family %s is not supported' % family)
