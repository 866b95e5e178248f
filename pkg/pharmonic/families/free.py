"""Free groups F_k; the Cayley graph is the 2k-regular tree."""

import string

from pharmonic.exceptions import UnknownVertex
from pharmonic.graph import Graph


def inverse(letter):
    return letter.lower() if letter.isupper() else letter.upper()


def reduce_word(word):
    stack = []
    for letter in word:
        if stack and stack[-1] == inverse(letter):
            stack.pop()
        else:
            stack.append(letter)
    return ''.join(stack)


class FreeGroup(Graph):
    """Vertices are reduced words over a, b, ... with inverses written in
    upper case (``A`` is a^-1). The identity is the empty word, shown as
    ``e``. A word's end label is its first letter.
    """

    family = 'free'
    base = ''
    default_radii = (4, 6, 8)
    finite_end_cuts = True

    def __init__(self, rank):
        self.rank = rank
        self.letters = string.ascii_lowercase[:rank]
        self.generators = tuple(
            g for letter in self.letters for g in (letter, letter.upper()))
        self.degree_bound = 2 * rank

    @classmethod
    def from_spec(cls, spec):
        return cls(spec.rank)

    def neighbors(self, w):
        last = w[-1:]
        out = []
        for g in self.generators:
            if last and last == inverse(g):
                out.append(w[:-1])
            else:
                out.append(w + g)
        return tuple(out)

    def has_vertex(self, w):
        if not isinstance(w, str):
            return False
        if any(c.lower() not in self.letters for c in w):
            return False
        return reduce_word(w) == w

    def parse_vertex(self, token):
        token = token.strip()
        if token in ('e', 'o', 'origin', ''):
            return ''
        if any(c.lower() not in self.letters for c in token):
            raise UnknownVertex(
                token, 'letters must be among %s and their upper case'
                % self.letters)
        return reduce_word(token)

    def format_vertex(self, w):
        return w or 'e'

    def end_label(self, w):
        return w[:1] or None

    def end_labels(self):
        return self.generators

    def __str__(self):
        return 'F_%d' % self.rank
