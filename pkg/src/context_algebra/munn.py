"""Free inverse semigroups, Munn trees, and the syntax semigroup.

Elements of the free inverse semigroup are words over generators and
their inverses; the canonical form is a birooted edge-labelled tree.
Construction walks the word from the start node, reusing an existing
edge when one with the right label and direction is present and growing
the tree otherwise, so no node ever carries two equally-labelled edges
in the same direction.  Products graft the second tree's start onto the
first tree's finish and fold until that edge condition holds again.

The bracket semigroup is the same word algebra with matched
annihilator-creator pairs cancelling and mismatches collapsing to zero;
pairing it with the free inverse semigroup (zero absorbing) gives a
single semigroup whose elements both detect and record parses.
"""

from __future__ import annotations

from collections import deque

from .errors import ParseError
from .riesz import SparseVec


def parse_fis_word(text):
    """Parse `a b' c` style tokens: a trailing apostrophe marks inverses."""
    word = []
    for token in text.split():
        if token.endswith("'"):
            gen = token[:-1]
            direction = -1
        else:
            gen = token
            direction = 1
        if not gen or "'" in gen:
            raise ParseError("bad generator token %r" % token)
        word.append((gen, direction))
    return word


def format_fis_word(word):
    return " ".join(g + ("'" if d < 0 else "") for g, d in word)


def invert_word(word):
    return [(g, -d) for g, d in reversed(word)]


class MunnTree:
    """Birooted word-tree in canonical (BFS-renumbered) form.

    Nodes are integers 0..n-1; edges is a frozenset of
    (source, label, target) triples; start and finish are node ids.
    """

    __slots__ = ("n_nodes", "edges", "start", "finish")

    def __init__(self, n_nodes, edges, start, finish):
        self.n_nodes = n_nodes
        self.edges = frozenset(edges)
        self.start = start
        self.finish = finish

    def __eq__(self, other):
        if not isinstance(other, MunnTree):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.edges == other.edges
            and self.start == other.start
            and self.finish == other.finish
        )

    def __hash__(self):
        return hash((self.n_nodes, self.edges, self.start, self.finish))

    def __repr__(self):
        return "MunnTree(nodes=%d, start=%d, finish=%d, edges=%s)" % (
            self.n_nodes,
            self.start,
            self.finish,
            sorted(self.edges),
        )

    def is_idempotent(self):
        """Idempotent exactly when the two roots coincide."""
        return self.start == self.finish

    def key(self):
        """Canonical label usable as a sparse-vector dimension."""
        edges = ";".join(
            "%d-%s-%d" % (s, l, t) for s, l, t in sorted(self.edges)
        )
        return "munn[%d|%d|%d|%s]" % (self.n_nodes, self.start, self.finish, edges)

    def to_dot(self):
        """DOT rendering: start node square, finish node doubled."""
        lines = ["digraph munn {"]
        for node in range(self.n_nodes):
            attrs = []
            if node == self.start:
                attrs.append("shape=box")
            if node == self.finish:
                attrs.append("peripheries=2")
            lines.append(
                "  n%d [label=\"%d\"%s];"
                % (node, node, (", " + ", ".join(attrs)) if attrs else "")
            )
        for source, label, target in sorted(self.edges):
            lines.append('  n%d -> n%d [label="%s"];' % (source, target, label))
        lines.append("}")
        return "\n".join(lines)

    def to_json_dict(self):
        return {
            "nodes": self.n_nodes,
            "start": self.start,
            "finish": self.finish,
            "edges": [
                {"from": s, "label": l, "to": t} for s, l, t in sorted(self.edges)
            ],
        }


def _canonicalize(edges, start, finish):
    """Breadth-first renumber from the start node, edges ordered by
    (label, direction): out-edges before in-edges of the same label."""
    adjacency = {}
    for source, label, target in edges:
        adjacency.setdefault(source, []).append((label, 0, target))
        adjacency.setdefault(target, []).append((label, 1, source))
    order = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for label, direction, neighbor in sorted(adjacency.get(node, [])):
            if neighbor not in order:
                order[neighbor] = len(order)
                queue.append(neighbor)
    renamed = frozenset(
        (order[s], label, order[t]) for s, label, t in edges
    )
    n_nodes = len(order) if order else 1
    if not edges:
        return MunnTree(1, frozenset(), 0, 0)
    return MunnTree(n_nodes, renamed, order[start], order[finish])


def munn_tree(word):
    """Construct the canonical birooted word-tree of a word."""
    if isinstance(word, str):
        word = parse_fis_word(word)
    out_edges = {0: {}}  # node -> {label: target}
    in_edges = {0: {}}   # node -> {label: source}
    current = 0
    next_id = 1
    edges = set()
    for gen, direction in word:
        if direction > 0:
            found = out_edges[current].get(gen)
            if found is None:
                found = next_id
                next_id += 1
                out_edges[found] = {}
                in_edges[found] = {}
                out_edges[current][gen] = found
                in_edges[found][gen] = current
                edges.add((current, gen, found))
            current = found
        else:
            found = in_edges[current].get(gen)
            if found is None:
                found = next_id
                next_id += 1
                out_edges[found] = {}
                in_edges[found] = {}
                out_edges[found][gen] = current
                in_edges[current][gen] = found
                edges.add((found, gen, current))
            current = found
    return _canonicalize(edges, 0, current)


def _fold(edges, keep):
    """Merge nodes until no node has two equal-labelled parallel edges.

    ``keep`` is a list of distinguished node ids updated in place under
    the merges (union-find with path compression).
    """
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    work = set(edges)
    while True:
        current = {(find(s), label, find(t)) for s, label, t in work}
        by_out = {}
        by_in = {}
        merged = False
        for s, label, t in current:
            key = (s, label)
            if key in by_out and by_out[key] != t:
                union(by_out[key], t)
                merged = True
                break
            by_out[key] = t
            key = (t, label)
            if key in by_in and by_in[key] != s:
                union(by_in[key], s)
                merged = True
                break
            by_in[key] = s
        if not merged:
            return current, [find(k) for k in keep]
        work = current


def fis_mul(left, right):
    """Product of two elements: graft right's start onto left's finish."""
    offset = left.n_nodes
    edges = set(left.edges)
    for s, label, t in right.edges:
        edges.add((s + offset, label, t + offset))
    # identify right.start with left.finish
    mapping = {right.start + offset: left.finish}

    def rename(node):
        return mapping.get(node, node)

    edges = {(rename(s), label, rename(t)) for s, label, t in edges}
    start = rename(left.start)
    finish = rename(right.finish + offset)
    folded, (start, finish) = _fold(edges, [start, finish])
    return _canonicalize(folded, start, finish)


def fis_inverse(tree):
    """Same tree with start and finish exchanged."""
    return _canonicalize(set(tree.edges), tree.finish, tree.start)


def is_idempotent(tree):
    return tree.is_idempotent()


# -- bracket semigroup ---------------------------------------------------

BRACKET_ZERO = None  # the absorbing zero


def bracket_word(creators, annihilators):
    """Reduced bracket element: creator string then annihilator string."""
    return (tuple(creators), tuple(annihilators))

BRACKET_ONE = bracket_word((), ())


def bracket_mul(left, right):
    """Concatenate and reduce via the annihilator/creator contraction.

    Elements are (creators, annihilators) pairs or the zero (None); a
    mismatched contraction gives zero, which absorbs.
    """
    if left is BRACKET_ZERO or right is BRACKET_ZERO:
        return BRACKET_ZERO
    c1, a1 = left
    c2, a2 = right
    i, j = len(a1) - 1, 0
    while i >= 0 and j < len(c2):
        if a1[i] != c2[j]:
            return BRACKET_ZERO
        i -= 1
        j += 1
    return (c1 + c2[j:], a1[: i + 1] + a2)


def format_bracket(word):
    if word is BRACKET_ZERO:
        return "0"
    creators, annihilators = word
    if not creators and not annihilators:
        return "1"
    return "".join("|%s>" % c for c in creators) + "".join(
        "<%s|" % a for a in annihilators
    )


# -- syntax semigroup ------------------------------------------------------


class SyntaxElem:
    """Pair (free-inverse-semigroup element, bracket word), zero merged.

    A zero bracket component collapses the whole element to zero, so the
    element simultaneously records the parse (Munn tree) and dies on
    syntactic mismatch.
    """

    __slots__ = ("tree", "bracket")

    def __init__(self, tree, bracket):
        if bracket is BRACKET_ZERO:
            self.tree = None
            self.bracket = BRACKET_ZERO
        else:
            self.tree = tree
            self.bracket = bracket

    @staticmethod
    def zero():
        return SyntaxElem(None, BRACKET_ZERO)

    @staticmethod
    def from_connector(link_type, right):
        """<<a| (right connector, opens) or |a>> (left connector, closes)."""
        if right:
            word = [(link_type, 1)]
            bracket = bracket_word((), (link_type,))
        else:
            word = [(link_type, -1)]
            bracket = bracket_word((link_type,), ())
        return SyntaxElem(munn_tree(word), bracket)

    def is_zero(self):
        return self.bracket is BRACKET_ZERO

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return SyntaxElem.zero()
        return SyntaxElem(
            fis_mul(self.tree, other.tree), bracket_mul(self.bracket, other.bracket)
        )

    def __eq__(self, other):
        if not isinstance(other, SyntaxElem):
            return NotImplemented
        return self.tree == other.tree and self.bracket == other.bracket

    def __hash__(self):
        return hash((self.tree, self.bracket))

    def key(self):
        if self.is_zero():
            return "0"
        return "%s*%s" % (self.tree.key(), format_bracket(self.bracket))


def syntax_mul(a, b):
    return a * b


# -- semigroup algebras ------------------------------------------------------


def semigroup_algebra_mul(mul, u, v):
    """Convolution product on L1 of a semigroup given its multiplication.

    ``mul`` maps a pair of element labels to a product label, or None for
    the semigroup zero; zero components are discarded (the ideal of the
    zero is quotiented away).
    """
    u._check_mode(v)
    out = {}
    for x, a in u.items():
        for y, b in v.items():
            product = mul(x, y)
            if product is None:
                continue
            out[product] = out.get(product, 0) + a * b
    return SparseVec(out, u.mode)


def semigroup_phi(u):
    """phi(u) = ||u+||_1 - ||u-||_1."""
    return u.pos().norm1() - u.neg().norm1()
