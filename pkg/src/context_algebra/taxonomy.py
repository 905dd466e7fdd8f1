"""Vector-lattice completions of taxonomies.

A taxonomy is a finite poset of concepts (child -> parent edges, DAGs
allowed) with a positive weight p per node.  Four embeddings into sparse
vectors are provided:

* ideal: node -> p-weighted indicator of its down-set; l1 norm is the
  cumulative weight p-hat.
* distance: the dual-order ideal completion weighted by information
  content increments; l1 distances reproduce the Jiang-Conrath measure
  (trees only).
* chain: dimensions are maximal chains, each node's weight split evenly
  over the chains through it; far fewer dimensions than nodes on trees.
* projection: node -> projection onto its down-set, with phi recovering
  p-hat; products of projections intersect down-sets, which is what makes
  word-sense sums multiply out to disambiguations.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .corpus import parse_weight
from .errors import (
    FormatError,
    HypothesisError,
    NotFound,
    SizeError,
    StructureError,
)
from .riesz import EXACT, FLOAT, SparseVec, SubsetProjection

CHAIN_CAP = 100_000


class Taxonomy:
    """Nodes with child->parent edges and per-node weights."""

    def __init__(self, parents, p):
        # parents: node -> set of parents (empty set for roots)
        self.nodes = list(parents)
        known = set(self.nodes)
        self.parents = {}
        for node, ps in parents.items():
            ps = set(ps)
            if node in ps:
                raise FormatError("node %r is its own parent" % node)
            if not ps <= known:
                raise FormatError("unknown parent of %r" % node)
            self.parents[node] = ps
        self.children = {n: set() for n in self.nodes}
        for node, ps in self.parents.items():
            for parent in ps:
                self.children[parent].add(node)
        self.p = {}
        for node in self.nodes:
            weight = p.get(node, 0)
            if weight < 0:
                raise FormatError("negative weight at %r" % node)
            self.p[node] = weight
        self._check_acyclic()
        self.roots = sorted(n for n in self.nodes if not self.parents[n])
        self.leaves = sorted(n for n in self.nodes if not self.children[n])
        self._down = None
        total = sum(self.p.values())
        self.is_probabilistic = abs(total - 1) <= 1e-9
        self.is_tree = len(self.roots) == 1 and all(
            len(ps) <= 1 for ps in self.parents.values()
        )

    def _check_acyclic(self):
        state = {}

        def visit(node):
            if state.get(node) == 1:
                raise FormatError("cycle through %r" % node)
            if state.get(node) == 2:
                return
            state[node] = 1
            for parent in self.parents[node]:
                visit(parent)
            state[node] = 2

        for node in self.nodes:
            visit(node)

    def _require(self, node):
        if node not in self.parents:
            raise NotFound("unknown node %r" % node)

    def downset(self, node):
        """All descendants of node, node included (y <= x)."""
        self._require(node)
        if self._down is None:
            self._down = {}
        if node not in self._down:
            out, stack = set(), [node]
            while stack:
                cur = stack.pop()
                if cur in out:
                    continue
                out.add(cur)
                stack.extend(self.children[cur])
            self._down[node] = frozenset(out)
        return self._down[node]

    def upset(self, node):
        """All ancestors of node, node included."""
        self._require(node)
        out, stack = set(), [node]
        while stack:
            cur = stack.pop()
            if cur in out:
                continue
            out.add(cur)
            stack.extend(self.parents[cur])
        return frozenset(out)

    def le(self, x, y):
        """x <= y: x is y or a descendant of y."""
        return x in self.downset(y)

    def p_hat(self, node):
        """Cumulative weight of the down-set."""
        down = self.downset(node)
        return sum(self.p[y] for y in down)

    def parent(self, node):
        self._require(node)
        ps = self.parents[node]
        if len(ps) > 1:
            raise StructureError("%r has several parents" % node)
        return next(iter(ps)) if ps else None

    def lcs(self, x, y):
        """Least common subsumer (join); trees only."""
        if not self.is_tree:
            raise StructureError("join requires a tree taxonomy")
        ax, ay = self.upset(x), self.upset(y)
        common = ax & ay
        # the common ancestor all of whose strict ancestors are also common
        best, best_depth = None, -1
        for node in common:
            depth = len(self.upset(node))
            if depth > best_depth:
                best, best_depth = node, depth
        return best


class Completion:
    """A map node -> SparseVec of one of the four kinds."""

    def __init__(self, kind, vectors):
        self.kind = kind
        self.vectors = vectors

    def __getitem__(self, node):
        if node not in self.vectors:
            raise NotFound("unknown node %r" % node)
        return self.vectors[node]


def p_hat(taxonomy, node):
    return taxonomy.p_hat(node)


def ideal_completion(taxonomy):
    """psi(x) = sum of p(y) e_y over the down-set of x."""
    out = {}
    mode = _mode_of(taxonomy)
    for node in taxonomy.nodes:
        if taxonomy.p[node] == 0:
            raise HypothesisError("ideal completion needs p > 0 everywhere")
    for node in taxonomy.nodes:
        entries = {y: taxonomy.p[y] for y in taxonomy.downset(node)}
        out[node] = SparseVec(entries, mode)
    return Completion("ideal", out)


def information_content(taxonomy, node):
    """-ln of the cumulative probability."""
    mass = taxonomy.p_hat(node)
    if mass <= 0:
        raise HypothesisError("information content of zero-mass node")
    return -math.log(float(mass))


def jiang_conrath(taxonomy, x, y):
    """IC(x) + IC(y) - 2 IC(least common subsumer)."""
    join = taxonomy.lcs(x, y)
    return (
        information_content(taxonomy, x)
        + information_content(taxonomy, y)
        - 2.0 * information_content(taxonomy, join)
    )


def distance_completion(taxonomy):
    """Dual-order ideal completion weighted by IC increments.

    l1 norms equal information content and l1 distances equal the
    Jiang-Conrath measure; joins of the taxonomy become meets.
    """
    if not taxonomy.is_tree:
        raise StructureError("distance completion requires a tree")
    f_ic = {}
    for node in taxonomy.nodes:
        parent = taxonomy.parent(node)
        if parent is None:
            f_ic[node] = 0.0
        else:
            f_ic[node] = information_content(taxonomy, node) - information_content(
                taxonomy, parent
            )
    out = {}
    for node in taxonomy.nodes:
        entries = {y: f_ic[y] for y in taxonomy.upset(node) if f_ic[y] != 0}
        out[node] = SparseVec(entries, FLOAT)
    return Completion("distance", out)


def chain_cover(taxonomy, cap=CHAIN_CAP):
    """All maximal chains (as top-down node lists) plus uniqueness flag.

    Chains follow the cover relation from maximal nodes down to minimal
    ones, children visited in node-id order.  The covering is uniquely
    minimal when every maximal chain owns a node no other chain visits.
    """
    covers = _cover_children(taxonomy)
    chains = []

    def extend(path):
        if len(chains) > cap:
            raise SizeError("more than %d maximal chains" % cap)
        node = path[-1]
        kids = sorted(covers[node])
        if not kids:
            chains.append(list(path))
            return
        for kid in kids:
            path.append(kid)
            extend(path)
            path.pop()

    for root in taxonomy.roots:
        extend([root])
    membership = {n: set() for n in taxonomy.nodes}
    for idx, chain in enumerate(chains):
        for node in chain:
            membership[node].add(idx)
    unique = all(
        any(len(membership[node]) == 1 for node in chain) for chain in chains
    )
    return {"chains": chains, "unique_minimal": unique, "membership": membership}


def _cover_children(taxonomy):
    """Transitive reduction: keep child edges not implied by longer paths."""
    covers = {}
    for node in taxonomy.nodes:
        kids = taxonomy.children[node]
        keep = set()
        for kid in kids:
            implied = any(
                other != kid and kid in taxonomy.downset(other) for other in kids
            )
            if not implied:
                keep.add(kid)
        covers[node] = keep
    return covers


def chain_completion(taxonomy, cover=None):
    """xi(x) = sum over y <= x of p(y) split across y's chains."""
    if cover is None:
        cover = chain_cover(taxonomy)
    membership = cover["membership"]
    mode = _mode_of(taxonomy)
    exact = mode == EXACT
    xi0 = {}
    for node in taxonomy.nodes:
        share = len(membership[node])
        if share == 0:
            raise StructureError("node %r lies on no chain" % node)
        weight = (
            Fraction(taxonomy.p[node], 1) / share
            if exact
            else float(taxonomy.p[node]) / share
        )
        xi0[node] = {("chain%d" % idx): weight for idx in membership[node]}
    out = {}
    for node in taxonomy.nodes:
        entries = {}
        for y in taxonomy.downset(node):
            for dim, w in xi0[y].items():
                entries[dim] = entries.get(dim, 0) + w
        out[node] = SparseVec(entries, mode)
    return Completion("chain", out)


def projection_completion(taxonomy):
    """node -> projection onto its down-set; phi recovers p-hat."""
    return {node: SubsetProjection(taxonomy.downset(node)) for node in taxonomy.nodes}


def projection_phi(taxonomy, projection):
    """phi(A) = ||(A p)+||_1 - ||(A p)-||_1 for subset projections."""
    return sum(taxonomy.p[n] for n in projection.support if n in taxonomy.p)


def term_vector(completion, senses):
    """Renormalized sense sum: sum of pi_i / ||s_i||_1 * psi(s_i)."""
    out = None
    for node, weight in senses:
        if weight < 0:
            raise FormatError("sense probabilities must be >= 0")
        vec = completion[node]
        norm = vec.norm1()
        if norm == 0:
            raise HypothesisError("sense %r has zero norm" % node)
        term = vec.scale(_ratio(weight, norm, vec.mode))
        out = term if out is None else out + term
    if out is None:
        raise FormatError("term needs at least one sense")
    return out


class ProjectionSum:
    """Weighted sum of down-set projections: a term's operator form."""

    def __init__(self, terms):
        merged = {}
        for weight, projection in terms:
            key = projection.support
            merged[key] = merged.get(key, 0) + weight
        self.terms = [
            (w, SubsetProjection(s)) for s, w in merged.items() if w != 0
        ]

    def phi(self, taxonomy):
        return sum(w * projection_phi(taxonomy, p) for w, p in self.terms)

    def __mul__(self, other):
        out = []
        for w1, p1 in self.terms:
            for w2, p2 in other.terms:
                out.append((w1 * w2, p1.product(p2)))
        return ProjectionSum(
            [(w, p) for w, p in out if p.support]
        )

    def __len__(self):
        return len(self.terms)


def term_projection(taxonomy, senses):
    """Probabilistic sum pi_i / phi(P_{s_i}) * P_{s_i}."""
    terms = []
    for node, weight in senses:
        proj = SubsetProjection(taxonomy.downset(node))
        mass = projection_phi(taxonomy, proj)
        if mass == 0:
            raise HypothesisError("sense %r has zero probability mass" % node)
        terms.append((_ratio(weight, mass, _mode_of(taxonomy)), proj))
    return ProjectionSum(terms)


def term_product(a, b):
    """Bilinear expansion of two projection sums."""
    return a * b


def _ratio(num, den, mode):
    if mode == EXACT:
        return Fraction(num) / Fraction(den)
    return float(num) / float(den)


def _mode_of(taxonomy):
    exact = all(isinstance(w, (int, Fraction)) for w in taxonomy.p.values())
    return EXACT if exact else FLOAT


def load_taxonomy(path):
    """Lines `<node><TAB><parent-or-'-'><TAB><p>`; repeats add parents."""
    parents, weights = {}, {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError("%s:%d: expected node, parent, weight" % (path, lineno))
            node, parent, weight = parts
            parents.setdefault(node, set())
            if parent != "-":
                parents.setdefault(parent, set())
                parents[node].add(parent)
            weights[node] = parse_weight(weight)
    if not parents:
        raise FormatError("%s: empty taxonomy" % path)
    return Taxonomy(parents, weights)
