"""Link grammar as creation/annihilation operators.

A disjunct lists left connectors (links to words earlier in the
sentence) then right connectors (links to later words).  Left connectors
become creation operators, right connectors annihilation operators; a
right connector of one word cancels against an equally-typed left
connector of a later word, and crossing or mismatched links kill the
term.  The number of strict parses of a sentence is then the coefficient
of the identity term in the product of its word operators.

Operators truncate to matrices over the basis of creator strings up to a
depth bound, which reproduces the symbolic count whenever the bound
covers the deepest stack of open links in any successful parse.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import FormatError, NoParse, OOV, ParseError
from .munn import BRACKET_ONE, SyntaxElem, munn_tree

IDENTITY_TERM = ((), ())


class Disjunct:
    """One syntactic role: left connectors, right connectors, weight."""

    __slots__ = ("left", "right", "weight")

    def __init__(self, left, right, weight=1):
        self.left = tuple(left)
        self.right = tuple(right)
        if weight < 0:
            raise FormatError("disjunct weights must be >= 0")
        self.weight = weight

    def connectors(self):
        """Connector sequence as (type, is_right) pairs, written order."""
        return [(t, False) for t in self.left] + [(t, True) for t in self.right]

    def __repr__(self):
        body = "".join("|%s>" % t for t in self.left) + "".join(
            "<%s|" % t for t in self.right
        )
        return "Disjunct(%s, w=%s)" % (body or "1", self.weight)


class Lexicon:
    """Word -> disjunct list, with the set of link types used."""

    def __init__(self, entries):
        self.entries = {w: list(ds) for w, ds in entries.items()}
        self.link_types = sorted(
            {t for ds in self.entries.values() for d in ds for t in d.left + d.right}
        )

    def disjuncts(self, word):
        if word not in self.entries:
            raise OOV("word %r not in lexicon" % word)
        return self.entries[word]


def parse_disjunct(text, exact=False):
    """`a- b- c+` style connector list with optional `w@` weight prefix."""
    weight = Fraction(1) if exact else 1.0
    if "@" in text:
        prefix, text = text.split("@", 1)
        weight = Fraction(prefix) if exact else float(prefix)
    left, right = [], []
    for token in text.split():
        if len(token) < 2 or token[-1] not in "+-":
            raise FormatError("bad connector %r (need type+ or type-)" % token)
        link_type, polarity = token[:-1], token[-1]
        if polarity == "-":
            if right:
                raise FormatError(
                    "left connector %r after right connectors" % token
                )
            left.append(link_type)
        else:
            right.append(link_type)
    return Disjunct(left, right, weight)


def load_lexicon(path, exact=False):
    """`<word><TAB><disjunct>[|<disjunct>...]` per line."""
    entries = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t", 1)
            if len(parts) != 2:
                raise FormatError("%s:%d: expected word<TAB>disjuncts" % (path, lineno))
            word, body = parts
            try:
                entries[word] = [
                    parse_disjunct(d.strip(), exact) for d in body.split("|")
                ]
            except FormatError as exc:
                raise FormatError("%s:%d: %s" % (path, lineno, exc)) from exc
    if not entries:
        raise FormatError("%s: empty lexicon" % path)
    return Lexicon(entries)


class FockOperator:
    """Finite sum of normal-ordered terms coeff * creators * annihilators.

    Terms are keyed by (creator string, annihilator string); zero
    coefficients are pruned (floats below 1e-15 count as zero).
    """

    __slots__ = ("terms",)

    PRUNE = 1e-15

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, coeff in terms.items():
                if self._is_zero(coeff):
                    continue
                clean[key] = coeff
        self.terms = clean

    @staticmethod
    def _is_zero(coeff):
        if isinstance(coeff, float):
            return abs(coeff) < FockOperator.PRUNE
        return coeff == 0

    @staticmethod
    def identity(coeff=1):
        return FockOperator({IDENTITY_TERM: coeff})

    @staticmethod
    def creator(link_type):
        return FockOperator({((link_type,), ()): 1})

    @staticmethod
    def annihilator(link_type):
        return FockOperator({((), (link_type,)): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out.get(key, 0) + coeff
        return FockOperator(out)

    def scale(self, alpha):
        return FockOperator({k: alpha * c for k, c in self.terms.items()})

    def __mul__(self, other):
        return normal_order_product(self, other)

    def phi(self):
        """Coefficient of the pure identity term."""
        return self.terms.get(IDENTITY_TERM, 0)

    def __eq__(self, other):
        if not isinstance(other, FockOperator):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "FockOperator(0)"
        bits = []
        for (creators, annihilators), coeff in sorted(self.terms.items()):
            body = "".join("|%s>" % c for c in creators) + "".join(
                "<%s|" % a for a in annihilators
            )
            bits.append("%s%s" % (coeff, body or "*1"))
        return "FockOperator(%s)" % " + ".join(bits)


def _contract(term1, term2):
    """Normal-order the concatenation of two terms; None when it dies."""
    (c1, a1), (c2, a2) = term1, term2
    i, j = len(a1) - 1, 0
    while i >= 0 and j < len(c2):
        if a1[i] != c2[j]:
            return None
        i -= 1
        j += 1
    return (c1 + c2[j:], a1[: i + 1] + a2)


def normal_order_product(left, right):
    """Distribute over term pairs, contracting <x||y> = delta(x,y)."""
    out = {}
    for t1, coeff1 in left.terms.items():
        for t2, coeff2 in right.terms.items():
            key = _contract(t1, t2)
            if key is None:
                continue
            out[key] = out.get(key, 0) + coeff1 * coeff2
    return FockOperator(out)


def word_operator(lexicon, word):
    """Weighted sum of the word's disjunct terms."""
    terms = {}
    for d in lexicon.disjuncts(word):
        key = (d.left, d.right)
        terms[key] = terms.get(key, 0) + d.weight
    return FockOperator(terms)


def sentence_operator(lexicon, words):
    product = FockOperator.identity()
    for word in words:
        product = product * word_operator(lexicon, word)
    return product


def sentence_phi(lexicon, words):
    """phi of the sentence operator; counts strict parses at unit weights."""
    return sentence_operator(lexicon, words).phi()


def parse_count(lexicon, words):
    """Strict non-crossing parse count (weights forced to 1)."""
    unit = Lexicon(
        {
            w: [Disjunct(d.left, d.right, 1) for d in ds]
            for w, ds in lexicon.entries.items()
        }
    )
    return sentence_phi(unit, words)


def track_disjuncts(lexicon, words):
    """Disjunct assignments of the surviving parses, with weights.

    Each disjunct is tagged with a marker in an auxiliary creation-only
    space; markers just accumulate across products, so the marker string
    of each surviving identity term spells out which disjunct every word
    used.
    """
    products = {(IDENTITY_TERM[0], IDENTITY_TERM[1], ()): 1}
    for index, word in enumerate(words):
        next_products = {}
        for (c1, a1, markers), coeff1 in products.items():
            for slot, d in enumerate(lexicon.disjuncts(word)):
                if FockOperator._is_zero(d.weight):
                    continue
                key = _contract((c1, a1), (d.left, d.right))
                if key is None:
                    continue
                full = (key[0], key[1], markers + (slot,))
                next_products[full] = next_products.get(full, 0) + coeff1 * d.weight
        products = next_products
    survivors = [
        (markers, coeff)
        for (c, a, markers), coeff in products.items()
        if (c, a) == IDENTITY_TERM and not FockOperator._is_zero(coeff)
    ]
    if not survivors:
        raise NoParse("no disjunct combination parses %r" % " ".join(words))
    return sorted(survivors)


class StochasticResult:
    """Raw weighted phi plus per-parse renormalized probabilities."""

    __slots__ = ("raw", "parses")

    def __init__(self, raw, parses):
        self.raw = raw
        self.parses = parses  # list of (assignment, weight, probability)


def stochastic_phi(lexicon, words):
    """Weighted parse mass and the per-parse probability breakdown."""
    assignments = track_disjuncts(lexicon, words)  # raises NoParse
    raw = sum(w for _, w in assignments)
    if FockOperator._is_zero(raw):
        raise NoParse("surviving weight is zero")
    parses = [(a, w, w / raw) for a, w in assignments]
    return StochasticResult(raw, parses)


# -- matrix representation ---------------------------------------------


def fock_basis(link_types, depth):
    """Creator strings of length <= depth in length-then-lex order."""
    link_types = sorted(link_types)
    basis = [()]
    frontier = [()]
    for _ in range(depth):
        frontier = [s + (t,) for s in frontier for t in link_types]
        frontier.sort()
        basis.extend(frontier)
    return basis


def creator_matrix(link_type, link_types, depth, dtype=np.int64):
    """|a> maps basis string s to the string a+s, dropped beyond depth."""
    basis = fock_basis(link_types, depth)
    index = {s: i for i, s in enumerate(basis)}
    matrix = np.zeros((len(basis), len(basis)), dtype=dtype)
    for s, col in index.items():
        target = (link_type,) + s
        row = index.get(target)
        if row is not None:
            matrix[row, col] = 1
    return matrix


def to_matrix(op, link_types, depth, dtype=None):
    """Truncated matrix of a Fock operator (annihilators transpose)."""
    if depth < 1:
        raise FormatError("depth must be >= 1")
    if dtype is None:
        dtype = (
            np.int64
            if all(isinstance(c, int) for c in op.terms.values())
            else np.float64
        )
    basis = fock_basis(link_types, depth)
    dim = len(basis)
    creators = {
        t: creator_matrix(t, link_types, depth, dtype) for t in sorted(set(link_types))
    }
    total = np.zeros((dim, dim), dtype=dtype)
    for (cs, anns), coeff in op.terms.items():
        term = np.eye(dim, dtype=dtype)
        for c in cs:
            term = term @ creators[c]
        for a in anns:
            term = term @ creators[a].T
        if dtype == np.float64:
            total = total + float(coeff) * term
        else:
            total = total + int(coeff) * term
    return total


def matrix_phi(matrix):
    """Entry (Omega, Omega) of a (product of) truncated matrices."""
    return matrix[0, 0]


def sentence_matrix_phi(lexicon, words, depth):
    """phi via the truncated matrix product of the word operators."""
    types = lexicon.link_types
    product = None
    for word in words:
        m = to_matrix(word_operator(lexicon, word), types, depth)
        product = m if product is None else product @ m
    if product is None:
        return 1
    return matrix_phi(product)


# -- free-inverse-semigroup translation ---------------------------------


def disjunct_to_fis(disjunct):
    """Right connectors open links (generators), left connectors close
    them (inverses), in written order."""
    word = [(t, -1) for t in disjunct.left]
    word += [(t, 1) for t in disjunct.right]
    return word


def parse_to_fis(lexicon, words, assignment):
    """Concatenate the chosen disjuncts' translations.

    Returns the word, its Munn tree, idempotence, and whether the bracket
    reduction certifies a strict parse (idempotence alone does not).
    """
    if len(assignment) != len(words):
        raise FormatError("assignment must pick one disjunct per word")
    word = []
    stack = []
    strict = True
    for w, slot in zip(words, assignment):
        disjuncts = lexicon.disjuncts(w)
        if not 0 <= slot < len(disjuncts):
            raise FormatError("word %r has no disjunct %d" % (w, slot))
        d = disjuncts[slot]
        word.extend(disjunct_to_fis(d))
        for link_type, is_right in d.connectors():
            if is_right:
                stack.append(link_type)
            else:
                if not stack or stack[-1] != link_type:
                    strict = False
                else:
                    stack.pop()
    strict = strict and not stack
    tree = munn_tree(word)
    return {
        "word": word,
        "tree": tree,
        "idempotent": tree.is_idempotent(),
        "strict_parse": strict,
    }


def sentence_syntax_element(lexicon, words, assignment):
    """Product in the syntax semigroup FIS x bracket / zero."""
    element = SyntaxElem(munn_tree([]), BRACKET_ONE)
    for w, slot in zip(words, assignment):
        d = lexicon.disjuncts(w)[slot]
        for link_type, is_right in d.connectors():
            element = element * SyntaxElem.from_connector(link_type, is_right)
    return element


# -- categorial grammar translation --------------------------------------


class Category:
    """Categorial category tree: basic type or a slash combination."""

    __slots__ = ("kind", "left", "right", "name")

    def __init__(self, kind, name=None, left=None, right=None):
        self.kind = kind  # "basic" | "over" (x/y) | "under" (y\x)
        self.name = name
        self.left = left
        self.right = right

    def label(self):
        if self.kind == "basic":
            return self.name
        if self.kind == "over":
            return "(%s/%s)" % (self.left.label(), self.right.label())
        return "(%s\\%s)" % (self.left.label(), self.right.label())


def parse_category(text):
    """Parse `A`, `A/B`, `B\\A`, with parentheses for grouping."""
    tokens = []
    for ch in text:
        if ch in "()/\\":
            tokens.append(ch)
        elif ch.isspace():
            continue
        else:
            if tokens and isinstance(tokens[-1], list):
                tokens[-1].append(ch)
            else:
                tokens.append([ch])
    tokens = [("".join(t) if isinstance(t, list) else t) for t in tokens]
    pos = 0

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of category")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            node = expr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ParseError("missing )")
            pos += 1
            return node
        if tok in ")/\\":
            raise ParseError("unexpected %r" % tok)
        pos += 1
        return Category("basic", name=tok)

    def expr():
        nonlocal pos
        node = atom()
        while pos < len(tokens) and tokens[pos] in "/\\":
            op = tokens[pos]
            pos += 1
            right = atom()
            if op == "/":
                node = Category("over", left=node, right=right)
            else:
                # y \ x: the node so far is y, the argument side
                node = Category("under", left=node, right=right)
        return node

    node = expr()
    if pos != len(tokens):
        raise ParseError("trailing tokens in category")
    return node


def categorial_to_lg(category):
    """The link grammar translation E of a categorial expression.

    E(A) = |A> + <A|; E(x/y) = |x/y> + <x/y| + E(x)<y|;
    E(y\\x) = |y\\x> + <y\\x| + |y>E(x).  Compound links are labelled by
    the category's canonical string, so the operator count stays linear
    in the category size.
    """
    if isinstance(category, str):
        category = parse_category(category)
    label = category.label()
    base = FockOperator.creator(label) + FockOperator.annihilator(label)
    if category.kind == "basic":
        return base
    if category.kind == "over":
        inner = categorial_to_lg(category.left)
        arg = FockOperator.annihilator(category.right.label())
        return base + inner * arg
    inner = categorial_to_lg(category.right)
    arg = FockOperator.creator(category.left.label())
    return base + arg * inner
