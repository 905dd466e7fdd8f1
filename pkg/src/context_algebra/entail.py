"""Concrete entailment theories for text: subsequences, lexical overlap,
document projections, and topic-model projections.

Each theory represents a token sequence in a lattice-ordered structure
and scores entailment with the same ratio phi(x ^ y) / phi(x), so the
scores are directly comparable across theories.
"""

from __future__ import annotations

import random

from .errors import FormatError, SizeError, Undefined
from .riesz import EXACT, FLOAT, SparseVec

MAX_SUBSEQ_LEN = 20

EMPTY_LABEL = "ε"  # basis label for the empty subsequence


def _phi(u):
    return u.pos().norm1() - u.neg().norm1()


def distinct_subsequences(tokens):
    """Set of distinct subsequences (as tuples), empty one included."""
    subs = {()}
    for tok in tokens:
        subs |= {s + (tok,) for s in subs}
    return subs


def _guard(tokens):
    if len(tokens) > MAX_SUBSEQ_LEN:
        raise SizeError(
            "sequence of %d tokens exceeds the 2^n subsequence guard (%d)"
            % (len(tokens), MAX_SUBSEQ_LEN)
        )


def _seq_label(seq):
    return " ".join(seq) if seq else EMPTY_LABEL


def _class_label(seq):
    return " ".join(sorted(seq)) if seq else EMPTY_LABEL


def _subseq_vec(tokens, label_of, mode):
    _guard(tokens)
    tokens = tuple(tokens)
    if mode == EXACT:
        from fractions import Fraction

        weight = Fraction(1, 2 ** len(tokens))
    else:
        weight = 1.0 / 2 ** len(tokens)
    entries = {}
    for sub in distinct_subsequences(tokens):
        label = label_of(sub)
        entries[label] = entries.get(label, 0) + weight
    return SparseVec(entries, mode)


def subseq_repr(tokens, mode=FLOAT):
    """Sum of distinct subsequences, each weighted 1/2^|x|.

    Duplicate index subsets that spell the same string collapse to one
    basis dimension, so the l1 norm is at most 1.
    """
    return _subseq_vec(tokens, _seq_label, mode)


def _count_vec(tokens, label_of):
    """Index-subset counts per basis label: of the 2^n subsets of token
    positions, how many spell a subsequence in each class."""
    _guard(tokens)
    counts = {(): 1}
    for tok in tuple(tokens):
        new = dict(counts)
        for s, c in counts.items():
            key = s + (tok,)
            new[key] = new.get(key, 0) + c
        counts = new
    out = {}
    for s, c in counts.items():
        label = label_of(s)
        out[label] = out.get(label, 0) + c
    return out


def _scaled_entail(x, y, label_of, mode):
    """phi(x^ ^ y^) / phi(x^) with both vectors on a common scale.

    Each representation carries its own 1/2^|x| factor; comparing the two
    raw vectors would make the meet depend on the length difference
    rather than on shared subsequences, so the meet is taken on the
    scale-free index-subset counts.  Entailment is then complete exactly
    when y covers every subsequence mass of x, and the score is blind to
    token order in the overlap variant.
    """
    cx = _count_vec(x, label_of)
    cy = _count_vec(y, label_of)
    total = sum(cx.values())
    shared = sum(min(n, cy[label]) for label, n in cx.items() if label in cy)
    if mode == EXACT:
        from fractions import Fraction

        return Fraction(shared, total)
    return shared / total


def subseq_entail(x, y, mode=FLOAT):
    """1 exactly when x is a subsequence of y."""
    return _scaled_entail(x, y, _seq_label, mode)


def overlap_repr(tokens, mode=FLOAT):
    """Subsequence representation over sorted-token multiset classes."""
    return _subseq_vec(tokens, _class_label, mode)


def overlap_entail(x, y, mode=FLOAT):
    """Order-blind variant of subseq_entail (multiset classes)."""
    return _scaled_entail(x, y, _class_label, mode)


class DocumentCollection:
    """Documents reduced to token sets for containment queries."""

    def __init__(self, docs):
        self.docs = [frozenset(d) for d in docs]
        if not self.docs:
            raise FormatError("empty document collection")

    def containing(self, tokens):
        need = set(tokens)
        return sum(1 for d in self.docs if need <= d)


def docproj_entail(collection, x, y):
    """Share of x-containing documents that also contain all of y."""
    n_x = collection.containing(x)
    if n_x == 0:
        raise Undefined("no document contains all tokens of the antecedent")
    n_xy = collection.containing(set(x) | set(y))
    return n_xy / n_x


def glickman_lep(collection, u, v):
    """Lexical entailment probability n_{u,v} / n_v for single tokens."""
    n_v = collection.containing([v])
    if n_v == 0:
        raise Undefined("token %r occurs in no document" % v)
    return collection.containing([u, v]) / n_v


class TopicModel:
    """Word-given-topic table with a Dirichlet prior over topic mixtures.

    ``beta`` has one row per topic, each summing to 1 over the vocabulary;
    ``alpha`` is the Dirichlet parameter and ``doc_len`` the fixed document
    length used for occurrence probabilities.
    """

    def __init__(self, beta, alpha, doc_len, vocab):
        self.topics = len(beta)
        self.vocab = list(vocab)
        self._index = {w: i for i, w in enumerate(self.vocab)}
        if len(alpha) != self.topics:
            raise FormatError("alpha length != number of topics")
        if any(a <= 0 for a in alpha):
            raise FormatError("alpha components must be positive")
        if doc_len < 1:
            raise FormatError("document length must be positive")
        for row in beta:
            if len(row) != len(self.vocab):
                raise FormatError("beta row length != vocabulary size")
            if abs(sum(row) - 1.0) > 1e-9:
                raise FormatError("beta rows must sum to 1")
        self.beta = [list(row) for row in beta]
        self.alpha = list(alpha)
        self.doc_len = int(doc_len)

    def word_prob(self, theta, word):
        """p_theta(word): chance of >=1 occurrence in a document."""
        col = self._index.get(word)
        if col is None:
            per_slot = 0.0
        else:
            per_slot = sum(self.beta[z][col] * theta[z] for z in range(self.topics))
        if per_slot <= 0.0:
            return 0.0
        if per_slot >= 1.0:
            return 1.0
        return 1.0 - (1.0 - per_slot) ** self.doc_len


def topic_word_prob(model, theta, word):
    return model.word_prob(theta, word)


def _dirichlet(rng, alpha):
    draws = [rng.gammavariate(a, 1.0) for a in alpha]
    total = sum(draws)
    return [d / total for d in draws]


def _mc_phi(model, word_sets, samples, seed):
    """Monte-Carlo estimates of phi(P_x) for several word sets at once,
    sharing the same theta draws (common random numbers).  Words multiply
    in sorted order so equal sets give bit-identical products."""
    if samples < 1:
        raise FormatError("samples must be >= 1")
    word_sets = [sorted(set(words)) for words in word_sets]
    rng = random.Random(seed)
    sums = [0.0] * len(word_sets)
    for _ in range(samples):
        theta = _dirichlet(rng, model.alpha)
        for i, words in enumerate(word_sets):
            value = 1.0
            for w in words:
                value *= model.word_prob(theta, w)
                if value == 0.0:
                    break
            sums[i] += value
    return [s / samples for s in sums]


def topicproj_phi(model, x, samples, seed):
    """phi(P_x): probability a random document contains every word of x."""
    (est,) = _mc_phi(model, [set(x)], samples, seed)
    return est


def topicproj_entail(model, x, y, samples, seed):
    """phi(P_{x u y}) / phi(P_x) over one shared theta sample stream.

    The ratio is mathematically at most 1 (the numerator only adds
    factors <= 1 per sample); the clamp removes last-ulp rounding noise.
    """
    num, den = _mc_phi(model, [set(x) | set(y), set(x)], samples, seed)
    if den == 0.0:
        raise Undefined("phi estimate of the antecedent is zero")
    return min(num / den, 1.0)


def pair_seed(seed, index):
    """Independent per-pair stream for parallel batch scoring."""
    return (seed * 1000003 + index * 8191 + 1) & 0x7FFFFFFF


# -- file formats -----------------------------------------------------


def load_rte_pairs(path):
    """`<id><TAB><text><TAB><hypothesis><TAB><gold 0|1>` per line."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4 or parts[3] not in ("0", "1"):
                raise FormatError("%s:%d: expected id, text, hypothesis, gold" % (path, lineno))
            pairs.append((parts[0], parts[1].split(), parts[2].split(), int(parts[3])))
    if not pairs:
        raise FormatError("%s: no pairs" % path)
    return pairs


def load_topic_model(path):
    """Header `K V N alpha...`, vocabulary line, then K beta rows."""
    with open(path, encoding="utf-8") as handle:
        lines = [l.strip() for l in handle if l.strip() and not l.startswith("#")]
    if not lines:
        raise FormatError("%s: empty topic model" % path)
    head = lines[0].split()
    try:
        k, v, n = int(head[0]), int(head[1]), int(head[2])
        alpha = [float(a) for a in head[3:]]
    except ValueError as exc:
        raise FormatError("%s: bad header" % path) from exc
    if len(alpha) != k:
        raise FormatError("%s: header must carry %d alpha values" % (path, k))
    if len(lines) != 2 + k:
        raise FormatError("%s: expected vocabulary line plus %d topic rows" % (path, k))
    vocab = lines[1].split()
    if len(vocab) != v:
        raise FormatError("%s: vocabulary line must list %d words" % (path, v))
    beta = []
    for row_line in lines[2:]:
        row = [float(x) for x in row_line.split()]
        beta.append(row)
    return TopicModel(beta, alpha, n, vocab)
