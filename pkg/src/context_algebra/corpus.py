"""Corpus models and the context algebra.

A corpus model weights every finite token sequence; the context vector of
a string x collects the model weight of every document split u+x+v into
the dimension labelled by the context pair (u, v).  The probability
functional phi divides signed l1 mass by the mass of the empty string's
context vector, so phi of the empty string is exactly 1.

Multiplication is only defined on the subspace spanned by context vectors
of strings: pick a basis of strings, expand both factors, and concatenate
basis strings pairwise.  The result does not depend on which basis was
chosen, which is what makes the construction an algebra worth having.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import (
    BasisError,
    DegenerateCorpus,
    EmptyCorpus,
    FormatError,
    ModeError,
    SpanError,
    Undefined,
)
from .riesz import EXACT, FLOAT, SparseVec

PAIR_SEP = "⊣"  # left context ⊣ right context


def pair_label(left, right):
    """Canonical label for the context pair (left, right), token tuples."""
    return " ".join(left) + PAIR_SEP + " ".join(right)


def parse_weight(text):
    """Parse a weight literal; fractions like 1/3 stay exact."""
    text = text.strip()
    try:
        if "/" in text or "." not in text and "e" not in text.lower():
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("bad weight %r" % text) from exc


class ContextVector:
    """Context vector of a string: entry at (u, v) equals C(u x v)."""

    __slots__ = ("vec", "source")

    def __init__(self, vec, source):
        self.vec = vec
        self.source = source

    def __repr__(self):
        return "ContextVector(%r, %r)" % (self.source, self.vec)


def _as_vec(u):
    return u.vec if isinstance(u, ContextVector) else u


class CorpusModel:
    """Weighted distribution over token sequences.

    ``kind`` is "probabilistic" (weights sum to 1) or "general" (any
    non-negative weights).  Immutable after construction.
    """

    def __init__(self, docs, kind="probabilistic", mode=FLOAT):
        if kind not in ("probabilistic", "general"):
            raise FormatError("unknown corpus kind %r" % kind)
        self.kind = kind
        self.mode = mode
        clean = {}
        for doc, weight in docs.items():
            doc = tuple(doc)
            if weight < 0:
                raise FormatError("negative document weight %r" % (weight,))
            if weight == 0:
                continue
            clean[doc] = clean.get(doc, self._zero()) + self._num(weight)
        self.docs = clean
        if kind == "probabilistic":
            total = sum(clean.values())
            tol = 0 if mode == EXACT else 1e-9
            if abs(total - 1) > tol:
                raise FormatError(
                    "probabilistic corpus weights sum to %s, not 1" % total
                )
        self.alphabet = frozenset(t for doc in clean for t in doc)
        self._eps_mass = None

    def _zero(self):
        return Fraction(0) if self.mode == EXACT else 0.0

    def _num(self, x):
        if self.mode == EXACT:
            if isinstance(x, float):
                raise ModeError("float weight in exact corpus")
            return Fraction(x)
        return float(x)

    def weight(self, doc):
        return self.docs.get(tuple(doc), self._zero())

    # -- context vectors ------------------------------------------------

    def context_vector(self, x):
        """Collect C(uxv) over every occurrence of x, overlaps included.

        The empty string occurs |d|+1 times in a document d.
        """
        x = tuple(x)
        n = len(x)
        entries = {}
        for doc, weight in self.docs.items():
            for i in range(len(doc) - n + 1):
                if doc[i:i + n] == x:
                    label = pair_label(doc[:i], doc[i + n:])
                    entries[label] = entries.get(label, self._zero()) + weight
        return ContextVector(SparseVec(entries, self.mode), " ".join(x))

    def epsilon_mass(self):
        """l1 norm of the empty string's context vector: mean of |d|+1."""
        if self._eps_mass is None:
            self._eps_mass = sum(
                ((len(doc) + 1) * w for doc, w in self.docs.items()), self._zero()
            )
        return self._eps_mass

    # -- probability and entailment --------------------------------------

    def phi(self, u):
        """Context-theoretic probability of a (signed) context vector."""
        u = _as_vec(u)
        mass = self.epsilon_mass()
        if mass == 0:
            raise DegenerateCorpus("empty-string context mass is zero")
        return (u.pos().norm1() - u.neg().norm1()) / mass

    def entailment(self, x, y):
        """Degree of entailment phi(x^ ^ y^) / phi(x^); undefined at 0."""
        xv = self.context_vector(x).vec
        yv = self.context_vector(y).vec
        px = self.phi(xv)
        if px == 0:
            raise Undefined("phi of %r is zero" % (" ".join(x),))
        return self.phi(xv.meet(yv)) / px

    def substrings(self, max_len=None):
        """All strings with non-zero context vectors (document substrings)."""
        seen = {()}
        for doc in self.docs:
            top = len(doc) if max_len is None else min(max_len, len(doc))
            for n in range(1, top + 1):
                for i in range(len(doc) - n + 1):
                    seen.add(doc[i:i + n])
        return sorted(seen, key=lambda s: (len(s), s))


def ingest(weighted_docs, general=False, mode=FLOAT):
    """Build a corpus model from (weight, token-sequence) pairs.

    Duplicates merge by summing weights.  Probabilistic models normalize,
    warning when the raw weights did not already sum to 1.
    """
    docs = {}
    total = Fraction(0) if mode == EXACT else 0.0
    count = 0
    for weight, tokens in weighted_docs:
        if weight < 0:
            raise FormatError("negative weight %r" % (weight,))
        doc = tuple(tokens)
        docs[doc] = docs.get(doc, 0) + weight
        total += weight
        count += 1
    if count == 0:
        raise EmptyCorpus("no documents")
    if general:
        return CorpusModel(docs, "general", mode)
    if total == 0:
        raise EmptyCorpus("all weights zero")
    tol = 0 if mode == EXACT else 1e-9
    if abs(total - 1) > tol:
        warnings.warn("weights sum to %s; normalizing" % total, stacklevel=2)
        docs = {d: w / total for d, w in docs.items()}
    return CorpusModel(docs, "probabilistic", mode)


def load_corpus(path, general=False, mode=FLOAT):
    """Read `<weight><TAB><token token ...>` lines; '#' lines are comments."""
    pairs = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError("%s:%d: expected weight<TAB>tokens" % (path, lineno))
            weight = parse_weight(parts[0])
            if mode == FLOAT:
                weight = float(weight)
            pairs.append((weight, parts[1].split()))
    return ingest(pairs, general=general, mode=mode)


# -- linear algebra over sparse label spaces ---------------------------


def solve_coordinates(columns, target, mode):
    """Solve sum_i alpha_i columns[i] = target by Gaussian elimination.

    Works identically for Fraction and float entries.  Raises BasisError
    when the columns are dependent and SpanError when the system is
    inconsistent (residual above 1e-9 in float mode, non-zero in exact).
    """
    labels = sorted(set().union(target.support(), *[c.support() for c in columns]))
    rows = [[c[lab] for c in columns] + [target[lab]] for lab in labels]
    n_cols = len(columns)
    tol = 0 if mode == EXACT else 1e-9

    pivot_rows = []
    row_used = [False] * len(rows)
    for col in range(n_cols):
        best, best_val = None, tol
        for r in range(len(rows)):
            if not row_used[r] and abs(rows[r][col]) > best_val:
                best, best_val = r, abs(rows[r][col])
        if best is None:
            raise BasisError("singular coordinate solve: column %d dependent" % col)
        row_used[best] = True
        pivot_rows.append((col, best))
        pivot = rows[best][col]
        for r in range(len(rows)):
            if r != best and rows[r][col] != 0:
                factor = rows[r][col] / pivot
                for c in range(col, n_cols + 1):
                    rows[r][c] -= factor * rows[best][c]
    for r in range(len(rows)):
        if not row_used[r] and abs(rows[r][n_cols]) > tol:
            raise SpanError("vector outside basis span (residual %s)" % rows[r][n_cols])
    coords = [None] * n_cols
    for col, r in pivot_rows:
        coords[col] = rows[r][n_cols] / rows[r][col]
    return coords


def _independent(existing, candidate, mode):
    """Is candidate outside the span of existing vectors?"""
    if not candidate:
        return False
    if not existing:
        return True
    try:
        solve_coordinates(existing, candidate, mode)
    except SpanError:
        return True
    return False


class AlgebraBasis:
    """Strings whose context vectors span the subspace of interest.

    Independence of the context vectors is verified on construction.
    """

    def __init__(self, model, strings):
        self.model = model
        self.strings = [tuple(s) for s in strings]
        self.vectors = [model.context_vector(s).vec for s in self.strings]
        for i in range(len(self.vectors)):
            if not _independent(self.vectors[:i], self.vectors[i], model.mode):
                raise BasisError(
                    "context vector of %r depends on earlier basis strings"
                    % (" ".join(self.strings[i]),)
                )

    def coordinates(self, u):
        return solve_coordinates(self.vectors, _as_vec(u), self.model.mode)

    def product(self, u, v):
        """Multiply two vectors of the span via basis-string concatenation."""
        alphas = self.coordinates(u)
        betas = self.coordinates(v)
        zero = Fraction(0) if self.model.mode == EXACT else 0.0
        out = SparseVec({}, self.model.mode)
        for a, x in zip(alphas, self.strings):
            if a == zero:
                continue
            for b, y in zip(betas, self.strings):
                if b == zero:
                    continue
                out = out + self.model.context_vector(x + y).vec.scale(a * b)
        return out


def choose_basis(model, candidates):
    """Greedy basis in length-then-lexicographic order.

    Keeps each candidate whose context vector is independent of those kept
    so far; ties in the scan order are broken by the sort, which makes the
    choice reproducible.
    """
    ordered = sorted({tuple(c) for c in candidates}, key=lambda s: (len(s), s))
    kept, vecs = [], []
    for cand in ordered:
        vec = model.context_vector(cand).vec
        if _independent(vecs, vec, model.mode):
            kept.append(cand)
            vecs.append(vec)
    return AlgebraBasis(model, kept)
