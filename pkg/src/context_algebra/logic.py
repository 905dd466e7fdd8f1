"""Logical languages as projection algebras.

A logical class is represented canonically: for propositional languages
as a truth-table bitstring over the 2^n assignments (bit i gives the
value under assignment i, where atom j is true iff bit j of i is set);
for abstract languages as an opaque class id with an explicit entailment
relation.

Probability enters through a weight function p over classes with p zero
on everything entailing bottom; p_entails(u) sums p over the down-set of
u and behaves like a probability on the entailment lattice.  Weighted
forms (lists of class/weight pairs) represent ambiguous sentences; their
meets are computed exactly by scanning the support of p, with classes
compared through their minterm decompositions.

The four propositional projection identities are checked on the space
indexed by truth assignments, where every class's projection keeps the
assignments satisfying it.  That is the space on which conjunction,
disjunction and negation translate exactly into the operator identities
(on spaces indexed by whole classes the negation identity has
counterexamples, e.g. at the basis vector of the top class).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .corpus import CorpusModel, parse_weight
from .errors import (
    AssignmentError,
    FormatError,
    NormError,
    NotInLanguage,
    ParamError,
    SizeError,
    Undefined,
)
from .riesz import SparseVec, SubsetProjection

MAX_ATOMS = 10
MAX_ENUM_BITS = 16  # largest true-set size for which down-sets are enumerated

DIAMOND = "◇"


# -- propositional formulas -------------------------------------------


class PropFormula:
    """Syntax tree over atoms a0..a9 with and/or/not and constants."""

    __slots__ = ("kind", "args")

    def __init__(self, kind, *args):
        self.kind = kind
        self.args = args

    @staticmethod
    def atom(index):
        return PropFormula("atom", index)

    @staticmethod
    def top():
        return PropFormula("top")

    @staticmethod
    def bot():
        return PropFormula("bot")

    def __and__(self, other):
        return PropFormula("and", self, other)

    def __or__(self, other):
        return PropFormula("or", self, other)

    def __invert__(self):
        return PropFormula("not", self)

    def trueset(self, n_atoms):
        """Bitmask over assignments 0..2^n-1 where the formula holds."""
        full = (1 << (1 << n_atoms)) - 1
        if self.kind == "atom":
            index = self.args[0]
            if not 0 <= index < n_atoms:
                raise FormatError("atom index %d out of range" % index)
            mask = 0
            for assignment in range(1 << n_atoms):
                if (assignment >> index) & 1:
                    mask |= 1 << assignment
            return mask
        if self.kind == "top":
            return full
        if self.kind == "bot":
            return 0
        if self.kind == "and":
            return self.args[0].trueset(n_atoms) & self.args[1].trueset(n_atoms)
        if self.kind == "or":
            return self.args[0].trueset(n_atoms) | self.args[1].trueset(n_atoms)
        if self.kind == "not":
            return full & ~self.args[0].trueset(n_atoms)
        raise FormatError("unknown formula kind %r" % self.kind)

    def lindenbaum(self, n_atoms):
        return class_label(n_atoms, self.trueset(n_atoms))


def class_label(n_atoms, mask):
    """Canonical truth-table bitstring, assignment 0 leftmost."""
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(1 << n_atoms))


def class_mask(n_atoms, label):
    if len(label) != (1 << n_atoms) or set(label) - {"0", "1"}:
        raise NotInLanguage("bad class bitstring %r for %d atoms" % (label, n_atoms))
    mask = 0
    for i, ch in enumerate(label):
        if ch == "1":
            mask |= 1 << i
    return mask


# -- languages ---------------------------------------------------------


class ProbLogicalLanguage:
    """Finite poset of classes, a bottom, and a weight function p."""

    def entails(self, u, v):
        raise NotImplementedError

    def downset(self, u):
        raise NotImplementedError

    def p_entails(self, u):
        """Sum of p over the (reflexive) down-set of u."""
        return sum(
            (w for v, w in self.p.items() if self.entails(v, u)),
            self._zero(),
        )

    def meet_mass(self, u, v):
        """p-mass of the intersection of two down-sets."""
        return sum(
            (w for c, w in self.p.items() if self.entails(c, u) and self.entails(c, v)),
            self._zero(),
        )

    def _zero(self):
        return Fraction(0) if all(isinstance(w, (int, Fraction)) for w in self.p.values()) else 0.0

    def p_hat(self):
        """p as a vector over class labels."""
        return SparseVec(
            {u: float(w) for u, w in self.p.items() if w != 0}, "float"
        )

    def ideal_projection(self, u):
        return SubsetProjection(self.downset(u))

    def phi_projection(self, projection):
        """phi(P) = ||P p_hat||_1; equals p_entails on ideal projections."""
        return sum((w for u, w in self.p.items() if u in projection.support), self._zero())


class PropositionalLanguage(ProbLogicalLanguage):
    """All Lindenbaum classes over n atoms; p has finite support."""

    def __init__(self, n_atoms, p, probabilistic=None):
        if not 1 <= n_atoms <= MAX_ATOMS:
            raise SizeError("atoms must be 1..%d" % MAX_ATOMS)
        self.n_atoms = n_atoms
        self.bottom = class_label(n_atoms, 0)
        self.top = class_label(n_atoms, (1 << (1 << n_atoms)) - 1)
        clean = {}
        for label, weight in p.items():
            mask = class_mask(n_atoms, label)
            if weight < 0:
                raise FormatError("negative class weight")
            if mask == 0 and weight != 0:
                raise FormatError("p(bottom) must be zero")
            if weight != 0:
                clean[label] = weight
        self.p = clean
        total = sum(clean.values())
        if probabilistic is None:
            probabilistic = abs(total - 1) <= 1e-9
        elif probabilistic and abs(total - 1) > 1e-9:
            raise NormError("p does not sum to 1")
        self.is_probabilistic = probabilistic

    @staticmethod
    def uniform(n_atoms, exact=True):
        """Uniform p over all non-bottom classes (enumerable n only)."""
        if (1 << n_atoms) > MAX_ENUM_BITS:
            raise SizeError("cannot enumerate classes for %d atoms" % n_atoms)
        count = (1 << (1 << n_atoms)) - 1
        weight = Fraction(1, count) if exact else 1.0 / count
        p = {
            class_label(n_atoms, mask): weight
            for mask in range(1, count + 1)
        }
        return PropositionalLanguage(n_atoms, p, probabilistic=True)

    def contains(self, u):
        try:
            class_mask(self.n_atoms, u)
        except NotInLanguage:
            return False
        return True

    def entails(self, u, v):
        mu, mv = class_mask(self.n_atoms, u), class_mask(self.n_atoms, v)
        return mu & ~mv == 0

    def downset(self, u):
        """All classes whose true-set is contained in u's."""
        mask = class_mask(self.n_atoms, u)
        bits = [i for i in range(1 << self.n_atoms) if (mask >> i) & 1]
        if len(bits) > MAX_ENUM_BITS:
            raise SizeError("down-set of %r has 2^%d classes" % (u, len(bits)))
        out = set()
        for r in range(len(bits) + 1):
            for combo in itertools.combinations(bits, r):
                sub = 0
                for b in combo:
                    sub |= 1 << b
                out.add(class_label(self.n_atoms, sub))
        return out

    def meet_class(self, u, v):
        return class_label(
            self.n_atoms, class_mask(self.n_atoms, u) & class_mask(self.n_atoms, v)
        )

    def all_classes(self):
        if (1 << self.n_atoms) > MAX_ENUM_BITS:
            raise SizeError("cannot enumerate classes for %d atoms" % self.n_atoms)
        return [
            class_label(self.n_atoms, mask)
            for mask in range(1 << (1 << self.n_atoms))
        ]


class AbstractLanguage(ProbLogicalLanguage):
    """Explicit finite poset: classes, entailment edges, bottom, p."""

    def __init__(self, classes, edges, bottom, p, probabilistic=None):
        self.classes = list(dict.fromkeys(classes))
        index = set(self.classes)
        if bottom not in index:
            raise NotInLanguage("bottom %r not among classes" % bottom)
        self.bottom = bottom
        down = {c: {c} for c in self.classes}  # down[u] = {v : v entails u}
        for u, v in edges:
            if u not in index or v not in index:
                raise NotInLanguage("edge (%r, %r) uses unknown class" % (u, v))
            down[v].add(u)
        # transitive closure: v entails u and w entails v => w entails u
        changed = True
        while changed:
            changed = False
            for u in self.classes:
                extra = set()
                for v in down[u]:
                    extra |= down[v]
                if not extra <= down[u]:
                    down[u] |= extra
                    changed = True
        for u in self.classes:
            down[u].add(bottom)
        self._down = {u: frozenset(vs) for u, vs in down.items()}
        bottom_entailers = self._down[bottom]
        clean = {}
        for label, weight in p.items():
            if label not in index:
                raise NotInLanguage("p assigns weight to unknown class %r" % label)
            if weight < 0:
                raise FormatError("negative class weight")
            if label in bottom_entailers and weight != 0:
                raise FormatError("p must vanish on classes entailing bottom")
            if weight != 0:
                clean[label] = weight
        self.p = clean
        total = sum(clean.values())
        if probabilistic is None:
            probabilistic = abs(total - 1) <= 1e-9
        elif probabilistic and abs(total - 1) > 1e-9:
            raise NormError("p does not sum to 1")
        self.is_probabilistic = probabilistic

    def contains(self, u):
        return u in self._down

    def entails(self, u, v):
        if v not in self._down:
            raise NotInLanguage("unknown class %r" % v)
        return u in self._down[v]

    def downset(self, u):
        if u not in self._down:
            raise NotInLanguage("unknown class %r" % u)
        return set(self._down[u])

    def all_classes(self):
        return list(self.classes)


def downset(language, u):
    if hasattr(language, "contains") and not language.contains(u):
        raise NotInLanguage("unknown class %r" % u)
    return language.downset(u)


def ideal_projection(language, u):
    return SubsetProjection(downset(language, u))


def p_entails(language, u):
    if not language.contains(u):
        raise NotInLanguage("unknown class %r" % u)
    return language.p_entails(u)


# -- the four projection identities ------------------------------------


def prop_projection_identities(n_atoms):
    """Check the conjunction/disjunction/negation/top identities.

    Projections act on the space indexed by truth assignments: P_u keeps
    the assignments satisfying u.  All operators in the identities are
    diagonal there, so each is represented by its diagonal.  Returns a
    report dict; "ok" is True when every identity holds for every pair of
    classes, and "violation" names the first failure otherwise.
    """
    if not 1 <= n_atoms <= 3:
        raise SizeError("identity check enumerates all classes; need atoms <= 3")
    dim = 1 << n_atoms
    n_classes = 1 << dim
    one = tuple([1] * dim)
    bot = tuple([0] * dim)

    def diag(mask):
        return tuple(1 if (mask >> i) & 1 else 0 for i in range(dim))

    def mul(a, b):
        return tuple(x * y for x, y in zip(a, b))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    checked = 0
    if diag(n_classes - 1) != one:
        raise AssertionError("top class must project onto everything")
    for mu in range(n_classes):
        pu = diag(mu)
        full = (1 << dim) - 1
        p_not = diag(full & ~mu)
        if p_not != add(sub(one, pu), bot):
            return _identity_report(n_atoms, checked, ("not", mu))
        for mv in range(n_classes):
            pv = diag(mv)
            checked += 1
            if diag(mu & mv) != mul(pu, pv):
                return _identity_report(n_atoms, checked, ("and", mu, mv))
            join = diag(mu | mv)
            if join != sub(add(pu, pv), mul(pu, pv)):
                return _identity_report(n_atoms, checked, ("or", mu, mv))
            if join != tuple(max(x, y) for x, y in zip(pu, pv)):
                return _identity_report(n_atoms, checked, ("or-lattice", mu, mv))
            if diag(mu & mv) != tuple(min(x, y) for x, y in zip(pu, pv)):
                return _identity_report(n_atoms, checked, ("and-lattice", mu, mv))
    return _identity_report(n_atoms, checked, None)


def _identity_report(n_atoms, checked, violation):
    report = {
        "atoms": n_atoms,
        "classes": 1 << (1 << n_atoms),
        "pairs_checked": checked,
        "ok": violation is None,
    }
    if violation is not None:
        report["violation"] = {
            "identity": violation[0],
            "classes": [class_label(n_atoms, m) for m in violation[1:]],
        }
    return report


# -- weighted forms -----------------------------------------------------


class WeightedForm:
    """Ambiguous sentence: class/weight pairs, duplicates merged."""

    def __init__(self, pairs):
        merged = {}
        for label, weight in pairs:
            if weight < 0:
                raise FormatError("interpretation weights must be >= 0")
            merged[label] = merged.get(label, 0) + weight
        self.pairs = [(u, w) for u, w in merged.items() if w != 0]

    def scale(self, factor):
        """Renormalize by a caller-supplied constant (e.g. from a language
        model); the constant plays the role of q'(u|s)."""
        return WeightedForm([(u, w * factor) for u, w in self.pairs])

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def weighted_repr(parses):
    return WeightedForm(parses)


def phi_weighted(language, form):
    """phi of a weighted form: sum of weight * p_entails(class)."""
    total = 0
    for label, weight in form:
        total = total + weight * language.p_entails(label)
    return total


def _support_profile(language, form):
    """For each p-support class v: the summed weight of interpretations
    v entails."""
    profile = {}
    for v in language.p:
        acc = 0
        for label, weight in form:
            if language.entails(v, label):
                acc = acc + weight
        profile[v] = acc
    return profile


def exact_entail(language, s1, s2):
    """phi(s1 ^ s2) / phi(s1) with the meet taken exactly.

    Classes are handled through their minterm decompositions (truth-table
    bitstrings), so membership of a support class in a down-set is an
    exact subset test; the meet of the two weighted sums is evaluated
    componentwise on the support of p.
    """
    if isinstance(language, PropositionalLanguage) and language.n_atoms > MAX_ATOMS:
        raise SizeError("too many atoms")
    denom = phi_weighted(language, s1)
    if denom == 0:
        raise Undefined("phi of the antecedent form is zero")
    a = _support_profile(language, s1)
    b = _support_profile(language, s2)
    numer = 0
    for v, weight in language.p.items():
        numer = numer + weight * min(a[v], b[v])
    return numer / denom


def lower_bound_entail(language, s1, s2):
    """max over interpretation pairs of min-weight times meet mass.

    Guaranteed not to exceed exact_entail; coincides with it when both
    forms have a single interpretation.
    """
    denom = phi_weighted(language, s1)
    if denom == 0:
        raise Undefined("phi of the antecedent form is zero")
    best = 0
    for u1, w1 in s1:
        for u2, w2 in s2:
            value = min(w1, w2) * language.meet_mass(u1, u2)
            if value > best:
                best = value
    return best / denom


# -- length heuristic ---------------------------------------------------


def _prime_implicants(n_atoms, mask):
    """Quine-McCluskey merge: implicants as (care-mask, values) pairs."""
    minterms = [i for i in range(1 << n_atoms) if (mask >> i) & 1]
    full_care = (1 << n_atoms) - 1
    current = {(full_care, m) for m in minterms}
    primes = set()
    while current:
        merged = set()
        used = set()
        items = sorted(current)
        for x in items:
            for bit in range(n_atoms):
                b = 1 << bit
                if x[0] & b:
                    partner = (x[0], x[1] ^ b)
                    if partner in current:
                        merged.add((x[0] & ~b, x[1] & ~b))
                        used.add(x)
                        used.add(partner)
        primes |= current - used
        current = merged
    return sorted(primes)


def _implicant_assignments(n_atoms, care, values):
    free = [b for b in range(n_atoms) if not (care >> b) & 1]
    base = values & care
    for choice in range(1 << len(free)):
        m = base
        for i, b in enumerate(free):
            if (choice >> i) & 1:
                m |= 1 << b
        yield m


def _render_term(n_atoms, care, values):
    parts = []
    for b in range(n_atoms):
        if (care >> b) & 1:
            name = chr(ord("a") + b)
            parts.append(name if (values >> b) & 1 else "¬" + name)
    return "∧".join(parts)


def minimal_dnf(n_atoms, label):
    """Canonical minimal DNF string for a class (ties broken lexically)."""
    mask = class_mask(n_atoms, label)
    full = (1 << (1 << n_atoms)) - 1
    if mask == 0:
        return "⊥"
    if mask == full:
        return "⊤"
    primes = _prime_implicants(n_atoms, mask)
    cover_target = {i for i in range(1 << n_atoms) if (mask >> i) & 1}
    best = None
    for r in range(1, len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            covered = set()
            for care, values in combo:
                covered |= set(_implicant_assignments(n_atoms, care, values))
            if covered == cover_target:
                terms = sorted(_render_term(n_atoms, c, v) for c, v in combo)
                rendered = "∨".join(terms)
                key = (len(terms), len(rendered), rendered)
                if best is None or key < best[0]:
                    best = (key, rendered)
        if best is not None:
            break
    return best[1]


def length_heuristic(k, n_atoms, label):
    """k^-|u| with |u| the symbol count of the canonical minimal DNF."""
    if k <= 1:
        raise ParamError("base must exceed 1")
    if n_atoms > 4:
        raise SizeError("minimal DNF search is guarded at 4 atoms")
    length = len(minimal_dnf(n_atoms, label))
    return k ** (-length)


# -- logical translations ----------------------------------------------


class LogicalTranslation:
    """A finite language of token sequences mapped into logical classes."""

    def __init__(self, language, mu, q=None):
        self.language = language
        self.mu = {tuple(x): u for x, u in mu.items()}
        for x, u in self.mu.items():
            if not language.contains(u):
                raise NotInLanguage("translation of %r is unknown class %r" % (x, u))
        self.q = None
        if q is not None:
            self.q = {tuple(x): w for x, w in q.items()}
            missing = set(self.q) - set(self.mu)
            if missing:
                raise FormatError("q assigns weight to untranslated strings %r" % missing)
            total = sum(
                self.language.p_entails(self.mu[x]) * w for x, w in self.q.items()
            )
            if abs(total - 1) > 1e-9:
                raise NormError("q violates its normalization (got %s)" % total)

    def sentences(self):
        return sorted(self.mu, key=lambda s: (len(s), s))

    def vector(self, x):
        """x-tilde: context pair -> class vector, over all of lambda."""
        x = tuple(x)
        out = {}
        for sentence in self.mu:
            n = len(x)
            for i in range(len(sentence) - n + 1):
                if sentence[i:i + n] == x:
                    a, b = sentence[:i], sentence[i + n:]
                    label = self.mu[sentence]
                    entries = {
                        v: float(w)
                        for v, w in self.language.p.items()
                        if self.language.entails(v, label)
                    }
                    out[(a, b)] = SparseVec(entries, "float")
        return out

    def phi(self, x):
        """phi(x-tilde): p_entails of the translation, 0 outside lambda."""
        x = tuple(x)
        if x not in self.mu:
            return 0
        return self.language.p_entails(self.mu[x])

    def entailment(self, x, y):
        x, y = tuple(x), tuple(y)
        px = self.phi(x)
        if px == 0:
            raise Undefined("phi of %r is zero" % (" ".join(x),))
        if y not in self.mu:
            return 0
        return self.language.meet_mass(self.mu[x], self.mu[y]) / px


def general_corpus_model(translation, semantic=False):
    """Corpus over natural tokens + class tokens + a diamond separator.

    Each sentence x contributes documents `x diamond m` weighted p(m)
    (general variant) or q(x) p(m) (semantic variant, a true probability
    distribution) for every support class m entailing mu(x).
    """
    lang = translation.language
    docs = {}
    if semantic and translation.q is None:
        raise FormatError("semantic corpus model needs q")
    for x, label in translation.mu.items():
        for m, pm in lang.p.items():
            if not lang.entails(m, label):
                continue
            weight = pm if not semantic else translation.q[x] * pm
            if weight != 0:
                docs[x + (DIAMOND, m)] = weight
    kind = "probabilistic" if semantic else "general"
    mode = "exact" if all(
        isinstance(w, (int, Fraction)) for w in docs.values()
    ) else "float"
    return CorpusModel(docs, kind, mode)


def word_sense_vectors(model, word, sense_assignment):
    """Split a word's context vector into per-sense vectors.

    ``sense_assignment`` maps each context label of the word to a sense
    id; every context must be covered.  The sense vectors are pairwise
    disjoint and sum exactly to the word's context vector.
    """
    hat = model.context_vector([word]).vec
    grouped = {}
    for label, value in hat.items():
        sense = sense_assignment.get(label)
        if sense is None:
            raise AssignmentError("context %r has no assigned sense" % label)
        grouped.setdefault(sense, {})[label] = value
    return {sense: SparseVec(entries, hat.mode) for sense, entries in grouped.items()}


# -- language files ------------------------------------------------------


def load_language(path):
    """Parse the logical-language file format.

    Sections begin with a bare keyword line: ``classes`` (either one
    ``atoms n`` line or class ids, optionally ``bottom <id>``),
    ``entails`` (edges `u v`), ``p`` (either `uniform` or `id weight`
    lines), ``translate`` (`tokens... -> class`) and optional ``q``
    (`tokens... weight`).  Returns a LogicalTranslation (with an empty
    translation when no translate section is present).
    """
    sections = {"classes": [], "entails": [], "p": [], "translate": [], "q": []}
    current = None
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line in sections:
                current = line
                continue
            if current is None:
                raise FormatError("%s:%d: content before any section" % (path, lineno))
            sections[current].append((lineno, line))

    n_atoms = None
    class_ids = []
    bottom = None
    for lineno, line in sections["classes"]:
        parts = line.split()
        if parts[0] == "atoms":
            n_atoms = int(parts[1])
        elif parts[0] == "bottom":
            bottom = parts[1]
        else:
            class_ids.append(parts[0])

    uniform = any(line.strip() == "uniform" for _, line in sections["p"])
    p = {}
    for lineno, line in sections["p"]:
        if line.strip() == "uniform":
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("%s:%d: expected `class weight`" % (path, lineno))
        p[parts[0]] = parse_weight(parts[1])

    if n_atoms is not None:
        if uniform:
            language = PropositionalLanguage.uniform(n_atoms)
        else:
            language = PropositionalLanguage(n_atoms, p)
    else:
        if bottom is None:
            raise FormatError("%s: abstract language needs a `bottom` line" % path)
        edges = []
        for lineno, line in sections["entails"]:
            parts = line.split()
            if len(parts) != 2:
                raise FormatError("%s:%d: expected `u v` edge" % (path, lineno))
            edges.append((parts[0], parts[1]))
        language = AbstractLanguage(class_ids, edges, bottom, p)

    mu = {}
    for lineno, line in sections["translate"]:
        if "->" not in line:
            raise FormatError("%s:%d: expected `tokens -> class`" % (path, lineno))
        lhs, rhs = line.rsplit("->", 1)
        mu[tuple(lhs.split())] = rhs.strip()
    q = None
    if sections["q"]:
        q = {}
        for lineno, line in sections["q"]:
            parts = line.split()
            q[tuple(parts[:-1])] = parse_weight(parts[-1])
    return LogicalTranslation(language, mu, q)
