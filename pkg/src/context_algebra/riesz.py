"""Sparse vector-lattice kernel.

Vectors are finitely supported maps from canonical text labels to numbers.
Meet and join are componentwise min/max with respect to that fixed basis,
which makes every vector space here a vector lattice; the l1 norm then
turns it into an AL-space (norms add on disjoint positive vectors).

Two numeric modes exist side by side: ``float`` (64-bit) for everyday work
and ``exact`` (`fractions.Fraction`) for oracle paths where the small
worked examples are exact rationals.  Values never mix modes inside one
expression.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ModeError, WeightError

EXACT = "exact"
FLOAT = "float"


def _coerce(value, mode):
    if mode == EXACT:
        if isinstance(value, float):
            # floats are not silently reinterpreted as rationals
            raise ModeError("float value %r in exact mode" % value)
        return Fraction(value)
    return float(value)


class SparseVec:
    """Finitely supported vector over string-labelled basis dimensions.

    Zero entries are pruned on construction so the support is always the
    set of keys.  Instances are immutable; all operations return new
    vectors.
    """

    __slots__ = ("_entries", "mode")

    def __init__(self, entries=None, mode=FLOAT):
        if mode not in (EXACT, FLOAT):
            raise ModeError("unknown mode %r" % mode)
        clean = {}
        if entries:
            for label, value in entries.items():
                if not isinstance(label, str) or not label:
                    raise ValueError("basis labels are non-empty strings, got %r" % (label,))
                value = _coerce(value, mode)
                if value != 0:
                    clean[label] = value
        self._entries = clean
        self.mode = mode

    # -- basic container behaviour ------------------------------------

    @property
    def entries(self):
        return dict(self._entries)

    def support(self):
        return frozenset(self._entries)

    def __getitem__(self, label):
        if label in self._entries:
            return self._entries[label]
        return Fraction(0) if self.mode == EXACT else 0.0

    def __iter__(self):
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __eq__(self, other):
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self.mode == other.mode and self._entries == other._entries

    def __hash__(self):
        return hash((self.mode, frozenset(self._entries.items())))

    def __repr__(self):
        body = ", ".join("%s: %s" % (k, v) for k, v in sorted(self._entries.items()))
        return "SparseVec({%s}, mode=%s)" % (body, self.mode)

    def _check_mode(self, other):
        if self.mode != other.mode:
            raise ModeError("mixed modes %s and %s" % (self.mode, other.mode))

    def _zero(self):
        return Fraction(0) if self.mode == EXACT else 0.0

    # -- vector space operations --------------------------------------

    def __add__(self, other):
        self._check_mode(other)
        out = dict(self._entries)
        for label, value in other._entries.items():
            out[label] = out.get(label, self._zero()) + value
        return SparseVec(out, self.mode)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SparseVec({k: -v for k, v in self._entries.items()}, self.mode)

    def scale(self, alpha):
        alpha = _coerce(alpha, self.mode)
        return SparseVec({k: alpha * v for k, v in self._entries.items()}, self.mode)

    def __mul__(self, alpha):
        return self.scale(alpha)

    __rmul__ = __mul__

    # -- lattice operations -------------------------------------------

    def meet(self, other):
        self._check_mode(other)
        out = {}
        for label in set(self._entries) | set(other._entries):
            value = min(self[label], other[label])
            if value != 0:
                out[label] = value
        return SparseVec(out, self.mode)

    def join(self, other):
        self._check_mode(other)
        out = {}
        for label in set(self._entries) | set(other._entries):
            value = max(self[label], other[label])
            if value != 0:
                out[label] = value
        return SparseVec(out, self.mode)

    def pos(self):
        """Positive part u v 0."""
        return SparseVec({k: v for k, v in self._entries.items() if v > 0}, self.mode)

    def neg(self):
        """Negative part (-u) v 0; always positive."""
        return SparseVec({k: -v for k, v in self._entries.items() if v < 0}, self.mode)

    def abs(self):
        return SparseVec({k: abs(v) for k, v in self._entries.items()}, self.mode)

    def __le__(self, other):
        """Componentwise order: u <= v iff every component of u is <= v's."""
        self._check_mode(other)
        return all(self[k] <= other[k] for k in set(self._entries) | set(other._entries))

    def __ge__(self, other):
        return other.__le__(self)

    # -- norms ----------------------------------------------------------

    def norm1(self):
        return sum((abs(v) for v in self._entries.values()), self._zero())

    def norm2(self):
        return math.sqrt(float(sum(v * v for v in self._entries.values())))

    def norm_inf(self):
        if not self._entries:
            return self._zero()
        return max(abs(v) for v in self._entries.values())

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return SparseVec({k: float(v) for k, v in self._entries.items()}, FLOAT)


def zero(mode=FLOAT):
    return SparseVec({}, mode)


def unit(label, mode=FLOAT):
    return SparseVec({label: 1}, mode)


def lattice_ops(u, v):
    """All lattice derivatives of a pair in one record."""
    return {
        "meet": u.meet(v),
        "join": u.join(v),
        "pos": u.pos(),
        "neg": u.neg(),
        "abs": u.abs(),
    }


def lp_norm(u, p):
    """lp norm for p in {1, 2, 'inf'} (math.inf accepted)."""
    if p == 1:
        return u.norm1()
    if p == 2:
        return u.norm2()
    if p in ("inf", math.inf):
        return u.norm_inf()
    raise ValueError("unsupported p %r" % (p,))


def phi_norm(u, weights):
    """AL-space norm phi(u+) + phi(u-) for a positive weight functional.

    ``weights`` is a SparseVec of per-dimension weights; dimensions it does
    not mention weigh zero.
    """
    if any(w < 0 for _, w in weights.items()):
        raise WeightError("phi weights must be non-negative")
    u._check_mode(weights)

    def _phi(v):
        return sum((weights[k] * x for k, x in v.items()), v._zero())

    return _phi(u.pos()) + _phi(u.neg())


class SubsetProjection:
    """Projection onto the subspace spanned by a subset of basis labels.

    Subset projections commute, and composition is intersection of
    supports, so the operator meet P ^ Q coincides with the product PQ.
    """

    __slots__ = ("support",)

    def __init__(self, support):
        self.support = frozenset(support)

    def __call__(self, u):
        return SparseVec(
            {k: v for k, v in u.items() if k in self.support}, u.mode
        )

    def product(self, other):
        return SubsetProjection(self.support & other.support)

    # commuting projections: P ^ Q = PQ
    meet = product

    def __eq__(self, other):
        if not isinstance(other, SubsetProjection):
            return NotImplemented
        return self.support == other.support

    def __hash__(self):
        return hash(self.support)

    def __le__(self, other):
        """Operator order on positive vectors: P <= Q iff support inclusion."""
        return self.support <= other.support

    def __repr__(self):
        return "SubsetProjection(%s)" % sorted(self.support)
