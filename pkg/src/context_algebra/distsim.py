"""Distributional similarity measures and the additive precision model.

The classic suite: three geometric measures, three divergence-based
measures on normalized vectors, and three feature-overlap measures.  All
logarithms are natural.  Mutual-information features need a background
distribution P(c); it is estimated from the two vectors' pooled counts,
since nothing better is available from a single pair (this choice is the
one knob here that is convention, not forced).

The additive precision of one vector against another is a projection
computation: project the normalized association vector of u onto the
supports of u and v and take the remaining l1 mass.
"""

from __future__ import annotations

import math

from .errors import NormalizeError, SupportError
from .riesz import SparseVec, SubsetProjection


class FeatureVector:
    """A word's context-count vector plus its normalized copy."""

    __slots__ = ("vec", "probabilities")

    def __init__(self, vec):
        vec = vec.to_float()
        self.vec = vec
        total = sum(v for _, v in vec.items())
        if total > 0:
            self.probabilities = vec.scale(1.0 / total)
        else:
            self.probabilities = None

    def _probs(self):
        if self.probabilities is None:
            raise NormalizeError("zero vector cannot be normalized")
        return self.probabilities


def _as_feature(u):
    return u if isinstance(u, FeatureVector) else FeatureVector(u)


def _kl(p, q):
    """D(p||q); +inf when q misses mass where p has some."""
    total = 0.0
    for label, pv in p.items():
        qv = q[label]
        if qv == 0.0:
            return math.inf
        total += pv * math.log(pv / qv)
    return total


def _pooled_background(u, v):
    pooled = u.vec + v.vec
    total = sum(val for _, val in pooled.items())
    return pooled.scale(1.0 / total)


def _mi(feature, background):
    """I(c, w) = ln(P(c|w)/P(c)) over the word's support."""
    probs = feature._probs()
    return SparseVec(
        {c: math.log(probs[c] / background[c]) for c in probs},
        probs.mode,
    )


def _positive_support(vec):
    return frozenset(c for c, v in vec.items() if v > 0)


def similarity_suite(u, v, alpha=0.99):
    """All nine measures for one pair, as a plain dict."""
    u, v = _as_feature(u), _as_feature(v)
    if not u.vec or not v.vec:
        raise NormalizeError("similarity of a zero vector is undefined")
    uv, vv = u.vec, v.vec

    dot = sum(uv[c] * vv[c] for c in uv)
    cosine = dot / (uv.norm2() * vv.norm2())
    diff = uv - vv
    euclidean = diff.norm2()
    cityblock = diff.norm1()

    p, q = u._probs(), v._probs()
    kl = _kl(p, q)
    mid = (p + q).scale(0.5)
    jensen_shannon = 0.5 * (_kl(p, mid) + _kl(q, mid))
    skew_ref = q.scale(alpha) + p.scale(1.0 - alpha)
    alpha_skew = _kl(p, skew_ref)

    fu, fv = _positive_support(p), _positive_support(q)
    jaccard = len(fu & fv) / len(fu | fv)

    background = _pooled_background(u, v)
    iu, iv = _mi(u, background), _mi(v, background)
    su, sv = _positive_support(iu), _positive_support(iv)
    if su or sv:
        jaccard_mi = len(su & sv) / len(su | sv)
        lin_den = sum(iu[c] for c in su) + sum(iv[c] for c in sv)
        lin_num = sum(iu[c] + iv[c] for c in su & sv)
        lin = lin_num / lin_den if lin_den > 0 else 0.0
    else:
        # no informative features on either side: vacuously identical
        jaccard_mi = 1.0
        lin = 1.0

    return {
        "cosine": cosine,
        "euclidean": euclidean,
        "cityblock": cityblock,
        "kl": kl,
        "jensen_shannon": jensen_shannon,
        "alpha_skew": alpha_skew,
        "jaccard": jaccard,
        "jaccard_mi": jaccard_mi,
        "lin": lin,
    }


def _association(u, v, assoc):
    """The association vector D(u, .) for the chosen function."""
    if assoc == "freq":
        return u.vec
    if assoc == "mi":
        return _mi(u, _pooled_background(u, v))
    raise ValueError("unknown association function %r" % assoc)


def weeds_precision(u, v, assoc="freq"):
    """Additive-model precision ||P_u P_v Omega_D(u)||_1."""
    u, v = _as_feature(u), _as_feature(v)
    du = _association(u, v, assoc)
    dv = _association(v, u, assoc)
    su = _positive_support(du)
    total = sum(du[c] for c in su)
    if total <= 0:
        raise SupportError("empty association support")
    omega = SparseVec({c: du[c] / total for c in su}, du.mode)
    pu = SubsetProjection(su)
    pv = SubsetProjection(_positive_support(dv))
    return pu.product(pv)(omega).norm1()


def weeds_recall(u, v, assoc="freq"):
    return weeds_precision(v, u, assoc)
