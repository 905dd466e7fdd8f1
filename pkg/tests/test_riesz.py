"""Vector-lattice kernel: lattice identities, norms, projections."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from context_algebra.errors import ModeError, WeightError
from context_algebra.riesz import (
    EXACT,
    SparseVec,
    SubsetProjection,
    lattice_ops,
    lp_norm,
    phi_norm,
)


def vec(entries, mode="float"):
    return SparseVec(entries, mode)


def exact(entries):
    return SparseVec({k: Fraction(v) for k, v in entries.items()}, EXACT)


def random_vec(rng, mode=EXACT):
    labels = "abcdefgh"
    entries = {}
    for label in labels:
        if rng.random() < 0.6:
            entries[label] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    if mode == EXACT:
        return SparseVec(entries, EXACT)
    return SparseVec({k: float(v) for k, v in entries.items()}, "float")


def test_meet_join_with_zero_vector():
    u = vec({"a": 1, "b": -2})
    z = vec({})
    assert u.meet(z) == vec({"b": -2})
    assert u.join(z) == vec({"a": 1})


def test_meet_join_idempotent():
    u = vec({"a": 1})
    assert u.meet(u) == u
    assert u.join(u) == u


def test_meet_join_componentwise():
    u = exact({"a": 3, "b": -1})
    v = exact({"a": 1, "b": 2})
    ops = lattice_ops(u, v)
    assert ops["meet"] == exact({"a": 1, "b": -1})
    assert ops["join"] == exact({"a": 3, "b": 2})
    # x ^ y = (x + y - |x - y|) / 2, evaluated componentwise
    half = Fraction(1, 2)
    assert ops["meet"] == (u + v - (u - v).abs()).scale(half)
    assert ops["join"] == (u + v + (u - v).abs()).scale(half)


def test_zero_entries_pruned():
    u = vec({"a": 0.0, "b": 1.0})
    assert u.support() == frozenset({"b"})
    assert len(u) == 1


def test_mode_mismatch_raises():
    with pytest.raises(ModeError):
        vec({"a": 1.0}).meet(exact({"a": 1}))
    with pytest.raises(ModeError):
        exact({"a": 1}) + vec({"a": 1.0})


def test_float_in_exact_mode_rejected():
    with pytest.raises(ModeError):
        SparseVec({"a": 0.5}, EXACT)


def test_lp_norms():
    assert lp_norm(vec({}), 1) == 0
    assert lp_norm(vec({}), 2) == 0
    assert lp_norm(vec({}), "inf") == 0
    u = vec({"a": 3, "b": -4})
    assert lp_norm(u, 1) == 7
    assert lp_norm(u, 2) == 5
    assert lp_norm(u, "inf") == 4


def test_l1_not_rotation_invariant():
    # the analogue of rotating a unit vector by 45 degrees
    s = math.sqrt(2) / 2
    rotated = vec({"a": s, "b": s})
    assert abs(lp_norm(rotated, 1) - math.sqrt(2)) < 1e-12
    assert abs(lp_norm(rotated, 2) - 1.0) < 1e-12


def test_phi_norm_basics():
    u = exact({"a": 1, "b": 1})
    w = exact({"a": Fraction(1, 2), "b": Fraction(1, 2)})
    assert phi_norm(u, w) == 1
    assert phi_norm(exact({}), w) == 0


def test_phi_norm_additive_on_disjoint_positives():
    w = exact({"a": 1, "b": 1})
    u = exact({"a": 1})
    v = exact({"b": 2})
    assert phi_norm(u + v, w) == phi_norm(u, w) + phi_norm(v, w) == 3


def test_phi_norm_rejects_negative_weights():
    with pytest.raises(WeightError):
        phi_norm(exact({"a": 1}), exact({"a": -1}))


def test_pos_neg_abs_decomposition_random():
    rng = random.Random(7)
    for _ in range(200):
        u = random_vec(rng)
        assert u.pos() - u.neg() == u
        assert u.pos() + u.neg() == u.abs()
        assert u.pos().meet(u.neg()) == SparseVec({}, EXACT)


def test_meet_join_formulas_random_exact():
    rng = random.Random(11)
    half = Fraction(1, 2)
    for _ in range(200):
        u, v = random_vec(rng), random_vec(rng)
        assert u.meet(v) == (u + v - (u - v).abs()).scale(half)
        assert u.join(v) == (u + v + (u - v).abs()).scale(half)
        # x v y = x + y - x ^ y
        assert u.join(v) == u + v - u.meet(v)


def test_al_property_disjoint_positive_norms_add():
    rng = random.Random(13)
    for _ in range(200):
        u = random_vec(rng).pos()
        v = random_vec(rng).pos()
        # force disjoint supports
        v = SparseVec(
            {k: val for k, val in v.items() if k not in u.support()}, EXACT
        )
        assert u.meet(v) == SparseVec({}, EXACT)
        assert (u + v).norm1() == u.norm1() + v.norm1()


def test_projection_apply_and_products():
    p = SubsetProjection({"a"})
    u = vec({"a": 2, "b": 3})
    assert p(u) == vec({"a": 2})
    q = SubsetProjection({"b", "c"})
    pab = SubsetProjection({"a", "b"})
    assert pab.product(q).support == frozenset({"b"})
    assert pab.meet(q) == pab.product(q)
    assert p.product(p) == p  # idempotence
    # PQ = QP
    assert pab.product(q) == q.product(pab)


def test_projection_operator_order_matches_support_inclusion():
    p = SubsetProjection({"a"})
    q = SubsetProjection({"a", "b"})
    assert p <= q
    assert not q <= p
    rng = random.Random(17)
    for _ in range(50):
        u = random_vec(rng).pos()
        assert p(u) <= q(u)
