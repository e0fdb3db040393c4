import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nonadditive import fincat
from nonadditive.fincat import FinSet, PartialBijection
from nonadditive.rigring import (
    BOOL, GF4, INT, NAT, RAT, COMMUTATIVITY_CLASSES, GraphFRing, MatrixFRing, MonomialFRing,
    MonomialMatrix, PartialBijectionFRing, RigMatrix, commutativity_class, cyclic_mul_monoid,
    free_monoid, is_matrix_fring, is_tame, mat_compose, mat_oplus, mat_transpose, rig_from_name, zmod,
)

RIGS = [NAT, INT, RAT, BOOL, zmod(6), GF4]


@pytest.mark.parametrize("rig", RIGS, ids=lambda r: r.name)
def test_rig_axioms_on_values(rig):
    vals = rig.values
    for a, b, c in itertools.product(vals, repeat=3):
        assert rig.add(rig.add(a, b), c) == rig.add(a, rig.add(b, c))
        assert rig.mul(rig.mul(a, b), c) == rig.mul(a, rig.mul(b, c))
        assert rig.mul(a, rig.add(b, c)) == rig.add(rig.mul(a, b), rig.mul(a, c))
        assert rig.mul(rig.add(a, b), c) == rig.add(rig.mul(a, c), rig.mul(b, c))
    for a, b in itertools.product(vals, repeat=2):
        assert rig.add(a, b) == rig.add(b, a)
        if rig.has_involution:
            inv = rig.involution
            assert inv(rig.mul(a, b)) == rig.mul(inv(b), inv(a))
    for a in vals:
        assert rig.add(a, rig.zero) == a
        assert rig.mul(a, rig.one) == a == rig.mul(rig.one, a)
        assert rig.mul(a, rig.zero) == rig.zero
    if rig.has_involution:
        assert rig.involution(rig.one) == rig.one and rig.involution(rig.zero) == rig.zero


def test_gf4_is_a_field():
    nonzero = [v for v in range(4) if v]
    for a in nonzero:
        assert sum(1 for b in nonzero if GF4.mul(a, b) == 1) == 1
    assert all(GF4.add(a, a) == 0 for a in range(4))


def test_rig_from_name():
    assert rig_from_name("Zmod:5").add(3, 4) == 2
    with pytest.raises(ValueError):
        rig_from_name("nope")


def test_rationals_are_normalized():
    m = RigMatrix.make(FinSet.range(1), FinSet.range(1), {(1, 1): Fraction(2, -4)}, RAT)
    assert m[(1, 1)] == Fraction(-1, 2)


small = st.integers(-3, 3)


@st.composite
def int_matrices(draw, rows, cols):
    return RigMatrix.from_rows([[draw(small) for _ in range(cols)] for _ in range(rows)], INT)


@given(st.data())
def test_matrix_composition_associative(data):
    n = [data.draw(st.integers(1, 3)) for _ in range(4)]
    a = data.draw(int_matrices(n[1], n[0]))
    b = data.draw(int_matrices(n[2], n[1]))
    c = data.draw(int_matrices(n[3], n[2]))
    assert mat_compose(c, mat_compose(b, a)) == mat_compose(mat_compose(c, b), a)


@given(st.data())
def test_oplus_transpose_and_interchange(data):
    n = [data.draw(st.integers(1, 2)) for _ in range(4)]
    a = data.draw(int_matrices(n[1], n[0]))
    b = data.draw(int_matrices(n[3], n[2]))
    assert mat_transpose(mat_oplus(a, b)) == mat_oplus(mat_transpose(a), mat_transpose(b))
    a2 = data.draw(int_matrices(n[0], n[1]))
    b2 = data.draw(int_matrices(n[2], n[3]))
    assert mat_compose(mat_oplus(a, b), mat_oplus(a2, b2)) == mat_oplus(mat_compose(a, a2), mat_compose(b, b2))


def test_zero_never_stored():
    m = RigMatrix.from_rows([[0, 1], [0, 0]], NAT)
    assert len(m.entries) == 1
    assert RigMatrix.from_json(m.to_json()) == m


def test_partial_bijections_embed_functorially():
    fr = MatrixFRing(NAT)
    X, Y, Z = FinSet.range(2), FinSet.range(2), FinSet.range(1)
    for f in fincat.all_partial_bijections(X, Y):
        for g in fincat.all_partial_bijections(Y, Z):
            assert fr.from_pb(fincat.compose(g, f)) == mat_compose(fr.from_pb(g), fr.from_pb(f))
        assert fr.from_pb(fincat.transpose(f)) == mat_transpose(fr.from_pb(f))
        h = PartialBijection.identity(Z)
        assert fr.from_pb(fincat.oplus(f, h)) == mat_oplus(fr.from_pb(f), fr.from_pb(h))


def test_monomial_composition_stays_monomial():
    fr = MonomialFRing(cyclic_mul_monoid(4))
    X = FinSet.range(2)
    els = list(fr.elements(X, X))
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.choice(els), rng.choice(els)
        c = fr.compose(b, a)
        assert isinstance(c, MonomialMatrix)
    with pytest.raises(ValueError):
        MonomialMatrix.make(X, X, {(1, 1): 1, (1, 2): 1}, fr.monoid)


def test_transpose_requires_involution():
    from dataclasses import replace
    from nonadditive.rigring import UnsupportedOperation
    m = RigMatrix.from_rows([[1]], replace(NAT, name="N-plain", involution=None))
    with pytest.raises(UnsupportedOperation):
        mat_transpose(m)


@pytest.mark.parametrize("fr", [MatrixFRing(NAT), MatrixFRing(zmod(3)), MatrixFRing(BOOL),
                                MonomialFRing(cyclic_mul_monoid(3)), PartialBijectionFRing()],
                         ids=lambda f: f.name)
def test_commutative_instances_pass_every_class(fr):
    for name in COMMUTATIVITY_CLASSES:
        r = commutativity_class(fr, name, 1)
        assert r.passed, (name, r.witness)
    assert is_matrix_fring(fr, 1).passed
    assert is_tame(fr, 1).passed


def test_free_monoid_is_not_commutative_and_gives_witness():
    r = commutativity_class(MonomialFRing(free_monoid()), "total", 1)
    assert not r.passed and r.witness is not None


def test_graph_instance_is_not_central():
    r = commutativity_class(GraphFRing(), "central", 1)
    assert not r.passed
    assert r.witness is not None
