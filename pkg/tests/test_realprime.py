import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nonadditive.realprime import (
    VALUATION_AXIOMS, ResidueFRing, gram, in_m_eta, in_O_eta, is_psd, norm_le, qmatrix,
    random_unit_ball, residue_matrix_witness, residue_ops, row_vector, squared_norm,
    valuation_axiom_check,
)
from nonadditive.rigring import mat_compose, mat_oplus, mat_transpose

fracs = st.fractions(min_value=-2, max_value=2, max_denominator=4)


@st.composite
def symmetric(draw, n=None):
    n = n or draw(st.integers(1, 3))
    a = [[draw(fracs) for _ in range(n)] for _ in range(n)]
    return [[a[i][j] + a[j][i] for j in range(n)] for i in range(n)]


@given(symmetric())
def test_psd_agrees_with_exact_oracle(m):
    assert is_psd(m) == sympy.Matrix(m).is_positive_semidefinite


@given(st.lists(st.lists(fracs, min_size=2, max_size=2), min_size=1, max_size=3))
def test_gram_matrices_are_psd(rows):
    assert is_psd(gram(qmatrix(rows)))


def test_semidefinite_boundary_cases():
    assert is_psd([[0, 0], [0, 1]])
    assert not is_psd([[0, 1], [1, 1]])
    assert is_psd([[1, 1], [1, 1]])


def test_norm_le_known_values():
    rot = qmatrix([[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]])
    assert norm_le(rot, 1) and not norm_le(rot, Fraction(99, 100))
    assert in_O_eta(rot) and not in_m_eta(rot)
    v = row_vector([Fraction(1, 2), Fraction(1, 2)])
    assert in_m_eta(v)
    assert norm_le(qmatrix([[2, 0], [0, 1]]), 2) and not norm_le(qmatrix([[2, 0], [0, 1]]), Fraction(199, 100))


def test_unit_ball_closure_and_ideal():
    rng = random.Random(1)
    for _ in range(150):
        n = [rng.randint(1, 3) for _ in range(3)]
        a = random_unit_ball(rng, n[1], n[0])
        b = random_unit_ball(rng, n[2], n[1])
        assert in_O_eta(a) and in_O_eta(b)
        assert in_O_eta(mat_compose(b, a))
        assert in_O_eta(mat_oplus(a, b))
        assert in_O_eta(mat_transpose(a))
        if in_m_eta(a):
            assert in_m_eta(mat_compose(b, a))
        if in_m_eta(b):
            assert in_m_eta(mat_compose(b, a))


@given(st.lists(fracs, min_size=1, max_size=4), st.lists(fracs, min_size=1, max_size=4))
def test_cauchy_schwarz_for_contraction(xs, ys):
    k = min(len(xs), len(ys))
    xs, ys = xs[:k], ys[:k]
    pairing = sum((x * y for x, y in zip(xs, ys)), Fraction(0))
    assert pairing ** 2 <= squared_norm(xs) * squared_norm(ys)


def test_residue_witness_is_nonzero_with_zero_coefficients():
    v, coeffs = residue_matrix_witness()
    assert squared_norm(v.values()) == 1
    assert coeffs == {1: {}, 2: {}}


def test_residue_ops():
    assert residue_ops([Fraction(3, 5), Fraction(4, 5)], [Fraction(3, 5), Fraction(4, 5)], "contract") == (1,)
    assert residue_ops([Fraction(1, 2)], [1, 0], "mult") == ()
    assert residue_ops([-1], [Fraction(3, 5), Fraction(4, 5)], "mult") == (Fraction(-3, 5), Fraction(-4, 5))
    with pytest.raises(ValueError):
        residue_ops([1], [1], "add")


def test_residue_fring_cuts_to_isometric_part():
    k = ResidueFRing()
    half = qmatrix([[Fraction(1, 2), 0], [0, 1]])
    r = k.reduce(half)
    assert r.dense() == [[0, 0], [0, 1]]
    with pytest.raises(ValueError):
        k.reduce(qmatrix([[2]]))


@pytest.mark.parametrize("axiom", VALUATION_AXIOMS)
def test_valuation_axioms(axiom):
    r = valuation_axiom_check(axiom, samples=100, seed=3)
    assert r.passed, r.witness
