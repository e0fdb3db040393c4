import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonadditive import betazeta as bz

ETA = bz.ETA


def test_zeta_factors():
    assert bz.zeta(2, 1) == Fraction(2)
    assert bz.zeta(3, 2) == Fraction(9, 8)
    assert bz.zeta(ETA, 2) == pytest.approx(2.0)
    assert bz.zeta(ETA, 1) == pytest.approx(math.sqrt(2 * math.pi))


def test_parse_place():
    assert bz.parse_place("5") == 5
    assert bz.parse_place("eta") == ETA
    with pytest.raises(ValueError):
        bz.parse_place("4")


def test_known_values():
    assert bz.B(2, [2, 1]) == Fraction(7, 9)
    assert bz.B(ETA, [3, 1]) == pytest.approx(0.5)
    assert bz.B(ETA, [1, 1, 1]) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_profile_integral_equals_zeta_ratio(p, n):
    for alphas in itertools.product(range(1, 5), repeat=n):
        assert bz.padic_beta_integral(p, n, list(alphas)) == bz.B(p, list(alphas))


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 3), (5, 2), (7, 4)])
def test_sphere_has_mass_one(p, n):
    assert bz.sphere_mass(p, n) == 1


@pytest.mark.parametrize("p,k", [(2, 6), (3, 4), (5, 3)])
def test_lattice_sum_converges_from_below_within_bound(p, k):
    for alphas in [(1, 1), (2, 1), (3, 2)]:
        value, bound = bz.padic_beta_lattice(p, 2, list(alphas), k)
        gap = bz.B(p, list(alphas)) - value
        assert 0 <= gap <= bound


@pytest.mark.parametrize("p,n,k", [(2, 2, 4), (3, 2, 3), (2, 3, 3)])
def test_fibre_counts_match_enumeration(p, n, k):
    u = [1] + [0] * (n - 1)
    hist = bz._primitive_count_brute(p, n, k, u)
    for j in range(k + 1):
        assert sum(hist[j:]) == bz._primitive_count_at_least(p, n, k, j)


@pytest.mark.parametrize("y", [[1, 1], [2, 1], [3, 6]])
def test_sslash_lattice_agrees(y):
    c = bz.sslash_integral_check(2, 2, y, 2, level=14)
    assert c.passed(), c.to_json()
    small = bz.sslash_integral_check(2, 2, y, 2, level=5, brute=True)
    assert small.passed(), small.to_json()


def test_gamma_half_integers_against_library():
    for k in range(1, 30):
        assert bz.gamma_half_integer(k) == pytest.approx(math.gamma(k / 2), rel=1e-12)


@pytest.mark.parametrize("alphas", [(3, 1), (2, 2), (1, 1), (Fraction(3, 2), 2), (4, 3)])
def test_real_circle_quadrature(alphas):
    est = bz.real_beta_integral(2, [float(a) for a in alphas], method="quadrature")
    assert abs(est.value - bz.B(ETA, [float(a) for a in alphas])) < 1e-8


def test_real_monte_carlo_within_four_sigma():
    alphas = [2, 1, 1]
    est = bz.real_beta_integral(3, alphas, method="mc", samples=200_000, seed=0)
    assert abs(est.value - bz.B(ETA, alphas)) < 4 * est.error


def test_sphere_samples_are_unit_and_reproducible():
    a = bz.sample_sphere(4, 1000, seed=3)
    b = bz.sample_sphere(4, 1000, seed=3, threads=1)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("s", [2, 3])
def test_limit_is_monotone_and_routes_agree(p, s):
    rows = bz.limit_series(p, s)
    gaps = [abs(r["delta"]) for r in rows]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    for r in rows:
        assert r["lhs"] == r["via_sslash"]
        assert r["rhs"] == bz.zeta(p, s) / bz.zeta(p, 1)
    assert gaps[-1] < Fraction(1, p ** (rows[-1]["N"] - 2))


def test_real_limit_approaches_target():
    rows = bz.limit_series(ETA, 2, (5, 10, 20))
    gaps = [abs(r["delta"]) for r in rows]
    assert gaps[0] > gaps[-1]


@pytest.mark.parametrize("place", [2, 3, ETA])
def test_multiplication_formula(place):
    r = bz.multiplication_formula_check(place, [1, 2], {(1, 0, 2): 1, (0, 1, 1): 3})
    assert abs(r["delta"]) < 1e-9


@pytest.mark.parametrize("place", [2, 5])
def test_contraction_reductions(place):
    r = bz.contraction_reductions(place, [1, 2], [2, 3], [[1], [1, 2]])
    assert all(v == 0 for v in r.values()), r


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_beta_is_symmetric_and_exact(p, alphas):
    v = bz.B(p, alphas)
    assert isinstance(v, Fraction)
    assert v == bz.B(p, list(reversed(alphas)))
    assert 0 < v <= 1
