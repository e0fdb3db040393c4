import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nonadditive import differentials as df
from nonadditive.differentials import DiffSum, d, d_plus, gen, normal_form, phi_p


def _expected_basis(n):
    return {p: e * n // p for p, e in sympy.factorint(n).items()}


def test_small_generators():
    assert phi_p(gen(1, 1), 2) == 1
    assert phi_p(gen(2, 1), 2) == -1
    assert normal_form(d(12)).basis == {2: 12, 3: 4}
    assert normal_form(d_plus(3)).basis == {3: 2}
    assert d_plus(3) == 2 * gen(1, 1) + 2 * gen(1, 2)


def test_generators_are_symmetric_and_zero_free():
    assert gen(5, 2) == gen(2, 5)
    assert (gen(2, 3) - gen(3, 2)).terms == {}
    assert DiffSum.from_json(gen(4, 7).to_json()) == gen(4, 7)


def test_valuation_matches_factorization():
    for n in range(1, 3000):
        f = sympy.factorint(n)
        for p in (2, 3, 5, 7):
            assert df.valuation(n, p) == f.get(p, 0)


def test_phi_of_d_n_up_to_ten_thousand():
    # d(n) = d(n-1) + {n-1;1}; phi_p is additive, so accumulate phi_p of each generator
    cum = {}
    for n in range(2, 10_001):
        k = n - 1
        g = gen(k, 1)
        for p in set(sympy.primefactors(k)) | set(sympy.primefactors(k + 1)):
            cum[p] = cum.get(p, 0) + phi_p(g, p)
        want = _expected_basis(n)
        assert {p: c for p, c in cum.items() if c} == want, n


def test_telescoping_d_agrees_with_closed_form():
    for n in list(range(2, 200)) + [210, 360, 512, 997, 1000]:
        assert normal_form(d(n)).basis == _expected_basis(n)


@settings(max_examples=200)
@given(st.integers(1, 500), st.integers(1, 500))
def test_routes_agree_on_generators(a, b):
    t = gen(a, b)
    assert df._normal_form_phi(t) == df._normal_form_rewrite(t)


sums = st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 60), st.integers(1, 60)), max_size=5)


def _build(items, mode="N"):
    t = DiffSum.zero(mode)
    for c, a, b in items:
        t = t + c * gen(a, b, mode)
    return t


@settings(max_examples=100)
@given(sums, sums)
def test_normal_form_is_additive(s, t):
    x, y = _build(s), _build(t)
    lhs = normal_form(x + y).basis
    nx, ny = normal_form(x).basis, normal_form(y).basis
    want = {p: nx.get(p, 0) + ny.get(p, 0) for p in set(nx) | set(ny)}
    assert lhs == {p: c for p, c in want.items() if c}


@pytest.mark.parametrize("mode", df.MODES)
@pytest.mark.parametrize("name", sorted(df.RELATIONS))
def test_relations_lie_in_the_kernel(name, mode):
    if name == "cancellation" and mode == "N":
        pytest.skip("cancellation only makes sense with negatives")
    r = df.relation_check(name, samples=60, mode=mode, seed=5)
    assert r["passed"], r["counterexample"]


def test_z_mode_torsion_flags():
    half = gen(3, -3, "Z")
    assert normal_form(half).torsion
    assert normal_form(2 * half).is_zero()
    nf = normal_form(gen(3, -1, "Z"))
    assert nf.basis == {2: 1, 3: -1} and nf.torsion
    assert normal_form(d(-6, "Z") + d(6, "Z")).is_zero()


def test_leibnitz_example():
    for n, m in [(2, 3), (4, 9), (12, 35)]:
        lhs = normal_form(d(n * m)).basis
        rhs = normal_form(n * d(m) + m * d(n)).basis
        assert lhs == rhs


def test_pi_kills_boundaries():
    r = df.pi_boundary_check(samples=100, seed=2)
    assert r["passed"], r["counterexample"]


def test_boundary_of_each_relation_vanishes():
    r = df.boundary_relations_check()
    assert r["passed"], r["counterexample"]
    assert r["checked"] > 5000


def test_nmodule_pi_of_single_generator():
    t = df.NModuleSum.gen((1, 1), (1, 1))
    assert t.Y == 2 and t.X == 2
    assert df.nmodule_pi(t).dense() == [[1, 1], [1, 1]]


def test_relation_check_rejects_unknown_name():
    with pytest.raises((KeyError, ValueError)):
        df.relation_check("nonsense")
