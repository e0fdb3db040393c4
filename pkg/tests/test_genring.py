import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from nonadditive import get_instance
from nonadditive.fincat import DegreeError, FinSet, PartialBijection, all_partial_bijections, compose
from nonadditive.genring import (
    AXIOMS, ONE, FiberFamily, InstanceMismatch, SetMap, axiom_suite, diagonal_family, fam_eq,
    involute, matrix_coeffs, mult_scalar, right_linearity, right_linearity_witness,
)

COMMUTATIVE = ["GN", "GZ", "GZ/6", "F1", "FM:Z/3", "Gbool", "GF4"]


@pytest.mark.parametrize("name", COMMUTATIVE)
@pytest.mark.parametrize("axiom", AXIOMS)
def test_axioms_hold_on_commutative_instances(name, axiom):
    r = axiom_suite(get_instance(name), axiom, samples=60, seed=11, max_size=3)
    assert r.passed, r.witness


@pytest.mark.parametrize("name", ["O", "k"])
def test_axioms_hold_on_real_prime_instances(name):
    A = get_instance(name)
    for axiom in AXIOMS:
        r = axiom_suite(A, axiom, samples=25, seed=2, max_size=2)
        assert r.passed, (axiom, r.witness)


def test_free_monoid_right_linearity_witness_replays():
    A = get_instance("FM:free")
    r = right_linearity_witness(A)
    assert not r.passed
    w = r.witness
    fam = lambda e: FiberFamily.make(SetMap.identity(ONE), {1: e})
    lhs, rhs, _ = right_linearity(A, fam(w["d"]), fam(w["a"]), fam(w["c"]), SetMap.identity(ONE))
    assert not fam_eq(A, lhs, rhs)


def test_commutative_instance_has_no_right_linearity_witness():
    assert right_linearity_witness(get_instance("FM:Z/3")).passed


@pytest.mark.parametrize("name", ["GZ/6", "FM:Z/3", "F1", "GF4"])
def test_degree_one_monoid_is_commutative_exhaustively(name):
    A = get_instance(name)
    pool = list(A.elements(ONE))
    for a, b, c in itertools.product(pool, repeat=3):
        assert A.eq(mult_scalar(A, a, b), mult_scalar(A, b, a))
        assert A.eq(mult_scalar(A, mult_scalar(A, a, b), c), mult_scalar(A, a, mult_scalar(A, b, c)))
    for a in pool:
        assert A.eq(mult_scalar(A, A.one(), a), a)
        assert A.eq(involute(A, involute(A, a)), a)


@pytest.mark.parametrize("name", ["GN", "FM:Z/3", "F1"])
def test_partial_bijection_action_is_functorial(name):
    A = get_instance(name)
    X, Y, Z = FinSet.range(2), FinSet.range(2), FinSet.range(1)
    rng = random.Random(5)
    for f in all_partial_bijections(X, Y):
        for g in all_partial_bijections(Y, Z):
            a = A.random_element(X, rng)
            assert A.eq(A.fmap(A.fmap(a, f), g), A.fmap(a, compose(g, f)))
        assert A.eq(A.fmap(A.unit_at(X, 1), f),
                    A.unit_at(Y, f(1)) if f(1) is not None else A.zero(Y))


def test_one_is_cyclic_in_vector_instances():
    A = get_instance("GZ")
    rng = random.Random(0)
    for n in range(4):
        X = FinSet.range(n)
        for _ in range(20):
            a = A.random_element(X, rng)
            assert A.eq(A.mult(A.ones(X), diagonal_family(A, a)), a)


def _naive_mult(av, comps, fmap):
    return {y: av.get(z, 0) * comps[z].get(y, 0) for y, z in fmap.items()}


def _naive_contract(av, comps, fmap, dst):
    out = {z: 0 for z in dst}
    for y, z in fmap.items():
        out[z] += av.get(y, 0) * comps[z].get(y, 0)
    return out


@settings(max_examples=60)
@given(st.data())
def test_vector_operations_match_coordinate_formulas(data):
    A = get_instance("GZ")
    ints = st.integers(-3, 3)
    Y = FinSet.range(data.draw(st.integers(0, 4)))
    Z = FinSet(["p", "q", "r"][: data.draw(st.integers(0, 3))])
    fmap = {y: data.draw(st.sampled_from(Z.labels)) for y in Y if Z.labels and data.draw(st.booleans())}
    f = SetMap(Y, Z, fmap)
    comps = {z: {y: data.draw(ints) for y in f.fiber(z)} for z in Z}
    fam = FiberFamily.make(f, {z: A.vector(f.fiber(z), comps[z]) for z in Z})
    a_top = {z: data.draw(ints) for z in Z}
    got = A.mult(A.vector(Z, a_top), fam)
    want = _naive_mult(a_top, comps, fmap)
    assert A.coords(got) == [want.get(y, 0) for y in Y]
    a_bot = {y: data.draw(ints) for y in Y}
    got = A.contract(A.vector(Y, a_bot), fam)
    want = _naive_contract(a_bot, comps, fmap, Z)
    assert A.coords(got) == [want[z] for z in Z]


def test_matrix_coefficients_recover_coordinates():
    A = get_instance("GZ/6")
    a = A.vector(FinSet.range(3), [1, 5, 0])
    assert [A.coords(c) for c in matrix_coeffs(A, a)] == [[1], [5], [0]]


def test_degree_and_instance_errors():
    A, B = get_instance("GN"), get_instance("GZ")
    a = A.vector(FinSet.range(2), [1, 2])
    with pytest.raises(DegreeError):
        A.mult(a, FiberFamily.make(SetMap.identity(ONE), {1: A.one()}))
    with pytest.raises(InstanceMismatch):
        B.mult(a, FiberFamily.make(SetMap.identity(FinSet.range(2)),
                                   {1: B.unit_at(FinSet([1]), 1), 2: B.unit_at(FinSet([2]), 2)}))
    with pytest.raises(ValueError):
        get_instance("nope")


@pytest.mark.parametrize("name", ["GN", "GZ/6", "FM:Z/3", "F1", "FM:free"])
def test_json_round_trip(name):
    A = get_instance(name)
    rng = random.Random(1)
    for n in range(3):
        a = A.random_element(FinSet.range(n), rng)
        assert A.eq(A.from_json(A.to_json(a)), a)
