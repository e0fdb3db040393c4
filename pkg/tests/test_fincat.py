import itertools

import pytest
from hypothesis import given, strategies as st

from nonadditive.fincat import (
    DegreeError, FinSet, PartialBijection, all_partial_bijections, compose, oplus,
    product, sum_to_product, swap, transpose,
)


@st.composite
def arrows(draw, dom=None, cod=None):
    dom = FinSet.range(draw(st.integers(0, 3))) if dom is None else dom
    cod = FinSet.range(draw(st.integers(0, 3))) if cod is None else cod
    ys = draw(st.permutations(list(cod)))
    keep = draw(st.lists(st.booleans(), min_size=len(dom), max_size=len(dom)))
    pairs = [(x, y) for x, y, k in zip(dom, ys, keep) if k]
    return PartialBijection(dom, cod, pairs)


def test_finset_rejects_duplicates():
    with pytest.raises(ValueError):
        FinSet([1, 1])


def test_canonical_order_and_empty_set():
    assert FinSet([3, 1, 2]) == FinSet.range(3)
    assert len(FinSet.range(0)) == 0
    assert list(FinSet([(1, "b"), (0, "a")])) == [(0, "a"), (1, "b")]


def test_partial_bijection_rejects_non_injective():
    X = FinSet.range(2)
    with pytest.raises(ValueError):
        PartialBijection(X, X, [(1, 1), (2, 1)])
    with pytest.raises(ValueError):
        PartialBijection(X, X, [(1, 3)])


def test_matrix_has_at_most_one_one_per_row_and_column():
    X = FinSet.range(3)
    for f in all_partial_bijections(X, X):
        m = f.matrix()
        assert all(sum(r) <= 1 for r in m)
        assert all(sum(c) <= 1 for c in zip(*m))


def test_counts_of_arrows():
    # sum over k of C(2,k) * 3!/(3-k)!
    assert sum(1 for _ in all_partial_bijections(FinSet.range(2), FinSet.range(3))) == 1 + 6 + 6


def test_compose_degree_mismatch():
    f = PartialBijection.identity(FinSet.range(2))
    g = PartialBijection.identity(FinSet.range(3))
    with pytest.raises(DegreeError):
        compose(g, f)


@given(st.data())
def test_compose_associative_and_unital(data):
    X, Y, Z, W = (FinSet.range(data.draw(st.integers(0, 3))) for _ in range(4))
    f = data.draw(arrows(X, Y))
    g = data.draw(arrows(Y, Z))
    h = data.draw(arrows(Z, W))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(PartialBijection.identity(Y), f) == f
    assert compose(f, PartialBijection.identity(X)) == f


@given(arrows(), arrows())
def test_transpose_is_contravariant_involution(f, g):
    assert transpose(transpose(f)) == f
    if f.cod == g.dom:
        assert transpose(compose(g, f)) == compose(transpose(f), transpose(g))


def test_transpose_commutes_with_oplus_exhaustively():
    sets = [FinSet.range(n) for n in range(3)]
    for X0, Y0, X1, Y1 in itertools.product(sets, repeat=4):
        for f0 in all_partial_bijections(X0, Y0):
            for f1 in all_partial_bijections(X1, Y1):
                assert transpose(oplus(f0, f1)) == oplus(transpose(f0), transpose(f1))


def test_sum_to_product_round_trip():
    X, Y = FinSet(["a", "b"]), FinSet.range(3)
    iso = sum_to_product(X, Y)
    assert len(iso.pairs) == len(X) * len(Y)
    assert compose(transpose(iso), iso) == PartialBijection.identity(iso.dom)
    assert compose(iso, transpose(iso)) == PartialBijection.identity(product(X, Y))
    # X (x) Y -> Y (x) X -> X (x) Y is the identity
    assert compose(swap(Y, X), swap(X, Y)) == PartialBijection.identity(product(X, Y))


@given(arrows())
def test_json_round_trip(f):
    assert PartialBijection.from_json(f.to_json()) == f
