import random

import pytest

from nonadditive import arithplane as ap
from nonadditive.fincat import FinSet
from nonadditive.genring import SetMap, get_instance


def test_sigma_pair_are_distinct_combs_with_same_diagonal():
    s, sp = ap.sigma(), ap.sigma_prime()
    assert ap.is_comb(s) and ap.is_comb(sp)
    assert ap.nabla_graph(s) == ap.nabla_graph(sp) == (1, 1)
    assert ap.merge_tag(s) != ap.merge_tag(sp)
    assert s.canonical() != sp.canonical()


def test_graph_json_round_trip():
    for G in (ap.sigma(), ap.sigma_prime(), ap.fork("r", 3), ap.cofork("l", 2)):
        H = ap.graph_from_json(ap.graph_to_json(G))
        assert H.canonical() == G.canonical()
        assert ap.problems(H) == []


def test_invalid_graphs_are_reported():
    with pytest.raises(ValueError):
        ap.lr_graph(2, [(0, 1, "x")], {1: 0}, {1: 1})
    with pytest.raises(ap.InvalidGraph):
        ap.graph_from_json({"vertices": []})


def test_path_counts_compose_like_matrices():
    # fork merges [2] into [1]; following it by the cofork gives the all-ones 2x2 matrix
    assert ap.nabla_graph(ap.compose(ap.cofork("l", 2), ap.fork("l", 2))) == (1, 1, 1, 1)
    # the other order doubles the single path
    assert ap.nabla_graph(ap.compose(ap.fork("l", 2), ap.cofork("l", 2))) == (2,)
    assert ap.nabla_graph(ap.oplus(ap.sigma(), ap.identity_graph(1))) == (1, 1, 0, 0, 0, 1)


def test_diagonal_is_invariant_under_every_move_near_sigma():
    frontier = [ap.sigma()]
    seen = set()
    for _ in range(2):
        nxt = []
        for G in frontier:
            target = ap.nabla_graph(G)
            for m in ap.neighbors(G, ap.MOVE_FAMILIES):
                assert ap.nabla_graph(m.graph) == target, m.name
                key = m.graph.canonical()
                if key not in seen and m.graph.n <= 7:
                    seen.add(key)
                    nxt.append(m.graph)
        frontier = nxt[:25]
    assert seen


def test_lr_canonical_is_confluent_on_random_orders():
    rng = random.Random(0)
    starts = [ap.sigma()]
    for m in ap.neighbors(ap.sigma(), ("lr-infl",)):
        starts.append(m.graph)
    for G in starts:
        ref = ap.lr_canonical(G)
        for _ in range(5):
            assert ap.lr_canonical(G, rng) == ref


def test_core_search_in_small_space_is_a_certificate():
    r = ap.equiv_search(ap.sigma(), ap.sigma_prime(), ap.CORE_MOVES, size_bound=5)
    assert r.status == "exhausted"
    for G in r.visited:
        assert ap.nabla_graph(G) == (1, 1)
        assert ap.is_comb(G)


def test_check_path_rejects_bogus_steps():
    bogus = [ap.Move("lr-red", (), ap.sigma_prime())]
    assert not ap.check_path(ap.sigma(), ap.sigma_prime(), bogus)


# -- oriented trees ----------------------------------------------------------

def test_nabla_is_surjective_but_not_injective():
    X = FinSet.range(2)
    GN = get_instance("GN")
    for counts in [(0, 0), (1, 0), (2, 3), (1, 1)]:
        F = ap.nabla_preimage(X, counts)
        assert GN.coords(ap.nabla(F)) == list(counts)
    a = ap.nabla_preimage(X, (2, 1), eps_top=0, eps_bar=1)
    b = ap.nabla_preimage(X, (2, 1), eps_top=1, eps_bar=0)
    assert ap.nabla(a) == ap.nabla(b)
    assert not ap.upsilon_equal(a, b)


def test_nabla_is_multiplicative_and_contractive():
    GN = get_instance("GN")
    rng = random.Random(7)
    Y, X = FinSet(["u", "v"]), FinSet.range(3)
    for _ in range(40):
        f = SetMap(X, Y, {x: rng.choice(Y.labels) for x in X if rng.random() < 0.8})
        fam = {y: ap.random_oriented(f.fiber(y), rng) for y in Y}
        G = ap.random_oriented(Y, rng)
        prod = ap.upsilon_mult(G, fam, f)
        want = GN.mult(ap.nabla(G), _gn_family(GN, f, fam))
        assert ap.nabla(prod) == want
        H = ap.random_oriented(X, rng)
        con = ap.upsilon_contract(H, fam, f)
        assert ap.nabla(con) == GN.contract(ap.nabla(H), _gn_family(GN, f, fam))


def _gn_family(GN, f, fam):
    from nonadditive.genring import FiberFamily
    return FiberFamily.make(f, {y: ap.nabla(fam[y]) for y in f.dst})


def test_upsilon_canonical_is_confluent_and_idempotent():
    rng = random.Random(3)
    X = FinSet.range(2)
    for _ in range(30):
        F = ap.random_oriented(X, rng)
        ref = ap.upsilon_canonical(F)
        assert ap.upsilon_key(ap.upsilon_canonical(ref)) == ap.upsilon_key(ref)
        assert ap.upsilon_key(ap.upsilon_canonical(F, rng)) == ap.upsilon_key(ref)
        assert ap.nabla(ref) == ap.nabla(F)


@pytest.mark.parametrize("target", ["GN", "GZ", "GZ/4", "Gbool", "F:GN", "F:GZ/3"])
def test_presentation_relations_hold(target):
    r = ap.fring_presentation_check(target)
    assert r["passed"], r["counterexample"]
