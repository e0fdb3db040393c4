import pytest

from nonadditive import spectra
from nonadditive.genring import get_instance

FINITE = ["GZ/12", "GZ/30", "GF4", "FM:Z/4", "F1"]


@pytest.fixture(scope="module", params=FINITE)
def F(request):
    return spectra.finite_instance(request.param, 2)


def test_infinite_instance_is_rejected():
    with pytest.raises(ValueError):
        spectra.finite_instance("GN").A1


def test_ideals_are_closed_and_contain_zero(F):
    for I in F.ideals:
        assert F.zero in I.elements
        assert F.is_ideal(I.elements)


def test_galois_correspondence(F):
    for I in F.ideals:
        C = F.V(I)
        assert F.V(F.I_of(C)) == C
        assert F.I_of(F.V(F.I_of(C))).elements == F.I_of(C).elements
        assert F.I_of(C).elements == F.radical(I).elements


def test_basic_opens_intersect_multiplicatively(F):
    for a in F.A1:
        for b in F.A1:
            Da = {p.elements for p in F.basic_open(a)}
            Db = {p.elements for p in F.basic_open(b)}
            assert Da & Db == {p.elements for p in F.basic_open(F.mul(a, b))}


def test_projection_to_symmetric_spectrum_is_continuous(F):
    for p in F.spec:
        assert F.to_symmetric(p).elements in {q.elements for q in F.spec_t}
    for a in F.self_adjoint:
        opens_t = {q.elements for q in F.basic_open(a, F.spec_t)}
        pre = [p for p in F.spec if F.to_symmetric(p).elements in opens_t]
        assert {p.elements for p in pre} == {p.elements for p in F.basic_open(a)}


def test_residue_ring_spectrum():
    F = spectra.finite_instance("GZ/12", 2)
    assert len(F.ideals) == 6  # divisors of 12
    assert len(F.spec) == 2    # (2) and (3)
    assert len(F.maximal) == 2


@pytest.mark.parametrize("name", ["GZ/12", "GZ/30", "GF4", "GZ/8"])
def test_oracle_agrees(name):
    r = spectra.oracle_comparison(spectra.finite_instance(name, 2))
    assert r["passed"], r


def test_ring_oracle_by_itself():
    from nonadditive.rigring import zmod
    O = spectra.RingOracle.from_rig(zmod(12))
    assert len(O.ideals()) == 6
    assert sorted(len(p) for p in O.primes()) == [4, 6]


@pytest.mark.parametrize("name", ["GZ/12", "GZ/6"])
def test_structure_sheaf_on_every_self_adjoint_element(name):
    F = spectra.finite_instance(name, 2)
    for s in F.self_adjoint:
        r = spectra.structure_sheaf_check(F, s)
        assert r.passed, r.to_json()


def test_localization_inverts_the_element():
    F = spectra.finite_instance("GZ/12", 2)
    A = get_instance("GZ/12")
    s = A.vector(A.one().degree, [2])
    L = spectra.localize_at_element(F, s)
    assert s in spectra.powers(F, s)
    assert L.name.endswith("[1/[2]]")
