"""Ideals, primes, the Zariski topology, localization and the structure sheaf.

Everything here works on a generalized ring whose degree-[1] part is finite.
An ideal is a subset of A_[1] closed under ``(b ◁ c) ∥ d`` for b, d in A_X
and c a family of members indexed by X.  Two closure engines are provided:

``exhaustive``
    enumerates b, c, d for every X = [1], ..., [D] and iterates to a
    fixpoint.  Exact for the operation with |X| <= D; the bound is reported.
``vector``
    for vector instances G(B): the unary rule on X = [1] together with the
    sum rule ``(δ ◁ (c1, c2)) ∥ δ`` with δ = (1, 1).  Every element of B^X is
    δ_X ◁ (b_x) and contraction to a point splits into binary sums, so the
    fixpoint of these two rules is the closure over all X.

Localization at a finite multiplicative set S uses the idempotent u = e^m of
S (e the product of S): two fractions a1/s1 and a2/s2 agree iff
``u ◁ s2 ◁ a1 = u ◁ s1 ◁ a2``, and ``u ◁ w ◁ a`` (with u ◁ s ◁ w = u) is a
canonical key of a/s.  The definition by search over S is kept as
:meth:`Localized.equivalent` so the two can be compared.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable

from .fincat import FinSet, PartialBijection, label_key
from .genring import (ONE, FiberFamily, GenElement, GenRing, RigGenRing, SetMap, get_instance, involute,
                      mult_scalar)


def _key(a: GenElement):
    return label_key(repr(a.payload))


def _at(A: GenRing, c: GenElement, x) -> GenElement:
    """Move a degree-[1] element to degree {x}."""
    return A.fmap(c, PartialBijection(ONE, FinSet([x]), [(1, x)]))


def combine(A: GenRing, b: GenElement, cs, d: GenElement) -> GenElement:
    """(b ◁ c) ∥ d for b, d in A_X and the family c = (cs[x])_x of degree-[1] elements."""
    X = b.degree
    ident = SetMap.identity(X)
    bc = A.mult(b, FiberFamily.make(ident, {x: _at(A, c, x) for x, c in zip(X, cs)}))
    return A.contract(bc, FiberFamily.make(SetMap.to_point(X), {1: d}))


@dataclass(frozen=True)
class IdealSet:
    elements: frozenset
    symmetric: bool = False
    bound: int | None = None

    def __contains__(self, a) -> bool:
        return a in self.elements

    def __le__(self, other: "IdealSet") -> bool:
        return self.elements <= other.elements

    def __len__(self) -> int:
        return len(self.elements)

    def sorted(self) -> list:
        return sorted(self.elements, key=_key)


class FiniteInstance:
    """A generalized ring with finite A_[1], plus cached operation tables."""

    def __init__(self, A: GenRing, D: int = 3, engine: str = "auto"):
        if D < 1:
            raise ValueError("degree bound must be positive")
        self.A = A
        self.D = D
        if engine == "auto":
            engine = "vector" if isinstance(A, RigGenRing) else "exhaustive"
        if engine not in ("vector", "exhaustive"):
            raise ValueError(f"unknown engine {engine!r}")
        self.engine = engine
        self._unary = {}
        self._binary = {}
        self._prod = {}

    @cached_property
    def A1(self) -> list:
        pool = sorted(set(self.A.elements(ONE)), key=_key)
        members = set(pool)
        # a sample pool of an infinite instance is not closed, and closures would never settle
        for a, b in itertools.product(pool, repeat=2):
            c = self.mul(a, b)
            if c not in members:
                raise ValueError(f"{self.A.name} has no finite degree-one part: {a!r} * {b!r} escapes the pool")
        return pool

    @cached_property
    def zero(self) -> GenElement:
        return self.A.zero(ONE)

    @cached_property
    def one(self) -> GenElement:
        return self.A.one()

    def mul(self, a: GenElement, b: GenElement) -> GenElement:
        k = (a, b)
        if k not in self._prod:
            self._prod[k] = mult_scalar(self.A, a, b)
        return self._prod[k]

    def adjoint(self, a: GenElement) -> GenElement:
        return involute(self.A, a)

    @cached_property
    def self_adjoint(self) -> list:
        return [a for a in self.A1 if self.A.eq(self.adjoint(a), a)]

    # -- closure ---------------------------------------------------------
    def _unary_image(self, c):
        if c not in self._unary:
            self._unary[c] = {combine(self.A, b, [c], d) for b in self.A1 for d in self.A1}
        return self._unary[c]

    def _sum(self, c1, c2):
        k = (c1, c2)
        if k not in self._binary:
            two = FinSet.range(2)
            delta = self.A.ones(two)
            self._binary[k] = combine(self.A, delta, [c1, c2], delta)
        return self._binary[k]

    def closure(self, gens) -> frozenset:
        ideal = {self.zero} | set(gens)
        if self.engine == "vector":
            todo = list(ideal)
            while todo:
                c = todo.pop()
                new = set(self._unary_image(c))
                for e in list(ideal):
                    new.add(self._sum(c, e))
                    new.add(self._sum(e, c))
                for n in new - ideal:
                    ideal.add(n)
                    todo.append(n)
            return frozenset(ideal)
        while True:
            new = set()
            members = sorted(ideal, key=_key)
            for k in range(1, self.D + 1):
                X = FinSet.range(k)
                pool = list(self.A.elements(X))
                for cs in itertools.product(members, repeat=k):
                    for b in pool:
                        ident = SetMap.identity(X)
                        bc = self.A.mult(b, FiberFamily.make(ident, {x: _at(self.A, c, x) for x, c in zip(X, cs)}))
                        for d in pool:
                            new.add(self.A.contract(bc, FiberFamily.make(SetMap.to_point(X), {1: d})))
            if new <= ideal:
                return frozenset(ideal)
            ideal |= new

    def ideal(self, gens, symmetric: bool = False) -> IdealSet:
        gens = list(gens)
        if symmetric:
            gens = [g for g in gens if g in set(self.self_adjoint)]
        return IdealSet(self.closure(gens), symmetric, None if self.engine == "vector" else self.D)

    def principal(self, a) -> IdealSet:
        """a ◁ A_[1] (which is closed already)."""
        return IdealSet(frozenset(self.mul(a, b) for b in self.A1), False,
                        None if self.engine == "vector" else self.D)

    def is_ideal(self, S) -> bool:
        return self.closure(S) == frozenset(S) | {self.zero}

    # -- lattices --------------------------------------------------------
    @cached_property
    def ideals(self) -> list:
        """All ideals, as joins of principal ideals."""
        found = {self.closure([a]) for a in self.A1}
        found.add(frozenset([self.zero]))
        frontier = set(found)
        while frontier:
            nxt = set()
            for I in frontier:
                for J in list(found):
                    K = self.closure(I | J)
                    if K not in found:
                        nxt.add(K)
            found |= nxt
            frontier = nxt
        bound = None if self.engine == "vector" else self.D
        return sorted((IdealSet(I, self.is_symmetric_set(I), bound) for I in found),
                      key=lambda I: (len(I), sorted(map(_key, I.elements))))

    def is_symmetric_set(self, I) -> bool:
        sa = set(self.self_adjoint)
        return self.closure([a for a in I if a in sa]) == frozenset(I)

    @cached_property
    def symmetric_ideals(self) -> list:
        return [I for I in self.ideals if I.symmetric]

    def is_proper(self, I: IdealSet) -> bool:
        return self.one not in I.elements

    def is_prime(self, I: IdealSet) -> bool:
        if not self.is_proper(I):
            return False
        out = [a for a in self.A1 if a not in I.elements]
        return all(self.mul(a, b) not in I.elements for a in out for b in out)

    def is_symmetric_prime(self, I: IdealSet) -> bool:
        if not I.symmetric or not self.is_proper(I):
            return False
        out = [a for a in self.self_adjoint if a not in I.elements]
        return all(self.mul(a, b) not in I.elements for a in out for b in out)

    @cached_property
    def spec(self) -> list:
        return [I for I in self.ideals if self.is_prime(I)]

    @cached_property
    def spec_t(self) -> list:
        return [I for I in self.symmetric_ideals if self.is_symmetric_prime(I)]

    @cached_property
    def maximal(self) -> list:
        proper = [I for I in self.ideals if self.is_proper(I)]
        return [I for I in proper if not any(I.elements < J.elements for J in proper)]

    def to_symmetric(self, p: IdealSet) -> IdealSet:
        """The map spec -> spec^t: the ideal generated by the self-adjoint members."""
        sa = set(self.self_adjoint)
        return IdealSet(self.closure([a for a in p.elements if a in sa]), True, p.bound)

    # -- topology --------------------------------------------------------
    def V(self, I: IdealSet, points=None) -> list:
        points = self.spec if points is None else points
        return [p for p in points if I.elements <= p.elements]

    def I_of(self, C) -> IdealSet:
        if not C:
            return IdealSet(frozenset(self.A1))
        return IdealSet(frozenset.intersection(*(p.elements for p in C)))

    def radical(self, I: IdealSet) -> IdealSet:
        res = set()
        for a in self.A1:
            seen, p = set(), a
            while p not in seen:
                if p in I.elements:
                    res.add(a)
                    break
                seen.add(p)
                p = self.mul(p, a)
        return IdealSet(frozenset(res), I.symmetric, I.bound)

    def product(self, I: IdealSet, J: IdealSet) -> IdealSet:
        return self.ideal({self.mul(a, b) for a in I.elements for b in J.elements})

    def ideal_sum(self, I: IdealSet, J: IdealSet) -> IdealSet:
        return self.ideal(I.elements | J.elements)

    def basic_open(self, a, points=None) -> list:
        """D_a: the primes not containing a."""
        points = self.spec if points is None else points
        return [p for p in points if a not in p.elements]

    def closed_sets(self, points=None) -> list:
        points = self.spec if points is None else points
        sets = {frozenset(range_index(points, self.V(I, points))) for I in self.ideals}
        return sorted(sets, key=lambda s: (len(s), sorted(s)))

    def report(self) -> dict:
        A = self.A

        def show(I):
            return [A.payload_to_json(a) for a in I.sorted()]

        return {
            "instance": A.name,
            "engine": self.engine,
            "bound": None if self.engine == "vector" else self.D,
            "ideals": [show(I) for I in self.ideals],
            "primes": [{"elements": show(p), "symmetric": p.symmetric} for p in self.spec],
            "symmetric_primes": [show(p) for p in self.spec_t],
            "topology": {"closed_sets": [sorted(s) for s in self.closed_sets()]},
        }


def range_index(points, subset) -> list:
    ids = {p.elements: i for i, p in enumerate(points)}
    return [ids[p.elements] for p in subset]


# ---------------------------------------------------------------------------
# localization

class Localized(GenRing):
    """S^{-1}A for a finite multiplicative set S of self-adjoint degree-[1] elements."""

    def __init__(self, F: FiniteInstance, S, name: str | None = None):
        self.F = F
        self.base = F.A
        S = sorted(set(S), key=_key)
        if F.one not in S:
            raise ValueError("a multiplicative set must contain 1")
        Sset = set(S)
        for s in S:
            if not F.A.eq(F.adjoint(s), s):
                raise ValueError("localization uses self-adjoint elements only")
            for t in S:
                if F.mul(s, t) not in Sset:
                    raise ValueError("S is not closed under multiplication")
        self.S = S
        self.name = name or f"{F.A.name}[S^-1]"
        e = F.one
        for s in S:
            e = F.mul(e, s)
        seen = []
        u = e
        while u not in seen:
            seen.append(u)
            u = F.mul(u, e)
        # the idempotent power of e
        self.u = next(p for p in seen if F.mul(p, p) == p)
        self.degenerate = self.u == F.zero
        self._w = {}

    def equivalent(self, a1, s1, a2, s2) -> bool:
        """a1/s1 = a2/s2 by the defining search: t ◁ s2 ◁ a1 = t ◁ s1 ◁ a2 for some t in S."""
        A = self.base
        return any(A.eq(mult_scalar(A, t, mult_scalar(A, s2, a1)), mult_scalar(A, t, mult_scalar(A, s1, a2)))
                   for t in self.S)

    def _inverse_factor(self, s):
        if s not in self._w:
            F = self.F
            self._w[s] = next(w for w in self.S if F.mul(F.mul(self.u, s), w) == self.u)
        return self._w[s]

    def key(self, a: GenElement, s: GenElement) -> GenElement:
        """The canonical representative u ◁ w ◁ a of a/s (with u ◁ s ◁ w = u)."""
        if s not in set(self.S):
            raise ValueError("denominator outside S")
        A = self.base
        return mult_scalar(A, self.u, mult_scalar(A, self._inverse_factor(s), a))

    def frac(self, a: GenElement, s: GenElement | None = None) -> GenElement:
        s = self.F.one if s is None else s
        k = self.key(a, s)
        return self.element(a.degree, k)

    def phi(self, a: GenElement) -> GenElement:
        """The canonical map a -> a/1."""
        return self.frac(a)

    def zero(self, X):
        return self.element(X, self.base.zero(X))

    def unit_at(self, X, x):
        return self.frac(self.base.unit_at(X, x))

    def _mult(self, a, fam):
        base_fam = FiberFamily.make(fam.fmap, {z: c.payload for z, c in fam.comps})
        r = self.base.mult(a.payload, base_fam)
        return self.element(r.degree, mult_scalar(self.base, self.u, r))

    def _contract(self, a, fam):
        base_fam = FiberFamily.make(fam.fmap, {z: c.payload for z, c in fam.comps})
        r = self.base.contract(a.payload, base_fam)
        return self.element(r.degree, mult_scalar(self.base, self.u, r))

    def fmap(self, a, f):
        r = self.base.fmap(a.payload, f)
        return self.element(r.degree, r)

    def elements(self, X):
        seen = []
        for a in self.base.elements(X):
            k = self.frac(a)
            if k not in seen:
                seen.append(k)
                yield k

    def random_element(self, X, rng):
        return self.frac(self.base.random_element(X, rng), rng.choice(self.S))

    def payload_to_json(self, a):
        return self.base.payload_to_json(a.payload)


def powers(F: FiniteInstance, s) -> list:
    out, p = [F.one], F.one
    while True:
        p = F.mul(p, s)
        if p in out:
            return out
        out.append(p)


def localize(F: FiniteInstance, S) -> Localized:
    return Localized(F, S)


def localize_at_element(F: FiniteInstance, s) -> Localized:
    return Localized(F, powers(F, s), name=f"{F.A.name}[1/{F.A.payload_to_json(s)}]")


def localize_at_prime(F: FiniteInstance, p: IdealSet) -> Localized:
    S = [a for a in F.self_adjoint if a not in p.elements]
    return Localized(F, S, name=f"{F.A.name}_p")


# ---------------------------------------------------------------------------
# the structure sheaf over D_s^+

@dataclass
class SheafCheck:
    passed: bool
    points: int
    sections: int
    fractions: int
    detail: str = ""
    witness: dict | None = field(default=None)

    def to_json(self) -> dict:
        return {"passed": self.passed, "points": self.points, "sections": self.sections,
                "fractions": self.fractions, "detail": self.detail, "witness": self.witness}


def structure_sheaf_check(F: FiniteInstance, s, X: FinSet | None = None) -> SheafCheck:
    """Compare the fractions A_s with the sections of the structure sheaf over D_s^+ in degree X."""
    X = ONE if X is None else X
    if s not in set(F.self_adjoint):
        raise ValueError("s must be self-adjoint")
    points = F.spec_t
    U = [i for i, p in enumerate(points) if s not in p.elements]
    stalks = {i: localize_at_prime(F, points[i]) for i in U}
    # minimal open neighbourhood of each point: intersection of the basic opens containing it
    sa = F.self_adjoint

    def D(g):
        return {i for i, p in enumerate(points) if g not in p.elements}

    M = {}
    for i in U:
        nb = set(range(len(points)))
        for g in sa:
            if i in D(g):
                nb &= D(g)
        M[i] = sorted(nb & set(U))
    pool = list(F.A.elements(X))
    frac_sets = {}
    for i in U:
        good = [t for t in sa if all(t not in points[j].elements for j in M[i])]
        frac_sets[i] = {tuple(stalks[j].key(a, t) for j in M[i]) for a in pool for t in good}
    # enumerate sections by backtracking on the points of U
    sections = []

    def extend(k, assign):
        if k == len(U):
            sections.append(tuple(assign[i] for i in U))
            return
        i = U[k]
        options = {germs[M[i].index(i)] for germs in frac_sets[i]
                   if all(assign.get(j, g) == g for j, g in zip(M[i], germs))}
        for g in sorted(options, key=_key):
            new = dict(assign)
            new[i] = g
            if all(any(all(new.get(j, h) == h for j, h in zip(M[m], germs)) for germs in frac_sets[m])
                   for m in U):
                extend(k + 1, new)

    extend(0, {})
    As = localize_at_element(F, s)
    fr = list(As.elements(X))
    image = {}
    for e in fr:
        # e.payload is u ◁ a, which represents the fraction e.payload / 1 in every stalk
        image[e] = tuple(stalks[i].key(e.payload, F.one) for i in U)
    injective = len(set(image.values())) == len(fr)
    surjective = set(image.values()) == set(sections)
    detail = "" if injective and surjective else ("not injective" if not injective else "not surjective")
    witness = None
    if not surjective:
        missing = sorted(set(sections) - set(image.values()), key=repr)
        witness = {"section": [repr(g) for g in missing[0]]} if missing else None
    return SheafCheck(injective and surjective, len(U), len(sections), len(fr), detail, witness)


def finite_instance(name: str, D: int = 3, engine: str = "auto") -> FiniteInstance:
    return FiniteInstance(get_instance(name), D, engine)


# ---------------------------------------------------------------------------
# ring-theoretic oracle for G(B), B a finite commutative ring

@dataclass
class RingOracle:
    """Ideals, primes and radicals of a finite commutative ring by brute force.

    Only the ring's own addition and multiplication are used; nothing from
    the generalized-ring side.  Every ideal is a finite sum of principal
    ideals, so closing the principal ideals under pairwise sums lists them
    all.
    """

    elements: tuple
    add: Callable
    mul: Callable
    zero: Any
    one: Any

    @classmethod
    def from_rig(cls, rig) -> "RingOracle":
        return cls(tuple(rig.values), rig.add, rig.mul, rig.zero, rig.one)

    def span(self, gens) -> frozenset:
        cur = {self.zero}
        frontier = [self.mul(r, g) for g in gens for r in self.elements]
        while frontier:
            new = set()
            for x in frontier:
                if x not in cur:
                    cur.add(x)
            for x in list(cur):
                for y in list(cur):
                    z = self.add(x, y)
                    if z not in cur:
                        new.add(z)
            frontier = list(new)
        return frozenset(cur)

    def is_ideal(self, S) -> bool:
        S = set(S)
        return (self.zero in S and all(self.add(a, b) in S for a in S for b in S)
                and all(self.mul(r, a) in S for r in self.elements for a in S))

    def ideals(self) -> list:
        found = {self.span([a]) for a in self.elements}
        frontier = set(found)
        while frontier:
            new = {self.span(I | J) for I in frontier for J in found} - found
            found |= new
            frontier = new
        assert all(self.is_ideal(I) for I in found)
        return sorted(found, key=lambda s: (len(s), sorted(map(label_key, s))))

    def is_prime(self, I) -> bool:
        if self.one in I:
            return False
        return all(a in I or b in I for a in self.elements for b in self.elements if self.mul(a, b) in I)

    def primes(self) -> list:
        return [I for I in self.ideals() if self.is_prime(I)]

    def radical(self, I) -> frozenset:
        out = set()
        for a in self.elements:
            p, seen = a, set()
            while p not in seen:
                if p in I:
                    out.add(a)
                    break
                seen.add(p)
                p = self.mul(p, a)
        return frozenset(out)


def oracle_comparison(F: FiniteInstance) -> dict:
    """Match ideals, primes, radicals and V/I of G(B) against :class:`RingOracle`."""
    A = F.A
    if not isinstance(A, RigGenRing):
        raise ValueError("the ring oracle needs an instance G(B)")
    R = RingOracle.from_rig(A.rig)
    val = lambda a: A.coords(a)[0]
    as_set = lambda I: frozenset(val(a) for a in I.elements)
    ideals = {as_set(I) for I in F.ideals}
    ring_ideals = set(R.ideals())
    primes = {as_set(p) for p in F.spec}
    ring_primes = set(R.primes())
    radicals_ok = all(as_set(F.radical(I)) == R.radical(as_set(I)) for I in F.ideals)
    v_ok = True
    for I in F.ideals:
        ours = {as_set(p) for p in F.V(I)}
        theirs = {P for P in ring_primes if as_set(I) <= P}
        i_of = as_set(F.I_of(F.V(I)))
        if ours != theirs or i_of != R.radical(as_set(I)):
            v_ok = False
    result = {
        "instance": A.name,
        "ideals": len(ideals), "ring_ideals": len(ring_ideals),
        "primes": len(primes), "ring_primes": len(ring_primes),
        "ideals_match": ideals == ring_ideals and len(F.ideals) == len(ring_ideals),
        "primes_match": primes == ring_primes and len(F.spec) == len(ring_primes),
        "radicals_match": radicals_ok,
        "V_I_match": v_ok,
    }
    result["passed"] = all(result[k] for k in ("ideals_match", "primes_match", "radicals_match", "V_I_match"))
    return result
