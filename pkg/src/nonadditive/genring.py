"""Generalized rings: multiplication and contraction along maps of finite sets.

An instance ``A`` gives a set ``A_X`` for every finite set ``X`` together with

* ``mult(a, fam)``: for ``a`` in ``A_Z`` and a family ``fam`` over a partial
  map ``f: Y -> Z`` (one element of ``A_{f^-1(z)}`` for each ``z``), an
  element of ``A_Y``;
* ``contract(a, fam)``: for ``a`` in ``A_Y`` and ``fam`` over ``f: Y -> Z``,
  an element of ``A_Z``.

Concrete instances: vectors over a rig, the initial instance of pointed
sets, monomial vectors over a monoid with zero, the unit ball and residue
field of the real prime, and row vectors of an involutive F-ring.  The
module also carries the fibre-extended operations and the axiom checker.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Iterator

from . import fincat, realprime
from .fincat import DegreeError, FinSet, PartialBijection, label_key
from .rigring import (INT, NAT, RAT, ZERO, CheckResult, FRing, Monoid, Rig,
                      cyclic_mul_monoid, free_monoid, rig_from_name, zmod)

ONE = FinSet([1])


class InstanceMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# set maps and families

@dataclass(frozen=True)
class SetMap:
    """A partial map of finite sets ``src -> dst``."""

    src: FinSet
    dst: FinSet
    pairs: frozenset

    def __init__(self, src: FinSet, dst: FinSet, mapping):
        mapping = dict(mapping)
        for y, z in mapping.items():
            if y not in src or z not in dst:
                raise ValueError(f"{y!r} -> {z!r} outside the map's sets")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "pairs", frozenset(mapping.items()))

    @property
    def mapping(self) -> dict:
        m = self.__dict__.get("_map")
        if m is None:
            m = dict(self.pairs)
            object.__setattr__(self, "_map", m)
        return m

    def __call__(self, y):
        return self.mapping.get(y)

    def fiber(self, z) -> FinSet:
        return FinSet(y for y, w in self.pairs if w == z)

    @property
    def domain(self) -> FinSet:
        return FinSet(self.mapping)

    @classmethod
    def identity(cls, X: FinSet) -> "SetMap":
        return cls(X, X, {x: x for x in X})

    @classmethod
    def to_point(cls, X: FinSet) -> "SetMap":
        return cls(X, ONE, {x: 1 for x in X})

    def __repr__(self) -> str:
        body = ", ".join(f"{y!r}->{z!r}" for y, z in sorted(self.pairs, key=label_key))
        return f"SetMap({list(self.src.labels)} -> {list(self.dst.labels)}: {body})"

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(),
                "map": [[fincat._label_to_json(y), fincat._label_to_json(z)]
                        for y, z in sorted(self.pairs, key=label_key)]}

    @classmethod
    def from_json(cls, data) -> "SetMap":
        try:
            return cls(FinSet.from_json(data["src"]), FinSet.from_json(data["dst"]),
                       {fincat._label_from_json(y): fincat._label_from_json(z) for y, z in data["map"]})
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed set map: {exc}") from exc


def compose_maps(g: SetMap, f: SetMap) -> SetMap:
    if f.dst != g.src:
        raise DegreeError("cannot compose set maps")
    gm = g.mapping
    return SetMap(f.src, g.dst, {y: gm[z] for y, z in f.pairs if z in gm})


def restrict_map(f: SetMap, src: FinSet, dst: FinSet) -> SetMap:
    return SetMap(src, dst, {y: z for y, z in f.pairs if y in src and z in dst})


def pb_as_map(f: PartialBijection) -> SetMap:
    return SetMap(f.dom, f.cod, f.mapping)


@dataclass(frozen=True)
class GenElement:
    instance: str
    degree: FinSet
    payload: Any

    def __repr__(self) -> str:
        return f"<{self.instance} {list(self.degree.labels)}: {self.payload!r}>"


@dataclass(frozen=True)
class FiberFamily:
    fmap: SetMap
    comps: tuple  # sorted tuple of (z, GenElement)

    @classmethod
    def make(cls, fmap: SetMap, comps: dict) -> "FiberFamily":
        for z in fmap.dst:
            if z not in comps:
                raise DegreeError(f"family has no component at {z!r}")
            if comps[z].degree != fmap.fiber(z):
                raise DegreeError(f"component at {z!r} has degree {comps[z].degree}, fibre is {fmap.fiber(z)}")
        return cls(fmap, tuple(sorted(((z, comps[z]) for z in fmap.dst), key=lambda t: label_key(t[0]))))

    @property
    def comp(self) -> dict:
        return dict(self.comps)


# ---------------------------------------------------------------------------
# the instance interface

class GenRing:
    """Base class: subclasses implement ``_mult``, ``_contract`` and element constructors."""

    name = "A"
    commutative = True

    # -- constructors ----------------------------------------------------
    def element(self, degree: FinSet, payload) -> GenElement:
        return GenElement(self.name, degree, payload)

    def zero(self, X: FinSet) -> GenElement:
        raise NotImplementedError

    def unit_at(self, X: FinSet, x) -> GenElement:
        """1_x: the image of the point ``x`` under the initial map."""
        raise NotImplementedError

    def one(self) -> GenElement:
        return self.unit_at(ONE, 1)

    def random_element(self, X: FinSet, rng: random.Random) -> GenElement:
        raise NotImplementedError

    def elements(self, X: FinSet) -> Iterator[GenElement]:
        """A finite pool of elements (all of them for finite instances)."""
        raise NotImplementedError

    # -- operations ------------------------------------------------------
    def _check(self, a: GenElement):
        if a.instance != self.name:
            raise InstanceMismatch(f"{a.instance} element given to {self.name}")

    def mult(self, a: GenElement, fam: FiberFamily) -> GenElement:
        self._check(a)
        if a.degree != fam.fmap.dst:
            raise DegreeError(f"mult: {a.degree} is not the target of {fam.fmap}")
        for _, c in fam.comps:
            self._check(c)
        return self._mult(a, fam)

    def contract(self, a: GenElement, fam: FiberFamily) -> GenElement:
        self._check(a)
        if a.degree != fam.fmap.src:
            raise DegreeError(f"contract: {a.degree} is not the source of {fam.fmap}")
        for _, c in fam.comps:
            self._check(c)
        return self._contract(a, fam)

    def fmap(self, a: GenElement, f: PartialBijection) -> GenElement:
        """Functorial action of a partial bijection, as a times units along f^t."""
        if a.degree != f.dom:
            raise DegreeError("fmap degree mismatch")
        ft = pb_as_map(fincat.transpose(f))
        comps = {x: (self.unit_at(ft.fiber(x), f(x)) if f(x) is not None else self.zero(FinSet()))
                 for x in f.dom}
        return self.mult(a, FiberFamily.make(ft, comps))

    def eq(self, a: GenElement, b: GenElement) -> bool:
        return a == b

    def payload_to_json(self, a: GenElement):
        return a.payload

    def payload_from_json(self, degree: FinSet, data):
        return data

    def to_json(self, a: GenElement) -> dict:
        return {"instance": self.name, "degree": a.degree.to_json(), "payload": self.payload_to_json(a)}

    def from_json(self, data) -> GenElement:
        if data.get("instance") != self.name:
            raise ValueError(f"expected instance {self.name}, got {data.get('instance')!r}")
        X = FinSet.from_json(data["degree"])
        return self.element(X, self.payload_from_json(X, data["payload"]))


# -- helpers used by every instance ------------------------------------------

def units_family(A: GenRing, f: SetMap, pick: dict | None = None) -> FiberFamily:
    """Family over f whose component at z is 1_{pick[z]} (or 0 if pick[z] is None)."""
    comps = {}
    for z in f.dst:
        fib = f.fiber(z)
        x = (pick or {}).get(z)
        comps[z] = A.unit_at(fib, x) if x is not None else A.zero(fib)
    return FiberFamily.make(f, comps)


def unit_family(A: GenRing, f: SetMap) -> FiberFamily:
    """1_f for an injective partial map (singleton or empty fibres)."""
    pick = {}
    for z in f.dst:
        fib = f.fiber(z)
        if len(fib) > 1:
            raise ValueError("1_f needs fibres of size at most one")
        pick[z] = fib.labels[0] if len(fib) else None
    return units_family(A, f, pick)


def identity_family(A: GenRing, X: FinSet) -> FiberFamily:
    return unit_family(A, SetMap.identity(X))


def diagonal_family(A: GenRing, a: GenElement) -> FiberFamily:
    """<a> in A_{id_X}: the component at x is the coordinate a ∥ 1_x moved to {x}."""
    X = a.degree
    comps = {}
    for x in X:
        c = matrix_coeff(A, a, x)
        comps[x] = A.fmap(c, PartialBijection(ONE, FinSet([x]), [(1, x)]))
    return FiberFamily.make(SetMap.identity(X), comps)


def matrix_coeff(A: GenRing, a: GenElement, x) -> GenElement:
    X = a.degree
    return A.contract(a, FiberFamily.make(SetMap.to_point(X), {1: A.unit_at(X, x)}))


def matrix_coeffs(A: GenRing, a: GenElement) -> list[GenElement]:
    """(a ∥ 1_x) for x in the degree of a."""
    return [matrix_coeff(A, a, x) for x in a.degree]


def involute(A: GenRing, a: GenElement) -> GenElement:
    """a^t = 1 ∥ a for a of degree [1]."""
    if a.degree != ONE:
        raise DegreeError("involution is defined on degree [1]")
    return A.contract(A.one(), FiberFamily.make(SetMap.identity(ONE), {1: a}))


def scalar_family(a: GenElement) -> FiberFamily:
    """View a in A_X as a family over X -> [1]."""
    return FiberFamily.make(SetMap.to_point(a.degree), {1: a})


def mult_scalar(A: GenRing, a: GenElement, b: GenElement) -> GenElement:
    """a ◁ b for a in A_[1]."""
    return A.mult(a, scalar_family(b))


def initial_hom(A: GenRing, X: FinSet, x) -> GenElement:
    """Image of x (or None for zero) in A_X under the unique map from the initial instance."""
    return A.zero(X) if x is None else A.unit_at(X, x)


# ---------------------------------------------------------------------------
# instances

class RigGenRing(GenRing):
    """Vectors over a rig: (a ◁ b)_y = a_{f(y)} b_y and (a ∥ b)_z = sum over the fibre of a_y b_y."""

    def __init__(self, rig: Rig, name: str | None = None, values: Iterable | None = None):
        self.rig = rig
        self.name = name or f"G{rig.name}"
        self.values = tuple(values) if values is not None else rig.values

    def vector(self, X: FinSet, coords: dict | Iterable) -> GenElement:
        if not isinstance(coords, dict):
            coords = dict(zip(X, coords))
        clean = {}
        for x, v in coords.items():
            if x not in X:
                raise DegreeError(f"{x!r} not in {X}")
            v = self.rig.coerce(v)
            if v != self.rig.zero:
                clean[x] = v
        return self.element(X, frozenset(clean.items()))

    def coords(self, a: GenElement) -> list:
        d = dict(a.payload)
        return [d.get(x, self.rig.zero) for x in a.degree]

    def zero(self, X):
        return self.element(X, frozenset())

    def unit_at(self, X, x):
        return self.vector(X, {x: self.rig.one})

    def _mult(self, a, fam):
        av = dict(a.payload)
        comp = {z: dict(c.payload) for z, c in fam.comps}
        out = {}
        rig = self.rig
        for y, z in fam.fmap.pairs:
            out[y] = rig.mul(av.get(z, rig.zero), comp[z].get(y, rig.zero))
        return self.vector(fam.fmap.src, out)

    def _contract(self, a, fam):
        av = dict(a.payload)
        comp = {z: dict(c.payload) for z, c in fam.comps}
        rig = self.rig
        inv = rig.involution or (lambda v: v)
        out = {}
        for y, z in fam.fmap.pairs:
            out[z] = rig.add(out.get(z, rig.zero), rig.mul(av.get(y, rig.zero), inv(comp[z].get(y, rig.zero))))
        return self.vector(fam.fmap.dst, out)

    def fmap(self, a, f):
        av = dict(a.payload)
        return self.vector(f.cod, {y: av.get(x, self.rig.zero) for x, y in f.pairs})

    def random_element(self, X, rng):
        return self.vector(X, {x: rng.choice(self.values) for x in X})

    def elements(self, X):
        for vals in product(self.values, repeat=len(X)):
            yield self.vector(X, vals)

    def ones(self, X: FinSet) -> GenElement:
        return self.vector(X, {x: self.rig.one for x in X})

    def payload_to_json(self, a):
        from .rigring import _value_to_json
        return [_value_to_json(v) for v in self.coords(a)]

    def payload_from_json(self, degree, data):
        from .rigring import _value_from_json
        if not isinstance(data, list) or len(data) != len(degree):
            raise ValueError("payload must list one value per degree label")
        return self.vector(degree, [_value_from_json(v) for v in data]).payload


class UnitBallGenRing(RigGenRing):
    """Rational vectors of Euclidean norm at most one, with the operations of G(Q)."""

    def __init__(self):
        super().__init__(RAT, name="O")

    def contains(self, a: GenElement) -> bool:
        return realprime.squared_norm(self.coords(a)) <= 1

    def in_maximal_ideal(self, a: GenElement) -> bool:
        return realprime.squared_norm(self.coords(a)) < 1

    def random_element(self, X, rng):
        if not len(X):
            return self.zero(X)
        m = realprime.random_unit_ball(rng, 1, len(X))
        return self.vector(X, dict(zip(X, m.dense()[0])))


class ResidueGenRing(RigGenRing):
    """Unit vectors over Q with zero; results of norm below one collapse to zero."""

    def __init__(self):
        super().__init__(RAT, name="k")

    def _gate(self, a):
        return a if realprime.squared_norm(self.coords(a)) == 1 else self.zero(a.degree)

    def _mult(self, a, fam):
        return self._gate(super()._mult(a, fam))

    def _contract(self, a, fam):
        return self._gate(super()._contract(a, fam))

    def fmap(self, a, f):
        return self._gate(super().fmap(a, f))

    def unit_vector(self, X, coords) -> GenElement:
        v = self.vector(X, coords)
        if realprime.squared_norm(dict(v.payload).values()) not in (0, 1):
            raise ValueError("residue elements are unit vectors or zero")
        return v

    def payload_from_json(self, degree, data):
        p = super().payload_from_json(degree, data)
        return self.unit_vector(degree, dict(p)).payload

    def random_element(self, X, rng):
        if not len(X) or rng.random() < 0.2:
            return self.zero(X)
        xs = list(X)
        a, b, h = rng.choice([(3, 4, 5), (5, 12, 13), (1, 0, 1)])
        if len(xs) == 1:
            return self.unit_vector(X, {xs[0]: rng.choice([1, -1])})
        i, j = rng.sample(range(len(xs)), 2)
        return self.unit_vector(X, {xs[i]: Fraction(a, h), xs[j]: Fraction(b, h) * rng.choice([1, -1])})


class PointedGenRing(GenRing):
    """The initial instance: A_X is X with an added zero (payload ``None``)."""

    name = "F1"

    def zero(self, X):
        return self.element(X, None)

    def unit_at(self, X, x):
        if x not in X:
            raise DegreeError(f"{x!r} not in {X}")
        return self.element(X, x)

    def _mult(self, a, fam):
        if a.payload is None:
            return self.zero(fam.fmap.src)
        return self.element(fam.fmap.src, fam.comp[a.payload].payload)

    def _contract(self, a, fam):
        Z = fam.fmap.dst
        y0 = a.payload
        if y0 is None or fam.fmap(y0) is None:
            return self.zero(Z)
        z = fam.fmap(y0)
        return self.element(Z, z) if fam.comp[z].payload == y0 else self.zero(Z)

    def fmap(self, a, f):
        return self.element(f.cod, None if a.payload is None else f(a.payload))

    def random_element(self, X, rng):
        opts = [None] + list(X)
        return self.element(X, rng.choice(opts))

    def elements(self, X):
        for x in [None] + list(X):
            yield self.element(X, x)

    def payload_to_json(self, a):
        return fincat._label_to_json(a.payload) if a.payload is not None else None

    def payload_from_json(self, degree, data):
        x = None if data is None else fincat._label_from_json(data)
        if x is not None and x not in degree:
            raise ValueError("label outside degree")
        return x


class MonoidGenRing(GenRing):
    """Monomial vectors over a monoid with zero: payload (x, m) or ``None``."""

    def __init__(self, monoid: Monoid, name: str | None = None):
        self.monoid = monoid
        self.name = name or f"F{{{monoid.name}}}"
        self.commutative = monoid.is_commutative

    def make(self, X, x, m):
        if x is None or m is ZERO:
            return self.element(X, None)
        if x not in X:
            raise DegreeError(f"{x!r} not in {X}")
        return self.element(X, (x, m))

    def zero(self, X):
        return self.element(X, None)

    def unit_at(self, X, x):
        return self.make(X, x, self.monoid.one)

    def _mult(self, a, fam):
        Y = fam.fmap.src
        if a.payload is None:
            return self.zero(Y)
        z0, m0 = a.payload
        c = fam.comp[z0].payload
        if c is None:
            return self.zero(Y)
        x, m = c
        return self.make(Y, x, self.monoid.mul(m0, m))

    def _contract(self, a, fam):
        Z = fam.fmap.dst
        if a.payload is None:
            return self.zero(Z)
        y0, m0 = a.payload
        z = fam.fmap(y0)
        if z is None:
            return self.zero(Z)
        c = fam.comp[z].payload
        if c is None or c[0] != y0:
            return self.zero(Z)
        return self.make(Z, z, self.monoid.mul(m0, self.monoid.inv(c[1])))

    def fmap(self, a, f):
        if a.payload is None:
            return self.zero(f.cod)
        x, m = a.payload
        return self.make(f.cod, f(x), m)

    def random_element(self, X, rng):
        if not len(X) or rng.random() < 0.15:
            return self.zero(X)
        return self.make(X, rng.choice(list(X)), rng.choice(self.monoid.values))

    def elements(self, X):
        yield self.zero(X)
        for x in X:
            for m in self.monoid.values:
                yield self.make(X, x, m)

    def payload_to_json(self, a):
        if a.payload is None:
            return None
        return [fincat._label_to_json(a.payload[0]), a.payload[1]]

    def payload_from_json(self, degree, data):
        if data is None:
            return None
        return self.make(degree, fincat._label_from_json(data[0]), data[1]).payload


class FRingGenRing(GenRing):
    """Row vectors A[1, X] of an involutive F-ring.

    a ◁ b = a o (+)_z b_z   and   a ∥ b = a o ((+)_z b_z)^t.
    """

    def __init__(self, fr: FRing, name: str | None = None):
        if not fr.has_involution:
            raise ValueError("the F-ring needs an involution")
        self.fr = fr
        self.name = name or f"G[{fr.name}]"

    def zero(self, X):
        return self.element(X, self.fr.from_pb(PartialBijection.empty(X, ONE)))

    def unit_at(self, X, x):
        return self.element(X, self.fr.from_pb(PartialBijection(X, ONE, [(x, 1)])))

    def _block(self, fam: FiberFamily):
        """(+)_z b_z as an arrow Y -> Z (columns outside the domain are zero)."""
        fr, f = self.fr, fam.fmap
        s = fr.block_sum({z: c.payload for z, c in fam.comps})
        s = fr.relabel(s, lambda p: p[0], lambda p: p[1])
        D = f.domain
        incl_t = fr.from_pb(PartialBijection(f.src, D, [(y, y) for y in D]))
        return fr.compose(s, incl_t)

    def _mult(self, a, fam):
        return self.element(fam.fmap.src, self.fr.compose(a.payload, self._block(fam)))

    def _contract(self, a, fam):
        return self.element(fam.fmap.dst, self.fr.compose(a.payload, self.fr.transpose(self._block(fam))))

    def elements(self, X):
        for e in self.fr.elements(ONE, X):
            yield self.element(X, e)

    def random_element(self, X, rng):
        if hasattr(self.fr, "random_element"):
            return self.element(X, self.fr.random_element(ONE, X, rng))
        return rng.choice(list(self.elements(X)))


# ---------------------------------------------------------------------------
# registry

def get_instance(name: str) -> GenRing:
    """Instance by short name: GN, GZ, GQ, GZ/n, Gbool, GF4, F1, FM:Z/n, FM:free, O, k, Delta:n."""
    if name in ("GN", "GZ", "GQ"):
        return RigGenRing({"GN": NAT, "GZ": INT, "GQ": RAT}[name], name=name)
    if name.startswith("GZ/"):
        n = int(name[3:])
        return RigGenRing(zmod(n), name=name)
    if name == "Gbool":
        return RigGenRing(rig_from_name("bool"), name=name)
    if name == "GF4":
        return RigGenRing(rig_from_name("F4"), name=name)
    if name == "F1":
        return PointedGenRing()
    if name.startswith("FM:Z/"):
        return MonoidGenRing(cyclic_mul_monoid(int(name[5:])), name=name)
    if name == "FM:free":
        return MonoidGenRing(free_monoid("xy", 2), name=name)
    if name == "O":
        return UnitBallGenRing()
    if name == "k":
        return ResidueGenRing()
    if name.startswith("Delta"):
        from .deltafree import DeltaGenRing
        return DeltaGenRing.from_name(name)
    raise ValueError(f"unknown instance {name!r}")


# ---------------------------------------------------------------------------
# fibre-extended operations

def as_family(a: GenElement) -> FiberFamily:
    return scalar_family(a)


def fam_mult(A: GenRing, c: FiberFamily, b: FiberFamily) -> FiberFamily:
    """c over g: Z -> W times b over f: Y -> Z gives a family over g o f."""
    g, f = c.fmap, b.fmap
    if f.dst != g.src:
        raise DegreeError("families are not composable")
    gf = compose_maps(g, f)
    bc = b.comp
    out = {}
    for w, cw in c.comps:
        Zw = g.fiber(w)
        Yw = gf.fiber(w)
        sub = FiberFamily.make(restrict_map(f, Yw, Zw), {z: bc[z] for z in Zw})
        out[w] = A.mult(cw, sub)
    return FiberFamily.make(gf, out)


def fam_contract(A: GenRing, d: FiberFamily, b: FiberFamily, g: SetMap) -> FiberFamily:
    """d over g o f contracted with b over f: Y -> Z gives a family over g: Z -> W."""
    f = b.fmap
    if compose_maps(g, f) != d.fmap:
        raise DegreeError("d must lie over g o f")
    bc = b.comp
    out = {}
    for w, dw in d.comps:
        Zw = g.fiber(w)
        Yw = d.fmap.fiber(w)
        sub = FiberFamily.make(restrict_map(f, Yw, Zw), {z: bc[z] for z in Zw})
        out[w] = A.contract(dw, sub)
    return FiberFamily.make(g, out)


def fam_eq(A: GenRing, p: FiberFamily, q: FiberFamily) -> bool:
    if p.fmap != q.fmap:
        return False
    qc = q.comp
    return all(A.eq(x, qc[z]) for z, x in p.comps)


def pullback(g: SetMap, f: SetMap):
    """P = Z x_Y X for g: Z -> Y, f: X -> Y, with projections to Z and to X."""
    P = FinSet((z, x) for z, y in g.pairs for x, y2 in f.pairs if y == y2)
    to_z = SetMap(P, g.src, {p: p[0] for p in P})
    to_x = SetMap(P, f.src, {p: p[1] for p in P})
    return P, to_z, to_x


def pull_family(A: GenRing, a: FiberFamily, along: SetMap, proj: SetMap, swap: bool) -> FiberFamily:
    """Pull the family ``a`` (over g: Z -> Y) back along ``along``: X -> Y.

    The result lies over ``proj``: P -> X and its component at x is
    a_{along(x)} with fibre labels z relabelled to the pair (z, x)
    (or (x, z) when ``swap``).
    """
    ac = a.comp
    out = {}
    for x in proj.dst:
        fib = proj.fiber(x)
        y = along(x)
        if y is None:
            out[x] = A.zero(fib)
            continue
        src = ac[y]
        rel = PartialBijection(src.degree, fib, [(z, (x, z) if swap else (z, x)) for z in src.degree])
        out[x] = A.fmap(src, rel)
    return FiberFamily.make(proj, out)


# -- elementary operations ---------------------------------------------------

def substitute_set(Z: FinSet, z0, X: FinSet) -> tuple[FinSet, SetMap]:
    """Z ◁_{z0} X = (Z - z0) + {(z0, x)} with its projection to Z."""
    labels = [z for z in Z if z != z0] + [(z0, x) for x in X]
    S = FinSet(labels)
    return S, SetMap(S, Z, {s: (z0 if (isinstance(s, tuple) and s not in Z) else s) for s in S})


def elem_mult(A: GenRing, c: GenElement, z0, a: GenElement) -> GenElement:
    Z = c.degree
    S, q = substitute_set(Z, z0, a.degree)
    comps = {}
    for z in Z:
        fib = q.fiber(z)
        if z == z0:
            comps[z] = A.fmap(a, PartialBijection(a.degree, fib, [(x, (z0, x)) for x in a.degree]))
        else:
            comps[z] = A.unit_at(fib, z)
    return A.mult(c, FiberFamily.make(q, comps))


def quotient_set(Y: FinSet, X: FinSet, tag) -> tuple[FinSet, SetMap]:
    """Y / X = (Y - X) + {tag} with the collapsing map."""
    Q = FinSet([y for y in Y if y not in X] + [tag])
    return Q, SetMap(Y, Q, {y: (tag if y in X else y) for y in Y})


def elem_contract(A: GenRing, b: GenElement, a: GenElement, tag) -> GenElement:
    Y, X = b.degree, a.degree
    Q, q = quotient_set(Y, X, tag)
    comps = {z: (a if z == tag else A.unit_at(q.fiber(z), z)) for z in Q}
    return A.contract(b, FiberFamily.make(q, comps))


# ---------------------------------------------------------------------------
# axiom checker

AXIOMS = ("assoc", "left-adj", "right-adj", "left-lin", "right-lin", "unit",
          "disjoint-I", "disjoint-II", "disjoint-III", "zero-i", "zero-ii", "zero-iii", "zero-iv")


class _Sampler:
    def __init__(self, A: GenRing, rng: random.Random, max_size: int, exhaustive: bool = False):
        self.A, self.rng, self.max_size = A, rng, max_size

    def set(self, lo=0, tag=0) -> FinSet:
        n = self.rng.randint(lo, self.max_size)
        return FinSet(range(1, n + 1)) if tag == 0 else FinSet((tag, i) for i in range(1, n + 1))

    def map(self, src: FinSet, dst: FinSet, partial=0.15) -> SetMap:
        m = {}
        for y in src:
            if dst.labels and self.rng.random() >= partial:
                m[y] = self.rng.choice(dst.labels)
        return SetMap(src, dst, m)

    def elem(self, X: FinSet) -> GenElement:
        return self.A.random_element(X, self.rng)

    def family(self, f: SetMap) -> FiberFamily:
        return FiberFamily.make(f, {z: self.elem(f.fiber(z)) for z in f.dst})

    def chain(self, k: int) -> list[FinSet]:
        return [self.set(tag=f"s{i}") for i in range(k)]


def _axiom_instance(A: GenRing, axiom: str, s: _Sampler):
    """Build one sample for ``axiom``; return (lhs, rhs, data) or a list of them."""
    if axiom in ("assoc", "left-adj", "right-adj", "left-lin"):
        X, Y, Z, W = s.chain(4)
        f, g, h = s.map(X, Y), s.map(Y, Z), s.map(Z, W)
        gf, hg = compose_maps(g, f), compose_maps(h, g)
        hgf = compose_maps(h, gf)
        if axiom == "assoc":
            d, c, b = s.family(h), s.family(g), s.family(f)
            return [(fam_mult(A, d, fam_mult(A, c, b)), fam_mult(A, fam_mult(A, d, c), b), (d, c, b))]
        if axiom == "left-adj":
            d, a, c = s.family(hgf), s.family(g), s.family(f)
            lhs = fam_contract(A, d, fam_mult(A, a, c), h)
            rhs = fam_contract(A, fam_contract(A, d, c, hg), a, h)
            return [(lhs, rhs, (d, a, c))]
        if axiom == "right-adj":
            d, a, c = s.family(hg), s.family(gf), s.family(f)
            lhs = fam_contract(A, fam_mult(A, d, c), a, h)
            rhs = fam_contract(A, d, fam_contract(A, a, c, g), h)
            return [(lhs, rhs, (d, a, c))]
        d, a, c = s.family(h), s.family(gf), s.family(f)
        lhs = fam_contract(A, fam_mult(A, d, a), c, hg)
        rhs = fam_mult(A, d, fam_contract(A, a, c, g))
        return [(lhs, rhs, (d, a, c))]
    if axiom == "right-lin":
        X, Y, Z, W = s.chain(4)
        g, f, h = s.map(Z, Y), s.map(X, Y), s.map(Y, W)
        d, a, c = s.family(compose_maps(h, f)), s.family(g), s.family(f)
        return [right_linearity(A, d, a, c, h)]
    if axiom == "unit":
        X, W = s.chain(2)
        h = s.map(X, W)
        d = s.family(h)
        return [(fam_mult(A, d, identity_family(A, X)), d, d),
                (fam_mult(A, identity_family(A, W), d), d, d),
                (fam_contract(A, d, identity_family(A, X), h), d, d)]
    if axiom == "disjoint-I":
        Y = s.set(lo=0)
        ys = list(Y)
        s.rng.shuffle(ys)
        k0 = s.rng.randint(0, len(ys))
        k1 = s.rng.randint(k0, len(ys))
        X0, X1 = FinSet(ys[:k0]), FinSet(ys[k0:k1])
        b, a0, a1 = s.elem(Y), s.elem(X0), s.elem(X1)
        lhs = elem_contract(A, elem_contract(A, b, a1, ("/", 1)), a0, ("/", 0))
        rhs = elem_contract(A, elem_contract(A, b, a0, ("/", 0)), a1, ("/", 1))
        return [(as_family(lhs), as_family(rhs), (b, a0, a1))]
    if axiom == "disjoint-II":
        Z = FinSet(range(1, s.rng.randint(2, max(2, s.max_size)) + 1))
        z0, z1 = s.rng.sample(Z.labels, 2)
        c, a0, a1 = s.elem(Z), s.elem(s.set()), s.elem(s.set())
        lhs = elem_mult(A, elem_mult(A, c, z0, a0), z1, a1)
        rhs = elem_mult(A, elem_mult(A, c, z1, a1), z0, a0)
        return [(as_family(lhs), as_family(rhs), (c, a0, a1))]
    if axiom == "disjoint-III":
        Z = FinSet(range(1, s.rng.randint(1, s.max_size) + 1))
        z1 = s.rng.choice(Z.labels)
        rest = [z for z in Z if z != z1]
        X0 = FinSet(z for z in rest if s.rng.random() < 0.6)
        b, a0, a1 = s.elem(Z), s.elem(X0), s.elem(s.set())
        lhs = elem_mult(A, elem_contract(A, b, a0, ("/", 0)), z1, a1)
        rhs = elem_contract(A, elem_mult(A, b, z1, a1), a0, ("/", 0))
        return [(as_family(lhs), as_family(rhs), (b, a0, a1))]
    if axiom == "zero-i":
        Z = FinSet(range(1, s.rng.randint(1, s.max_size) + 1))
        z0 = s.rng.choice(Z.labels)
        a = s.elem(s.set())
        lhs = elem_mult(A, A.zero(Z), z0, a)
        return [(as_family(lhs), as_family(A.zero(lhs.degree)), (Z, z0, a))]
    if axiom == "zero-ii":
        Y = s.set()
        X = FinSet(y for y in Y if s.rng.random() < 0.5)
        a = s.elem(X)
        lhs = elem_contract(A, A.zero(Y), a, ("/", 0))
        return [(as_family(lhs), as_family(A.zero(lhs.degree)), (Y, a))]
    if axiom == "zero-iii":
        Z = FinSet(range(1, s.rng.randint(1, s.max_size) + 1))
        z0 = s.rng.choice(Z.labels)
        a, X = s.elem(Z), s.set()
        lhs = elem_mult(A, a, z0, A.zero(X))
        S, _ = substitute_set(Z, z0, X)
        incl = PartialBijection(Z, S, [(z, z) for z in Z if z != z0])
        return [(as_family(lhs), as_family(A.fmap(a, incl)), (a, z0, X))]
    if axiom == "zero-iv":
        Y = s.set()
        X = FinSet(y for y in Y if s.rng.random() < 0.5)
        a = s.elem(Y)
        lhs = elem_contract(A, a, A.zero(X), ("/", 0))
        Q, _ = quotient_set(Y, X, ("/", 0))
        incl = PartialBijection(Y, Q, [(y, y) for y in Y if y not in X])
        return [(as_family(lhs), as_family(A.fmap(a, incl)), (a, X))]
    raise ValueError(f"unknown axiom {axiom!r}")


def right_linearity(A: GenRing, d: FiberFamily, a: FiberFamily, c: FiberFamily, h: SetMap):
    """Both sides of (d ∥ c) ◁ a = (d ◁ f*a) ∥ g*c.

    Here a lies over g: Z -> Y, c over f: X -> Y, d over h o f and h: Y -> W.
    """
    g, f = a.fmap, c.fmap
    lhs = fam_mult(A, fam_contract(A, d, c, h), a)
    P, to_z, to_x = pullback(g, f)
    fa = pull_family(A, a, f, to_x, swap=False)   # over P -> X, labels (z, x)
    gc = pull_family(A, c, g, to_z, swap=True)    # over P -> Z, labels (z, x)
    rhs = fam_contract(A, fam_mult(A, d, fa), gc, compose_maps(h, g))
    return lhs, rhs, (d, a, c, h)


def axiom_suite(A: GenRing, axiom: str, samples: int = 500, seed: int = 0, max_size: int = 3) -> CheckResult:
    """Check one axiom on ``samples`` seeded random diagrams with sets of size <= max_size."""
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    rng = random.Random(f"{seed}:{axiom}")
    s = _Sampler(A, rng, max_size)
    for i in range(samples):
        for lhs, rhs, data in _axiom_instance(A, axiom, s):
            if not fam_eq(A, lhs, rhs):
                return CheckResult(False, i + 1, witness={"data": data, "lhs": lhs, "rhs": rhs},
                                   detail=f"{axiom} fails on {A.name}")
    return CheckResult(True, samples)


def right_linearity_witness(A: GenRing) -> CheckResult:
    """Exhaustive search over degree-one data (all sets [1], identity maps)."""
    I = SetMap.identity(ONE)
    pool = list(A.elements(ONE))
    checked = 0
    for dv, av, cv in product(pool, repeat=3):
        checked += 1
        fam = lambda e: FiberFamily.make(I, {1: e})
        lhs, rhs, data = right_linearity(A, fam(dv), fam(av), fam(cv), I)
        if not fam_eq(A, lhs, rhs):
            return CheckResult(False, checked, witness={"d": dv, "a": av, "c": cv, "lhs": lhs, "rhs": rhs},
                               detail="right-linearity fails")
    return CheckResult(True, checked)
