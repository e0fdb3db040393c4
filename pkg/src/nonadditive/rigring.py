"""Rigs, monoids with zero, and the matrix F-rings built from them.

An F-ring assigns to every pair of finite sets ``(Y, X)`` a set of arrows
``A[Y, X]`` with composition, block sum and (optionally) transpose.  Here we
provide:

* :class:`MatrixFRing` -- all ``Y x X`` matrices over a rig,
* :class:`MonomialFRing` -- monomial matrices over a monoid with zero,
* :class:`PartialBijectionFRing` -- the base category itself,
* :class:`GraphFRing` -- loop-free graphs glued along shared ports.

The checkers :func:`commutativity_class`, :func:`is_matrix_fring` and
:func:`is_tame` quantify over elements exhaustively up to a bound and return
a :class:`CheckResult` carrying a witness when the property fails.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Any, Callable, Iterable, Iterator

from . import fincat
from ._portgraph import PortGraph
from .fincat import DegreeError, FinSet, PartialBijection, label_key

ONE_SET = FinSet([1])


class UnsupportedOperation(TypeError):
    pass


# ---------------------------------------------------------------------------
# rigs

@dataclass(frozen=True)
class Rig:
    """A commutative-or-not semiring given by its operations.

    ``values`` is a small tuple of representative elements used when an
    instance must be enumerated.
    """

    name: str
    zero: Any
    one: Any
    add: Callable
    mul: Callable
    values: tuple
    neg: Callable | None = None
    involution: Callable | None = None
    is_commutative: bool = True
    normalize: Callable = field(default=lambda x: x)

    @property
    def has_negation(self) -> bool:
        return self.neg is not None

    @property
    def has_involution(self) -> bool:
        return self.involution is not None

    def sum(self, xs: Iterable):
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def coerce(self, v):
        return self.normalize(v)

    def __repr__(self) -> str:
        return f"Rig({self.name})"


def _ident(x):
    return x


NAT = Rig("N", 0, 1, lambda a, b: a + b, lambda a, b: a * b, (0, 1, 2),
          involution=_ident, normalize=lambda v: _check_nat(int(v)))
INT = Rig("Z", 0, 1, lambda a, b: a + b, lambda a, b: a * b, (-1, 0, 1, 2),
          neg=lambda a: -a, involution=_ident, normalize=int)
RAT = Rig("Q", Fraction(0), Fraction(1), lambda a, b: a + b, lambda a, b: a * b,
          (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2)),
          neg=lambda a: -a, involution=_ident, normalize=lambda v: Fraction(v))
BOOL = Rig("bool", 0, 1, max, min, (0, 1), involution=_ident,
           normalize=lambda v: _check_bool(int(v)))
FROZEN = Rig("frozen", 0, 1, max, lambda a, b: a * b, (0, 1, 2),
             involution=_ident, normalize=lambda v: _check_nat(int(v)))


def _check_nat(v: int) -> int:
    if v < 0:
        raise ValueError(f"{v} is not a natural number")
    return v


def _check_bool(v: int) -> int:
    if v not in (0, 1):
        raise ValueError(f"{v} is not boolean")
    return v


def zmod(n: int) -> Rig:
    if n < 1:
        raise ValueError("modulus must be positive")
    return Rig(f"Zmod:{n}", 0, 1 % n, lambda a, b: (a + b) % n, lambda a, b: (a * b) % n,
               tuple(range(n)), neg=lambda a: (-a) % n, involution=_ident,
               normalize=lambda v: int(v) % n)


def _gf4_mul(a: int, b: int) -> int:
    # elements are bit pairs c1*w + c0 with w^2 = w + 1
    r = 0
    for i in range(2):
        if (b >> i) & 1:
            r ^= a << i
    if r & 4:
        r ^= 0b111
    return r


GF4 = Rig("F4", 0, 1, lambda a, b: a ^ b, _gf4_mul, (0, 1, 2, 3), neg=_ident, involution=_ident,
          normalize=lambda v: _check_gf4(int(v)))


def _check_gf4(v: int) -> int:
    if v not in (0, 1, 2, 3):
        raise ValueError(f"{v} is not an element of F4 (use 0..3)")
    return v


def rig_from_name(name: str) -> Rig:
    table = {"N": NAT, "Z": INT, "Q": RAT, "bool": BOOL, "frozen": FROZEN, "F4": GF4}
    if name in table:
        return table[name]
    if name.startswith("Zmod:"):
        return zmod(int(name.split(":", 1)[1]))
    raise ValueError(f"unknown rig {name!r}")


# ---------------------------------------------------------------------------
# monoids with zero

ZERO = None  # the absorbing element of every monoid below


@dataclass(frozen=True)
class Monoid:
    """Multiplicative monoid with an absorbing zero (``None``)."""

    name: str
    one: Any
    mul_nonzero: Callable
    values: tuple  # nonzero sample elements
    involution: Callable | None = None
    is_commutative: bool = True

    def mul(self, a, b):
        if a is ZERO or b is ZERO:
            return ZERO
        return self.mul_nonzero(a, b)

    def inv(self, a):
        if self.involution is None:
            raise UnsupportedOperation(f"{self.name} has no involution")
        return ZERO if a is ZERO else self.involution(a)


def cyclic_mul_monoid(n: int) -> Monoid:
    """The multiplicative monoid of Z/n; the residue 0 is the monoid zero."""

    def mul(a, b):
        c = (a * b) % n
        return ZERO if c == 0 else c

    return Monoid(f"Z/{n}", 1, mul, tuple(range(1, n)), involution=_ident)


def free_monoid(letters: str = "xy", max_len: int = 2) -> Monoid:
    """Words over ``letters`` with an adjoined zero; involution reverses words."""
    words = tuple("".join(w) for k in range(max_len + 1) for w in product(letters, repeat=k))
    return Monoid(f"free({letters})", "", lambda a, b: a + b, words,
                  involution=lambda w: w[::-1], is_commutative=False)


TRIVIAL_MONOID = Monoid("{0,1}", 1, lambda a, b: 1, (1,), involution=_ident)


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class RigMatrix:
    rows: FinSet
    cols: FinSet
    entries: frozenset  # of ((y, x), value); zero never stored
    rig: Rig = field(compare=False)

    @classmethod
    def make(cls, rows: FinSet, cols: FinSet, entries: dict, rig: Rig) -> "RigMatrix":
        clean = {}
        for (y, x), v in entries.items():
            if y not in rows or x not in cols:
                raise DegreeError(f"entry {(y, x)!r} outside {rows} x {cols}")
            v = rig.coerce(v)
            if v != rig.zero:
                clean[(y, x)] = v
        return cls(rows, cols, frozenset(clean.items()), rig)

    @classmethod
    def from_rows(cls, rows_list, rig: Rig, rows: FinSet | None = None,
                  cols: FinSet | None = None) -> "RigMatrix":
        rows = rows or FinSet.range(len(rows_list))
        ncols = len(rows_list[0]) if rows_list else 0
        cols = cols or FinSet.range(ncols)
        ent = {(y, x): rows_list[i][j] for i, y in enumerate(rows) for j, x in enumerate(cols)}
        return cls.make(rows, cols, ent, rig)

    @property
    def entry_map(self) -> dict:
        return dict(self.entries)

    def __getitem__(self, yx):
        return self.entry_map.get(yx, self.rig.zero)

    def dense(self) -> list[list]:
        m = self.entry_map
        return [[m.get((y, x), self.rig.zero) for x in self.cols] for y in self.rows]

    def __repr__(self) -> str:
        return f"RigMatrix[{self.rig.name}]({self.dense()})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows.to_json(),
            "cols": self.cols.to_json(),
            "entries": [[fincat._label_to_json(y), fincat._label_to_json(x), _value_to_json(v)]
                        for (y, x), v in sorted(self.entries, key=lambda e: label_key(e[0]))],
            "rig": self.rig.name,
        }

    @classmethod
    def from_json(cls, data) -> "RigMatrix":
        try:
            rig = rig_from_name(data["rig"])
            rows = FinSet.from_json(data["rows"])
            cols = FinSet.from_json(data["cols"])
            ent = {}
            for y, x, v in data["entries"]:
                ent[(fincat._label_from_json(y), fincat._label_from_json(x))] = _value_from_json(v)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed matrix: {exc}") from exc
        return cls.make(rows, cols, ent, rig)


def _value_to_json(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


def _value_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def mat_compose(a: RigMatrix, b: RigMatrix) -> RigMatrix:
    """a o b  (``b`` is applied first): entries sum_y a[z,y] * b[y,x]."""
    if b.rows != a.cols:
        raise DegreeError(f"cannot compose {a.cols} with {b.rows}")
    rig = a.rig
    by_row = {}
    for (y, x), v in b.entries:
        by_row.setdefault(y, []).append((x, v))
    out: dict = {}
    for (z, y), u in a.entries:
        for x, v in by_row.get(y, ()):
            out[(z, x)] = rig.add(out.get((z, x), rig.zero), rig.mul(u, v))
    return RigMatrix.make(a.rows, b.cols, out, rig)


def mat_oplus(a: RigMatrix, b: RigMatrix) -> RigMatrix:
    ent = {((0, y), (0, x)): v for (y, x), v in a.entries}
    ent.update({((1, y), (1, x)): v for (y, x), v in b.entries})
    return RigMatrix.make(fincat.disjoint_union(a.rows, b.rows),
                          fincat.disjoint_union(a.cols, b.cols), ent, a.rig)


def mat_transpose(a: RigMatrix) -> RigMatrix:
    if not a.rig.has_involution:
        raise UnsupportedOperation(f"rig {a.rig.name} has no involution")
    inv = a.rig.involution
    return RigMatrix.make(a.cols, a.rows, {(x, y): inv(v) for (y, x), v in a.entries}, a.rig)


@dataclass(frozen=True)
class MonomialMatrix:
    """Matrix over a monoid with zero, at most one nonzero per row and column."""

    rows: FinSet
    cols: FinSet
    entries: frozenset  # of ((y, x), m)
    monoid: Monoid = field(compare=False)

    @classmethod
    def make(cls, rows, cols, entries: dict, monoid: Monoid) -> "MonomialMatrix":
        clean = {k: v for k, v in entries.items() if v is not ZERO}
        ys = [y for y, _ in clean]
        xs = [x for _, x in clean]
        if len(set(ys)) != len(ys) or len(set(xs)) != len(xs):
            raise ValueError("not a monomial matrix")
        for y, x in clean:
            if y not in rows or x not in cols:
                raise DegreeError(f"entry {(y, x)!r} outside degree")
        return cls(rows, cols, frozenset(clean.items()), monoid)

    @property
    def entry_map(self) -> dict:
        return dict(self.entries)

    def __repr__(self) -> str:
        m = self.entry_map
        return f"Mono({[[m.get((y, x), 0) for x in self.cols] for y in self.rows]})"


# ---------------------------------------------------------------------------
# F-rings

class FRing:
    """Interface for an F-ring instance used by the property checkers."""

    name = "F-ring"
    has_involution = True

    def compose(self, b, a):
        raise NotImplementedError

    def block_sum(self, blocks: dict):
        """Direct sum indexed by ``blocks`` keys; labels become (key, label)."""
        raise NotImplementedError

    def transpose(self, a):
        raise NotImplementedError

    def relabel(self, a, row_fn, col_fn):
        raise NotImplementedError

    def identity(self, X: FinSet):
        raise NotImplementedError

    def elements(self, Y: FinSet, X: FinSet) -> Iterator:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def degree(self, a) -> tuple[FinSet, FinSet]:
        return a.rows, a.cols

    def oplus(self, a, b):
        return self.block_sum({0: a, 1: b})

    def copies(self, a, J: FinSet, outer: bool = True):
        """(+)_J a with labels (j, .) when ``outer`` else (., j)."""
        s = self.block_sum({j: a for j in J})
        if outer:
            return s
        return self.relabel(s, lambda p: (p[1], p[0]), lambda p: (p[1], p[0]))


class MatrixFRing(FRing):
    def __init__(self, rig: Rig, values: Iterable | None = None):
        self.rig = rig
        self.values = tuple(values) if values is not None else rig.values
        self.name = f"F({rig.name})"

    def compose(self, b, a):
        return mat_compose(b, a)

    def block_sum(self, blocks):
        ent, rows, cols = {}, [], []
        for k, m in blocks.items():
            rows += [(k, y) for y in m.rows]
            cols += [(k, x) for x in m.cols]
            ent.update({((k, y), (k, x)): v for (y, x), v in m.entries})
        return RigMatrix.make(FinSet(rows), FinSet(cols), ent, self.rig)

    def transpose(self, a):
        return mat_transpose(a)

    def relabel(self, a, row_fn, col_fn):
        return RigMatrix.make(FinSet(map(row_fn, a.rows)), FinSet(map(col_fn, a.cols)),
                              {(row_fn(y), col_fn(x)): v for (y, x), v in a.entries}, self.rig)

    def identity(self, X):
        return RigMatrix.make(X, X, {(x, x): self.rig.one for x in X}, self.rig)

    def from_pb(self, f: PartialBijection):
        return RigMatrix.make(f.cod, f.dom, {(y, x): self.rig.one for x, y in f.pairs}, self.rig)

    def elements(self, Y, X):
        cells = [(y, x) for y in Y for x in X]
        for vals in product(self.values, repeat=len(cells)):
            yield RigMatrix.make(Y, X, dict(zip(cells, vals)), self.rig)

    def random_element(self, Y, X, rng):
        return RigMatrix.make(Y, X, {(y, x): rng.choice(self.values) for y in Y for x in X}, self.rig)


class MonomialFRing(FRing):
    def __init__(self, monoid: Monoid):
        self.monoid = monoid
        self.name = f"F{{{monoid.name}}}"
        self.has_involution = monoid.involution is not None

    def compose(self, b, a):
        if a.rows != b.cols:
            raise DegreeError("degree mismatch")
        bm = {x: (z, m) for (z, x), m in b.entries}
        out = {}
        for (y, x), m in a.entries:
            if y in bm:
                z, m2 = bm[y]
                out[(z, x)] = self.monoid.mul(m2, m)
        return MonomialMatrix.make(b.rows, a.cols, out, self.monoid)

    def block_sum(self, blocks):
        ent, rows, cols = {}, [], []
        for k, m in blocks.items():
            rows += [(k, y) for y in m.rows]
            cols += [(k, x) for x in m.cols]
            ent.update({((k, y), (k, x)): v for (y, x), v in m.entries})
        return MonomialMatrix.make(FinSet(rows), FinSet(cols), ent, self.monoid)

    def transpose(self, a):
        return MonomialMatrix.make(a.cols, a.rows, {(x, y): self.monoid.inv(m) for (y, x), m in a.entries},
                                   self.monoid)

    def relabel(self, a, row_fn, col_fn):
        return MonomialMatrix.make(FinSet(map(row_fn, a.rows)), FinSet(map(col_fn, a.cols)),
                                   {(row_fn(y), col_fn(x)): v for (y, x), v in a.entries}, self.monoid)

    def identity(self, X):
        return MonomialMatrix.make(X, X, {(x, x): self.monoid.one for x in X}, self.monoid)

    def from_pb(self, f: PartialBijection):
        return MonomialMatrix.make(f.cod, f.dom, {(y, x): self.monoid.one for x, y in f.pairs}, self.monoid)

    def elements(self, Y, X):
        for f in fincat.all_partial_bijections(X, Y):
            pairs = sorted(f.pairs, key=label_key)
            for ms in product(self.monoid.values, repeat=len(pairs)):
                yield MonomialMatrix.make(Y, X, {(y, x): m for (x, y), m in zip(pairs, ms)}, self.monoid)


class PartialBijectionFRing(FRing):
    """The base category as an F-ring (elements are ``PartialBijection`` X -> Y)."""

    name = "F1"

    def degree(self, a):
        return a.cod, a.dom

    def compose(self, b, a):
        return fincat.compose(b, a)

    def block_sum(self, blocks):
        dom = FinSet((k, x) for k, f in blocks.items() for x in f.dom)
        cod = FinSet((k, y) for k, f in blocks.items() for y in f.cod)
        return PartialBijection(dom, cod, (((k, x), (k, y)) for k, f in blocks.items() for x, y in f.pairs))

    def transpose(self, a):
        return fincat.transpose(a)

    def relabel(self, a, row_fn, col_fn):
        return PartialBijection(FinSet(map(col_fn, a.dom)), FinSet(map(row_fn, a.cod)),
                                ((col_fn(x), row_fn(y)) for x, y in a.pairs))

    def identity(self, X):
        return PartialBijection.identity(X)

    def from_pb(self, f):
        return f

    def elements(self, Y, X):
        return fincat.all_partial_bijections(X, Y)


# -- graphs ------------------------------------------------------------------

class GraphFRing(FRing):
    """Loop-free directed graphs with sources embedded in X and sinks in Y.

    Elements are :class:`PortGraph` values in canonical form (edge tag is
    ignored and set to ``None``); ``inputs`` embed the sources, ``outputs``
    the sinks.
    """

    name = "Graph"

    def make(self, n, edges, inputs, outputs, X: FinSet, Y: FinSet):
        g = PortGraph.build(n, [(s, d, None) for s, d in edges], inputs, outputs)
        if not g.is_acyclic():
            raise ValueError("graph has a loop")
        src, snk = g.sources(), g.sinks()
        if {v for _, v in g.inputs} != src or {v for _, v in g.outputs} != snk:
            raise ValueError("sources and sinks must be exactly the embedded ports")
        return (X, Y, g.canonical())

    def degree(self, a):
        return a[1], a[0]

    def compose(self, b, a):
        # a: X -> Y, b: Y -> Z ; glue b[Y0] with [Y0]a along Y0 = In(b) & Out(a)
        X, Y, ga = a
        Y2, Z, gb = b
        if Y != Y2:
            raise DegreeError("degree mismatch")
        y0 = {y for y, _ in ga.outputs} & {y for y, _ in gb.inputs}
        ka = _paths_touching(ga, {v for y, v in ga.outputs if y in y0}, forward=False)
        kb = _paths_touching(gb, {v for y, v in gb.inputs if y in y0}, forward=True)
        ga_v, ga_e = ka
        gb_v, gb_e = kb
        ids = {}
        for v in sorted(ga_v):
            ids[("a", v)] = len(ids)
        out_a = dict(ga.outputs)
        in_b = dict(gb.inputs)
        for v in sorted(gb_v):
            ids[("b", v)] = len(ids)
        for y in y0:  # identify glued ports
            ids[("b", in_b[y])] = ids[("a", out_a[y])]
        edges = [(ids[("a", ga.edges[i][0])], ids[("a", ga.edges[i][1])]) for i in ga_e]
        edges += [(ids[("b", gb.edges[i][0])], ids[("b", gb.edges[i][1])]) for i in gb_e]
        inputs = [(x, ids[("a", v)]) for x, v in ga.inputs if v in ga_v]
        outputs = [(z, ids[("b", v)]) for z, v in gb.outputs if v in gb_v]
        used = sorted(set(ids.values()))
        remap = {u: i for i, u in enumerate(used)}
        return self.make(len(used), [(remap[s], remap[d]) for s, d in edges],
                         [(x, remap[v]) for x, v in inputs], [(z, remap[v]) for z, v in outputs], X, Z)

    def block_sum(self, blocks):
        n, edges, inputs, outputs, xs, ys = 0, [], [], [], [], []
        for k, (X, Y, g) in blocks.items():
            edges += [(s + n, d + n) for s, d, _ in g.edges]
            inputs += [((k, x), v + n) for x, v in g.inputs]
            outputs += [((k, y), v + n) for y, v in g.outputs]
            xs += [(k, x) for x in X]
            ys += [(k, y) for y in Y]
            n += g.n
        return self.make(n, edges, inputs, outputs, FinSet(xs), FinSet(ys))

    def transpose(self, a):
        X, Y, g = a
        return self.make(g.n, [(d, s) for s, d, _ in g.edges], g.outputs, g.inputs, Y, X)

    def relabel(self, a, row_fn, col_fn):
        X, Y, g = a
        return self.make(g.n, [(s, d) for s, d, _ in g.edges], [(col_fn(x), v) for x, v in g.inputs],
                         [(row_fn(y), v) for y, v in g.outputs], FinSet(map(col_fn, X)), FinSet(map(row_fn, Y)))

    def identity(self, X):
        return self.make(len(X), [], [(x, i) for i, x in enumerate(X)], [(x, i) for i, x in enumerate(X)], X, X)

    def from_pb(self, f):
        pairs = sorted(f.pairs, key=label_key)
        return self.make(len(pairs), [], [(x, i) for i, (x, _) in enumerate(pairs)],
                         [(y, i) for i, (_, y) in enumerate(pairs)], f.dom, f.cod)

    def path_counts(self, a) -> RigMatrix:
        """The homomorphism to F(N): number of maximal paths from x to y."""
        X, Y, g = a
        outs, _ = g.adjacency()
        memo = {}

        def count(v):
            if v not in memo:
                if not outs[v]:
                    memo[v] = {v: 1}
                else:
                    acc = {}
                    for i in outs[v]:
                        for t, c in count(g.edges[i][1]).items():
                            acc[t] = acc.get(t, 0) + c
                    memo[v] = acc
            return memo[v]

        yof = {v: y for y, v in g.outputs}
        ent = {}
        for x, v in g.inputs:
            for t, c in count(v).items():
                ent[(yof[t], x)] = ent.get((yof[t], x), 0) + c
        return RigMatrix.make(Y, X, ent, NAT)

    def elements(self, Y, X):
        """Tiny graphs: at most two internal vertices and unit edge multiplicities."""
        seen = set()
        xs, ys = list(X), list(Y)
        for nin in range(len(xs) + 1):
            for ins in combinations(xs, nin):
                for nout in range(len(ys) + 1):
                    for outs in combinations(ys, nout):
                        for nint in range(3):
                            n = nin + nout + nint
                            in_v = list(range(nin))
                            out_v = list(range(nin, nin + nout))
                            mid = list(range(nin + nout, n))
                            cand = [(s, d) for s in in_v + mid for d in mid + out_v if s != d
                                    and not (s in mid and d in mid and s > d)]
                            if len(cand) > 10:
                                continue
                            for mask in range(1 << len(cand)):
                                es = [c for i, c in enumerate(cand) if mask >> i & 1]
                                try:
                                    el = self.make(n, es, list(zip(ins, in_v)), list(zip(outs, out_v)), X, Y)
                                except ValueError:
                                    continue
                                if el not in seen:
                                    seen.add(el)
                                    yield el
        # discrete graphs: a vertex that is both a source and a sink
        for f in fincat.all_partial_bijections(X, Y):
            if f.pairs:
                el = self.from_pb(f)
                if el not in seen:
                    seen.add(el)
                    yield el


def _paths_touching(g: PortGraph, ends: set, forward: bool):
    """Vertices and edge indices lying on a maximal path that starts (forward)
    or ends (backward) in ``ends``."""
    outs, ins = g.adjacency()
    adj = outs if forward else ins
    end_of = 1 if forward else 0
    verts, edges = set(ends), set()
    stack = list(ends)
    while stack:
        v = stack.pop()
        for i in adj[v]:
            edges.add(i)
            w = g.edges[i][end_of]
            if w not in verts:
                verts.add(w)
                stack.append(w)
    return verts, edges


# ---------------------------------------------------------------------------
# property checkers

@dataclass
class CheckResult:
    passed: bool
    checked: int
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


def _degree_sets(max_degree: int) -> list[FinSet]:
    return [FinSet.range(n) for n in range(max_degree + 1)]


def _samples(fr: FRing, shapes: list[tuple[FinSet, FinSet]], limit: int, rng: random.Random):
    """All tuples of elements with the given shapes, or ``limit`` random ones."""
    pools = [list(fr.elements(Y, X)) for Y, X in shapes]
    total = prod(len(p) for p in pools)
    if total <= limit:
        yield from product(*pools)
    else:
        for _ in range(limit):
            yield tuple(rng.choice(p) for p in pools)


def _tag(label):
    return lambda v: (label, v)


def _class_identity(fr: FRing, name: str, els, sets):
    """Return (lhs, rhs) pairs that must agree for the class ``name``."""
    one = 1
    if name == "total":
        (a, b), (Y, X, J, I) = els, sets
        lhs = fr.compose(fr.copies(a, J, outer=False), fr.copies(b, X, outer=True))
        rhs = fr.compose(fr.copies(b, Y, outer=True), fr.copies(a, I, outer=False))
        return [(lhs, rhs)]
    if name == "left":
        (a, b), (X, I) = els, sets
        # a in A[1,X], b in A[1,I]:  a o (+)_X b  =  b o (+)_I a, in A[1, X x I]
        bx = fr.relabel(fr.copies(b, X, outer=True), lambda p: p[0], _ident)
        lhs = fr.compose(a, bx)
        ai = fr.relabel(fr.copies(a, I, outer=True), lambda p: p[0], lambda p: (p[1], p[0]))
        rhs = fr.compose(b, ai)
        return [(lhs, rhs)]
    if name == "right":
        (a, b), (Y, J) = els, sets
        # a in A[Y,1], b in A[J,1]:  ((+)_J a) o b  =  ((+)_Y b) o a, in A[Y x J, 1]
        aj = fr.relabel(fr.copies(a, J, outer=True), lambda p: (p[1], p[0]), lambda p: p[0])
        lhs = fr.compose(aj, b)
        by = fr.relabel(fr.copies(b, Y, outer=True), _ident, lambda p: p[0])
        rhs = fr.compose(by, a)
        return [(lhs, rhs)]
    if name == "one":
        (a1, b1, a2, b2), (X, I, Y, J) = els, sets
        return _class_identity(fr, "left", (a1, b1), (X, I)) + _class_identity(fr, "right", (a2, b2), (Y, J))
    if name == "cross":
        (a, b), (Y, I) = els, sets
        # a in A[Y,1], b in A[1,I]:  a o b  =  ((+)_Y b) o ((+)_I a)
        lhs = fr.compose(a, b)
        ai = fr.relabel(fr.copies(a, I, outer=True), lambda p: (p[1], p[0]), lambda p: p[0])
        by = fr.relabel(fr.copies(b, Y, outer=True), lambda p: p[0], _ident)
        rhs = fr.compose(by, ai)
        return [(lhs, rhs)]
    if name == "central":
        (a, b), (Y, X) = els, sets
        bx = fr.relabel(fr.copies(b, X, outer=True), lambda p: p[0], lambda p: p[0])
        by = fr.relabel(fr.copies(b, Y, outer=True), lambda p: p[0], lambda p: p[0])
        return [(fr.compose(a, bx), fr.compose(by, a))]
    if name == "commutative":
        (a, b, d), (Y, X, J) = els, sets
        bd = fr.compose(b, d)
        bdx = fr.relabel(fr.copies(bd, X, outer=True), lambda p: p[0], lambda p: p[0])
        bdy = fr.relabel(fr.copies(bd, Y, outer=True), lambda p: p[0], lambda p: p[0])
        lhs = fr.compose(a, bdx)
        mid = fr.compose(bdy, a)
        dx = fr.relabel(fr.copies(d, X, outer=True), _ident, lambda p: p[0])  # X x J <- X
        aj = fr.relabel(fr.copies(a, J, outer=True), lambda p: (p[1], p[0]), lambda p: (p[1], p[0]))
        by = fr.relabel(fr.copies(b, Y, outer=True), lambda p: p[0], _ident)  # Y <- Y x J
        rhs = fr.compose(by, fr.compose(aj, dx))
        return [(lhs, mid), (mid, rhs)]
    raise ValueError(f"unknown commutativity class {name!r}")


_CLASS_SHAPES = {
    # shapes of the quantified elements as functions of the degree sets
    "total": (4, lambda Y, X, J, I: [(Y, X), (J, I)]),
    "left": (2, lambda X, I: [(ONE_SET, X), (ONE_SET, I)]),
    "right": (2, lambda Y, J: [(Y, ONE_SET), (J, ONE_SET)]),
    "one": (4, lambda X, I, Y, J: [(ONE_SET, X), (ONE_SET, I), (Y, ONE_SET), (J, ONE_SET)]),
    "cross": (2, lambda Y, I: [(Y, ONE_SET), (ONE_SET, I)]),
    "central": (2, lambda Y, X: [(Y, X), (ONE_SET, ONE_SET)]),
    "commutative": (3, lambda Y, X, J: [(Y, X), (ONE_SET, J), (J, ONE_SET)]),
}

COMMUTATIVITY_CLASSES = tuple(_CLASS_SHAPES)


def commutativity_class(fr: FRing, class_name: str, max_degree: int = 2,
                        limit: int = 5000, seed: int = 0) -> CheckResult:
    """Check a commutativity class on every element tuple of bounded degree.

    Degree sets range over [0]..[max_degree]; for each choice of degree sets
    all tuples are tried when there are at most ``limit`` of them, otherwise
    ``limit`` seeded random tuples.
    """
    if class_name not in _CLASS_SHAPES:
        raise ValueError(f"unknown commutativity class {class_name!r}")
    arity, shapes_of = _CLASS_SHAPES[class_name]
    rng = random.Random(seed)
    checked = 0
    for sets in product(_degree_sets(max_degree), repeat=arity):
        shapes = shapes_of(*sets)
        for els in _samples(fr, shapes, limit, rng):
            checked += 1
            for lhs, rhs in _class_identity(fr, class_name, els, sets):
                if not fr.eq(lhs, rhs):
                    return CheckResult(False, checked, witness={"elements": els, "lhs": lhs, "rhs": rhs},
                                       detail=f"{class_name} fails")
    return CheckResult(True, checked)


def matrix_coefficients(fr: FRing, a) -> dict:
    """J(a) = (j_y^t o a o j_x) for all y, x."""
    Y, X = fr.degree(a)
    out = {}
    for y in Y:
        jy_t = fr.transpose(fr.from_pb(PartialBijection.inclusion(Y, y)))
        for x in X:
            jx = fr.from_pb(PartialBijection.inclusion(X, x))
            out[(y, x)] = fr.compose(jy_t, fr.compose(a, jx))
    return out


def _key(fr, el):
    return getattr(fr, "key", lambda e: e)(el)


def is_matrix_fring(fr: FRing, size_bound: int = 2) -> CheckResult:
    """Matrix coefficients determine the element, on enumerated degrees <= bound."""
    checked = 0
    for ny in range(size_bound + 1):
        for nx in range(size_bound + 1):
            Y, X = FinSet.range(ny), FinSet.range(nx)
            seen = {}
            for a in fr.elements(Y, X):
                checked += 1
                coeffs = matrix_coefficients(fr, a)
                k = tuple(sorted(((yx, _key(fr, v)) for yx, v in coeffs.items()), key=lambda t: label_key(t[0])))
                if k in seen and not fr.eq(seen[k], a):
                    return CheckResult(False, checked, witness=(seen[k], a),
                                       detail="distinct elements share all matrix coefficients")
                seen.setdefault(k, a)
    return CheckResult(True, checked)


def is_tame(fr: FRing, size_bound: int = 2) -> CheckResult:
    """b o a o d = b o a' o d for every probe b in A[1,Y], d in A[X,1] forces a = a'."""
    checked = 0
    for ny in range(size_bound + 1):
        for nx in range(size_bound + 1):
            Y, X = FinSet.range(ny), FinSet.range(nx)
            bs = list(fr.elements(ONE_SET, Y))
            ds = list(fr.elements(X, ONE_SET))
            seen = {}
            for a in fr.elements(Y, X):
                checked += 1
                sig = tuple(_key(fr, fr.compose(b, fr.compose(a, d))) for b in bs for d in ds)
                if sig in seen and not fr.eq(seen[sig], a):
                    return CheckResult(False, checked, witness=(seen[sig], a),
                                       detail="probes cannot separate two elements")
                seen.setdefault(sig, a)
    return CheckResult(True, checked)
