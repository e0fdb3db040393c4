"""Free commutative generalized rings as labelled trees.

A node of a :class:`LabelledTree` is named by its path of labels from the
root (a tuple).  Because the labels of siblings are distinct, the path
determines the node and isomorphic trees are literally equal.  Every
internal node also records which generator it expands (a generator is a
name with a finite label set).

A :class:`TreeElement` of degree ``X`` is a tree ``F1``, a tree ``Fbar[x]``
for every ``x`` in ``X``, and a bijection ``sigma`` from the leaves of ``F1``
to the disjoint union of the leaves of the ``Fbar[x]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from . import fincat
from .fincat import DegreeError, FinSet, PartialBijection, label_key
from .genring import (ONE, FiberFamily, GenElement, GenRing, SetMap)

ROOT = ()


@dataclass(frozen=True)
class LabelledTree:
    """A rooted tree; ``gens`` maps each internal node path to its generator."""

    nodes: frozenset  # of paths; empty for the empty tree
    gens: frozenset   # of (path, generator)

    @classmethod
    def make(cls, nodes: Iterable[tuple], gens: dict) -> "LabelledTree":
        nodes = frozenset(tuple(p) for p in nodes)
        for p in nodes:
            if p and p[:-1] not in nodes:
                raise ValueError(f"node {p!r} has no parent")
        internal = {p[:-1] for p in nodes if p}
        if set(gens) != internal:
            raise ValueError("every internal node needs exactly one generator")
        return cls(nodes, frozenset(gens.items()))

    @classmethod
    def empty(cls) -> "LabelledTree":
        return cls(frozenset(), frozenset())

    @classmethod
    def unit(cls) -> "LabelledTree":
        return cls(frozenset([ROOT]), frozenset())

    @classmethod
    def corolla(cls, gen, labels: Iterable) -> "LabelledTree":
        labels = list(labels)
        if not labels:
            return cls.empty()
        return cls.make([ROOT] + [(w,) for w in labels], {ROOT: gen})

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    @property
    def gen_map(self) -> dict:
        return dict(self.gens)

    def children(self, p) -> list:
        return sorted((q for q in self.nodes if len(q) == len(p) + 1 and q[:-1] == p), key=label_key)

    @property
    def boundary(self) -> list:
        """Leaves (nodes without children), in canonical order."""
        internal = {p[:-1] for p in self.nodes if p}
        return sorted((p for p in self.nodes if p not in internal), key=label_key)

    @property
    def height(self) -> int:
        return max((len(p) for p in self.nodes), default=0)

    def nu(self, p) -> int:
        return len(self.children(p))

    def reduce_to(self, keep: Iterable) -> "LabelledTree":
        """F|_B: prune every leaf outside ``keep``, recursively."""
        keep = set(keep)
        nodes = {b[:k] for b in keep for k in range(len(b) + 1)}
        internal = {p[:-1] for p in nodes if p}
        gm = self.gen_map
        return LabelledTree.make(nodes, {p: gm[p] for p in internal})

    def to_json(self) -> dict:
        order = sorted(self.nodes, key=lambda p: (len(p), label_key(p)))
        ids = {p: i for i, p in enumerate(order)}
        gm = self.gen_map
        return {
            "nodes": list(range(len(order))),
            "root": 0 if order else None,
            "parent": [[ids[p], ids[p[:-1]]] for p in order if p],
            "labels": [[ids[p], fincat._label_to_json(p[-1])] for p in order if p],
            "gens": [[ids[p], fincat._label_to_json(g)] for p, g in sorted(gm.items(), key=lambda t: label_key(t[0]))],
        }

    @classmethod
    def from_json(cls, data) -> "LabelledTree":
        try:
            if data.get("root") is None:
                return cls.empty()
            parent = {c: p for c, p in data["parent"]}
            label = {c: fincat._label_from_json(w) for c, w in data["labels"]}
            gens = {n: fincat._label_from_json(g) for n, g in data.get("gens", [])}
            root = data["root"]
            paths = {}

            def path(n, depth=0):
                if depth > len(data["nodes"]):
                    raise ValueError("parent map has a cycle")
                if n == root:
                    return ROOT
                if n not in paths:
                    paths[n] = path(parent[n], depth + 1) + (label[n],)
                return paths[n]

            nodes = [path(n) for n in data["nodes"]]
            if len(set(nodes)) != len(nodes):
                raise ValueError("sibling labels must be distinct")
            internal = {p[:-1] for p in nodes if p}
            gm = {}
            for n in data["nodes"]:
                p = path(n)
                if p in internal:
                    gm[p] = gens.get(n, 0)
            return cls.make(nodes, gm)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tree: {exc}") from exc


def graft(F: LabelledTree, G: dict) -> LabelledTree:
    """F ◁ G: keep the leaves b of F with G[b] nonempty and hang G[b] there.

    The leaf ``b + c`` of the result corresponds to the leaf ``c`` of ``G[b]``.
    """
    B = [b for b in F.boundary if not G[b].is_empty]
    base = F.reduce_to(B)
    nodes = set(base.nodes)
    gens = base.gen_map
    for b in B:
        for p in G[b].nodes:
            nodes.add(b + p)
        for p, g in G[b].gens:
            gens[b + p] = g
    return LabelledTree.make(nodes, gens)


@dataclass(frozen=True)
class TreeElement:
    degree: FinSet
    F1: LabelledTree
    Fbar: tuple   # sorted tuple of (x, LabelledTree)
    sigma: frozenset  # of (leaf of F1, (x, leaf of Fbar[x]))

    @classmethod
    def make(cls, degree: FinSet, F1: LabelledTree, Fbar: dict, sigma: dict) -> "TreeElement":
        if set(Fbar) != set(degree):
            raise DegreeError("need one tree per degree label")
        left = set(F1.boundary)
        right = {(x, c) for x in degree for c in Fbar[x].boundary}
        if set(sigma) != left or set(sigma.values()) != right or len(set(sigma.values())) != len(sigma):
            raise ValueError("sigma must be a bijection between the boundaries")
        return cls(degree, F1, tuple(sorted(Fbar.items(), key=lambda t: label_key(t[0]))), frozenset(sigma.items()))

    @property
    def bar(self) -> dict:
        return dict(self.Fbar)

    @property
    def sigma_map(self) -> dict:
        return dict(self.sigma)

    def to_json(self) -> dict:
        return {
            "degree": self.degree.to_json(),
            "F1": self.F1.to_json(),
            "barF": [[fincat._label_to_json(x), t.to_json()] for x, t in self.Fbar],
            "sigma": [[fincat._label_to_json(b), [fincat._label_to_json(x), fincat._label_to_json(c)]]
                      for b, (x, c) in sorted(self.sigma, key=lambda t: label_key(t[0]))],
        }

    @classmethod
    def from_json(cls, data) -> "TreeElement":
        try:
            X = FinSet.from_json(data["degree"])
            F1 = LabelledTree.from_json(data["F1"])
            Fbar = {fincat._label_from_json(x): LabelledTree.from_json(t) for x, t in data["barF"]}
            sig = {fincat._label_from_json(b): (fincat._label_from_json(x), fincat._label_from_json(c))
                   for b, (x, c) in data["sigma"]}
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tree element: {exc}") from exc
        return cls.make(X, F1, Fbar, sig)


def zero_element(X: FinSet) -> TreeElement:
    return TreeElement.make(X, LabelledTree.empty(), {x: LabelledTree.empty() for x in X}, {})


def point_element(X: FinSet, x0) -> TreeElement:
    """The image of the point x0 of the initial instance."""
    bar = {x: (LabelledTree.unit() if x == x0 else LabelledTree.empty()) for x in X}
    return TreeElement.make(X, LabelledTree.unit(), bar, {ROOT: (x0, ROOT)})


def generator(gen, W: FinSet) -> TreeElement:
    """The universal element of the generator ``gen`` with label set W (a corolla)."""
    F1 = LabelledTree.corolla(gen, W)
    return TreeElement.make(W, F1, {w: LabelledTree.unit() for w in W}, {(w,): (w, ROOT) for w in W})


def degree(F: TreeElement) -> int:
    """max over leaves b of F1 of ht(b) + ht(sigma(b))."""
    return max((len(b) + len(c) for b, (_, c) in F.sigma), default=0)


def tree_mult(G: TreeElement, fam: dict, f: SetMap) -> TreeElement:
    """G over Y times a family ``fam[y]`` of elements over f^-1(y), for f: X -> Y."""
    if G.degree != f.dst:
        raise DegreeError("tree_mult degree mismatch")
    gbar, tau = G.bar, G.sigma_map
    F1 = graft(G.F1, {b: fam[tau[b][0]].F1 for b in G.F1.boundary})
    bar = {}
    for x in f.src:
        y = f(x)
        if y is None:
            bar[x] = LabelledTree.empty()
            continue
        Fx = fam[y].bar[x]
        bar[x] = graft(Fx, {d: gbar[y] for d in Fx.boundary})
    sigma = {}
    for b in G.F1.boundary:
        y, c = tau[b]
        sy = fam[y].sigma_map
        for e in fam[y].F1.boundary:
            x, d = sy[e]
            sigma[b + e] = (x, d + c)
    return TreeElement.make(f.src, F1, bar, sigma)


def tree_contract(G: TreeElement, fam: dict, f: SetMap) -> TreeElement:
    """G over X contracted with a family ``fam[y]`` over f^-1(y), for f: X -> Y."""
    if G.degree != f.src:
        raise DegreeError("tree_contract degree mismatch")
    gbar, tau = G.bar, G.sigma_map
    empty = LabelledTree.empty()

    def fbar(x):
        y = f(x)
        return empty if y is None else fam[y].bar[x]

    F1 = graft(G.F1, {b: fbar(tau[b][0]) for b in G.F1.boundary})
    bar = {}
    for y in f.dst:
        Fy = fam[y]
        sy = Fy.sigma_map
        bar[y] = graft(Fy.F1, {e: gbar[sy[e][0]] for e in Fy.F1.boundary})
    sigma = {}
    inverse = {}
    for y in f.dst:
        for e, (x, d) in fam[y].sigma:
            inverse[(x, d)] = (y, e)
    for b in G.F1.boundary:
        x, c = tau[b]
        if f(x) is None:
            continue
        for d in fbar(x).boundary:
            y, e = inverse[(x, d)]
            sigma[b + d] = (y, e + c)
    return TreeElement.make(f.dst, F1, bar, sigma)


# ---------------------------------------------------------------------------
# evaluation into an arbitrary instance

def _eval_tree(A: GenRing, T: LabelledTree, assignment: dict, node=ROOT) -> GenElement:
    """Element of A over the leaves below ``node`` (labelled by their paths)."""
    kids = T.children(node)
    if not kids:
        return A.unit_at(FinSet([node]), node)
    gen = T.gen_map[node]
    a = assignment[gen]
    W = a.degree
    leaves = [b for b in T.boundary if b[:len(node)] == node]
    L = FinSet(leaves)
    q = SetMap(L, W, {b: b[len(node)] for b in leaves})
    comps = {}
    for w in W:
        child = node + (w,)
        if child in T.nodes:
            comps[w] = _eval_tree(A, T, assignment, child)
        else:
            comps[w] = A.zero(FinSet())
    for w in q.mapping.values():
        if w not in W:
            raise DegreeError(f"label {w!r} outside generator degree {W}")
    return A.mult(a, FiberFamily.make(q, comps))


def evaluate(F: TreeElement, assignment: dict, A: GenRing) -> GenElement:
    """Image of F under the homomorphism sending each generator to ``assignment[gen]``."""
    X = F.degree
    if F.F1.is_empty:
        return A.zero(X)
    top = _eval_tree(A, F.F1, assignment)
    sig = F.sigma_map
    s = SetMap(top.degree, X, {b: x for b, (x, _) in sig.items()})
    comps = {}
    bar = F.bar
    for x in X:
        fib = s.fiber(x)
        if bar[x].is_empty:
            comps[x] = A.zero(fib)
            continue
        e = _eval_tree(A, bar[x], assignment)
        back = {c: b for b, (x2, c) in sig.items() if x2 == x}
        comps[x] = A.fmap(e, PartialBijection(e.degree, fib, [(c, back[c]) for c in e.degree]))
    return A.contract(top, FiberFamily.make(s, comps))


# ---------------------------------------------------------------------------
# co-multiplication and co-contraction

def comult_element(f: SetMap, top="a", fibre=lambda w: ("b", w)) -> TreeElement:
    """delta^f: evaluates to a ◁ (b_w) for a over W and b_w over f^-1(w)."""
    Z, W = f.src, f.dst
    image = sorted(set(f.mapping.values()), key=label_key)
    nodes = [ROOT] + [(w,) for w in image] + [(z_w, z) for z, z_w in f.pairs]
    gens = {}
    if image:
        gens[ROOT] = top
        for w in image:
            gens[(w,)] = fibre(w)
    else:
        nodes = []
    F1 = LabelledTree.make(nodes, gens)
    bar = {z: (LabelledTree.unit() if f(z) is not None else LabelledTree.empty()) for z in Z}
    return TreeElement.make(Z, F1, bar, {(w, z): (z, ROOT) for z, w in f.pairs})


def cocontract_element(f: SetMap, top="a", fibre=lambda w: ("b", w)) -> TreeElement:
    """epsilon^f: evaluates to a ∥ (b_w) for a over Z and b_w over f^-1(w)."""
    Z, W = f.src, f.dst
    D = sorted(f.mapping, key=label_key)
    F1 = LabelledTree.corolla(top, D)
    bar = {w: LabelledTree.corolla(fibre(w), f.fiber(w)) for w in W}
    return TreeElement.make(W, F1, bar, {(z,): (f(z), (z,)) for z in D})


def comult_generators(f: SetMap, top="a", fibre=lambda w: ("b", w)) -> dict:
    return {top: f.dst, **{fibre(w): f.fiber(w) for w in f.dst}}


def cocontract_generators(f: SetMap, top="a", fibre=lambda w: ("b", w)) -> dict:
    return {top: f.src, **{fibre(w): f.fiber(w) for w in f.dst}}


# ---------------------------------------------------------------------------
# the instance

class DeltaGenRing(GenRing):
    """Free commutative instance on the given generators (name -> label set)."""

    def __init__(self, generators: dict, name: str | None = None):
        self.generators = {g: FinSet(W) for g, W in generators.items()}
        self.name = name or "Delta"

    @classmethod
    def from_name(cls, name: str) -> "DeltaGenRing":
        # "Delta" or "Delta:n" -> one generator 'd' over [n] (default [2])
        n = int(name.split(":", 1)[1]) if ":" in name else 2
        return cls({"d": FinSet.range(n)}, name=name)

    def zero(self, X):
        return self.element(X, zero_element(X))

    def unit_at(self, X, x):
        return self.element(X, point_element(X, x))

    def gen(self, g) -> GenElement:
        return self.element(self.generators[g], generator(g, self.generators[g]))

    def _mult(self, a, fam):
        return self.element(fam.fmap.src, tree_mult(a.payload, {z: c.payload for z, c in fam.comps}, fam.fmap))

    def _contract(self, a, fam):
        return self.element(fam.fmap.dst, tree_contract(a.payload, {z: c.payload for z, c in fam.comps}, fam.fmap))

    def random_element(self, X, rng, max_degree: int = 3):
        return self.element(X, random_tree_element(X, self.generators, rng, max_degree))

    def payload_to_json(self, a):
        return a.payload.to_json()

    def payload_from_json(self, degree, data):
        t = TreeElement.from_json({**data, "degree": degree.to_json()})
        return t


# ---------------------------------------------------------------------------
# random elements

def _random_tree(rng: random.Random, generators: dict, leaves: int, max_height: int):
    """A random tree with exactly ``leaves`` leaves and height <= max_height, or None."""
    if leaves == 0:
        return LabelledTree.empty()
    gens_list = sorted(generators, key=label_key)
    for _ in range(30):
        nodes, gm = {ROOT}, {}
        current = [ROOT]
        ok = True
        while len(current) < leaves or (rng.random() < 0.3 and current):
            expandable = [p for p in current if len(p) < max_height]
            if not expandable:
                ok = len(current) == leaves
                break
            p = rng.choice(expandable)
            g = rng.choice(gens_list)
            W = generators[g].labels
            if not W:
                ok = False
                break
            room = leaves - len(current) + 1
            m = rng.randint(1, max(1, min(len(W), room)))
            if m > room:
                ok = False
                break
            kids = rng.sample(list(W), m)
            gm[p] = g
            current.remove(p)
            for w in kids:
                nodes.add(p + (w,))
                current.append(p + (w,))
        if ok and len(current) == leaves:
            return LabelledTree.make(nodes, gm)
    return None


def random_tree_element(X: FinSet, generators: dict, rng: random.Random, max_degree: int = 3) -> TreeElement:
    """Random element of degree at most ``max_degree`` (may be zero)."""
    if rng.random() < 0.08 or not len(X):
        return zero_element(X)
    for _ in range(50):
        h1 = rng.randint(0, max_degree)
        total = 0
        split = {}
        for x in X:
            k = rng.randint(0, 2)
            split[x] = k
            total += k
        if total == 0:
            continue
        F1 = _random_tree(rng, generators, total, h1)
        if F1 is None:
            continue
        bar = {x: _random_tree(rng, generators, split[x], max_degree - F1.height) for x in X}
        if any(t is None for t in bar.values()):
            continue
        right = [(x, c) for x in X for c in bar[x].boundary]
        rng.shuffle(right)
        sigma = dict(zip(F1.boundary, right))
        return TreeElement.make(X, F1, bar, sigma)
    return point_element(X, rng.choice(X.labels))


# ---------------------------------------------------------------------------
# ladders: the one-letter case

def ladder_normal_form(F: TreeElement):
    """For a single generator over a one-point set, return (x, i, j) or None for zero.

    Trees over a one-point label set are chains, so the element is the point x
    with heights i (top) and j (bottom).
    """
    if F.F1.is_empty:
        return None
    (b, (x, c)), = F.sigma
    return (x, len(b), len(c))


def ladder_element(X: FinSet, x, i: int, j: int, gen="d", label=1) -> TreeElement:
    def chain(h):
        nodes = [tuple([label] * k) for k in range(h + 1)]
        return LabelledTree.make(nodes, {tuple([label] * k): gen for k in range(h)})

    bar = {y: (chain(j) if y == x else LabelledTree.empty()) for y in X}
    return TreeElement.make(X, chain(i), bar, {tuple([label] * i): (x, tuple([label] * j))})


# ---------------------------------------------------------------------------
# evaluation is a homomorphism

def homomorphism_check(A: GenRing, samples: int = 200, seed: int = 0, max_degree: int = 3,
                       max_size: int = 2, generators: dict | None = None) -> dict:
    """Compare eval(F op G) with eval(F) op eval(G) for random trees, op in {mult, contract}.

    Each sample draws fresh generator images in ``A``, sets of size at most
    ``max_size`` and a (possibly partial) map between them.  Degree
    subadditivity ``deg(F op G) <= deg F + max deg G`` is checked on the
    same samples.
    """
    from .genring import _Sampler

    generators = generators or {"d": FinSet.range(2)}
    D = DeltaGenRing(generators)
    rng = random.Random(f"{seed}:delta-hom:{A.name}")
    s = _Sampler(A, rng, max_size)
    failures = {"mult": None, "contract": None, "degree": None}
    for i in range(samples):
        assignment = {g: A.random_element(W, rng) for g, W in generators.items()}
        ev = lambda e: evaluate(e.payload, assignment, A)
        X, Y = s.set(tag="x"), s.set(tag="y")
        f = s.map(X, Y)
        for op in ("mult", "contract"):
            if op == "mult":
                top = D.random_element(Y, rng, max_degree)
            else:
                top = D.random_element(X, rng, max_degree)
            comps = {y: D.random_element(f.fiber(y), rng, max_degree) for y in Y}
            fam = FiberFamily.make(f, comps)
            got = D.mult(top, fam) if op == "mult" else D.contract(top, fam)
            efam = FiberFamily.make(f, {y: ev(c) for y, c in comps.items()})
            want = A.mult(ev(top), efam) if op == "mult" else A.contract(ev(top), efam)
            if failures[op] is None and not A.eq(ev(got), want):
                failures[op] = {"sample": i, "top": top.payload.to_json(),
                                "family": {str(y): c.payload.to_json() for y, c in comps.items()},
                                "map": f.to_json()}
            bound = degree(top.payload) + max((degree(c.payload) for c in comps.values()), default=0)
            if failures["degree"] is None and degree(got.payload) > bound:
                failures["degree"] = {"sample": i, "op": op, "degree": degree(got.payload), "bound": bound}
    return {"instance": A.name, "samples": samples, "max_degree": max_degree,
            "passed": all(v is None for v in failures.values()), "failures": failures}
