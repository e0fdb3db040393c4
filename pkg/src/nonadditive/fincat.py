"""Finite sets and partial bijections.

A :class:`FinSet` is an ordered tuple of distinct hashable labels.  Labels are
kept in a canonical order so two sets with the same members compare equal.
A :class:`PartialBijection` is an injective partial map between two finite
sets, equivalently a 0/1 matrix with at most one 1 in each row and column.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Any, Hashable, Iterable, Iterator


class DegreeError(ValueError):
    """Raised when the domain or codomain of two arrows do not match."""


def label_key(label: Any):
    """Total order on labels that tolerates mixed ints, strings and tuples."""
    if isinstance(label, bool):
        return (0, int(label))
    if isinstance(label, int):
        return (0, label)
    if isinstance(label, str):
        return (1, label)
    if isinstance(label, tuple):
        return (2, tuple(label_key(x) for x in label))
    if isinstance(label, frozenset):
        return (3, tuple(sorted(label_key(x) for x in label)))
    return (4, repr(label))


@dataclass(frozen=True)
class FinSet:
    labels: tuple

    def __init__(self, labels: Iterable[Hashable] = ()):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels!r}")
        object.__setattr__(self, "labels", tuple(sorted(labels, key=label_key)))

    @classmethod
    def range(cls, n: int) -> "FinSet":
        """The canonical set [n] = {1, ..., n}."""
        return cls(range(1, n + 1))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator:
        return iter(self.labels)

    def __contains__(self, x) -> bool:
        return x in self._members

    @property
    def _members(self) -> frozenset:
        m = self.__dict__.get("_m")
        if m is None:
            m = frozenset(self.labels)
            object.__setattr__(self, "_m", m)
        return m

    def __repr__(self) -> str:
        return f"FinSet({list(self.labels)!r})"

    def to_json(self) -> list:
        return [_label_to_json(x) for x in self.labels]

    @classmethod
    def from_json(cls, data) -> "FinSet":
        if not isinstance(data, list):
            raise ValueError("FinSet must be a JSON array")
        return cls(_label_from_json(x) for x in data)

    def subsets(self) -> Iterator["FinSet"]:
        for k in range(len(self) + 1):
            for c in combinations(self.labels, k):
                yield FinSet(c)


def _label_to_json(x):
    if isinstance(x, tuple):
        return [_label_to_json(y) for y in x]
    return x


def _label_from_json(x):
    if isinstance(x, list):
        return tuple(_label_from_json(y) for y in x)
    if isinstance(x, (int, str)):
        return x
    raise ValueError(f"bad label {x!r}")


@dataclass(frozen=True)
class PartialBijection:
    dom: FinSet
    cod: FinSet
    pairs: frozenset

    def __init__(self, dom: FinSet, cod: FinSet, pairs: Iterable[tuple] = ()):
        pairs = frozenset((x, y) for x, y in pairs)
        xs = [x for x, _ in pairs]
        ys = [y for _, y in pairs]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("pairs are not injective")
        for x, y in pairs:
            if x not in dom or y not in cod:
                raise ValueError(f"pair {(x, y)!r} outside dom/cod")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "pairs", pairs)

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    def __call__(self, x):
        """Image of ``x``, or ``None`` when ``x`` is outside the domain of definition."""
        return self.mapping.get(x)

    @property
    def domain(self) -> FinSet:
        """D(f): the points where the map is defined."""
        return FinSet(x for x, _ in self.pairs)

    @property
    def image(self) -> FinSet:
        """I(f): the image of the map."""
        return FinSet(y for _, y in self.pairs)

    @classmethod
    def identity(cls, X: FinSet) -> "PartialBijection":
        return cls(X, X, ((x, x) for x in X))

    @classmethod
    def empty(cls, X: FinSet, Y: FinSet) -> "PartialBijection":
        return cls(X, Y, ())

    @classmethod
    def inclusion(cls, X: FinSet, x) -> "PartialBijection":
        """j_x : [1] -> X picking the point ``x``."""
        return cls(FinSet([1]), X, [(1, x)])

    def matrix(self) -> list[list[int]]:
        m = self.mapping
        return [[1 if m.get(x) == y else 0 for x in self.dom] for y in self.cod]

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}->{y!r}" for x, y in sorted(self.pairs, key=label_key))
        return f"PB({list(self.dom.labels)} -> {list(self.cod.labels)}: {body})"

    def to_json(self) -> dict:
        return {
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "pairs": [[_label_to_json(x), _label_to_json(y)]
                      for x, y in sorted(self.pairs, key=label_key)],
        }

    @classmethod
    def from_json(cls, data) -> "PartialBijection":
        try:
            dom = FinSet.from_json(data["dom"])
            cod = FinSet.from_json(data["cod"])
            pairs = [(_label_from_json(x), _label_from_json(y)) for x, y in data["pairs"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed partial bijection: {exc}") from exc
        return cls(dom, cod, pairs)


def compose(g: PartialBijection, f: PartialBijection) -> PartialBijection:
    """g o f, defined on f^-1(I(f) & D(g))."""
    if f.cod != g.dom:
        raise DegreeError(f"cannot compose: {f.cod} != {g.dom}")
    gm = g.mapping
    return PartialBijection(f.dom, g.cod, ((x, gm[y]) for x, y in f.pairs if y in gm))


def transpose(f: PartialBijection) -> PartialBijection:
    return PartialBijection(f.cod, f.dom, ((y, x) for x, y in f.pairs))


def disjoint_union(*sets: FinSet) -> FinSet:
    """X_1 + ... + X_n with labels tagged (i, x), i counted from 0."""
    return FinSet((i, x) for i, X in enumerate(sets) for x in X)


def product(X: FinSet, Y: FinSet) -> FinSet:
    return FinSet((x, y) for x in X for y in Y)


def oplus(*fs: PartialBijection) -> PartialBijection:
    """Direct sum: acts on tagged labels (i, x) -> (i, f_i(x))."""
    dom = disjoint_union(*(f.dom for f in fs))
    cod = disjoint_union(*(f.cod for f in fs))
    return PartialBijection(dom, cod, (((i, x), (i, y)) for i, f in enumerate(fs) for x, y in f.pairs))


def otimes(f0: PartialBijection, f1: PartialBijection) -> PartialBijection:
    dom = product(f0.dom, f1.dom)
    cod = product(f0.cod, f1.cod)
    return PartialBijection(dom, cod, (((x0, x1), (y0, y1))
                                       for x0, y0 in f0.pairs for x1, y1 in f1.pairs))


def relabel(X: FinSet, fn) -> PartialBijection:
    """The bijection X -> fn(X) sending x to fn(x)."""
    return PartialBijection(X, FinSet(fn(x) for x in X), ((x, fn(x)) for x in X))


def sum_to_product(X: FinSet, Y: FinSet) -> PartialBijection:
    """Canonical iso  (+)_{x in X} Y  ->  X (x) Y  for ``disjoint_union(Y, Y, ...)``.

    The i-th summand is identified with the i-th label of ``X``.
    """
    xs = X.labels
    src = disjoint_union(*([Y] * len(xs)))
    return PartialBijection(src, product(X, Y), (((i, y), (xs[i], y)) for i in range(len(xs)) for y in Y))


def swap(X: FinSet, Y: FinSet) -> PartialBijection:
    """Canonical iso X (x) Y -> Y (x) X."""
    return PartialBijection(product(X, Y), product(Y, X), (((x, y), (y, x)) for x in X for y in Y))


def all_partial_bijections(X: FinSet, Y: FinSet) -> Iterator[PartialBijection]:
    """Enumerate every arrow X -> Y (exhaustive, for small sets)."""
    xs, ys = X.labels, Y.labels
    for k in range(min(len(xs), len(ys)) + 1):
        for dom in combinations(xs, k):
            for img in permutations(ys, k):
                yield PartialBijection(X, Y, zip(dom, img))
