"""Differentials of G(N) and G(Z) in degree [1], and the N-module maps.

An element of the module Omega-bar is a formal integer combination of
generators ``{a;a'}``.  In N-mode the group is free abelian on the symbols
``d(p)``, ``p`` prime, where ``d(n) = sum_p v_p(n) (n/p) d(p)`` and

    {a;a'} = d(a+a') - d(a) - d(a').

Two independent routes compute the coordinates on the ``d(p)`` basis:

* the functional route evaluates ``phi_p`` on every generator;
* the rewriting route replaces each generator by the three ``d`` terms
  above and expands ``d(n)`` through the Leibnitz rule on a trial
  division factorisation.

In Z-mode, generators with mixed signs are first rewritten (cocycle,
symmetry and linearity) into N-mode generators plus multiples of
``{1;-1}``.  The latter carry a parity flag only, because ``2{1;-1} = 0``
is imposed and nothing more is known about it.

The second half of the module models the groups of formal sums ``[a|b]``
(column ``a``, row ``b``) with the projection ``pi`` to integer matrices
and the boundary ``partial`` from the two generator species of Omega.
"""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable

import sympy

from ._parallel import ordered_map
from .fincat import FinSet
from .rigring import INT, RigMatrix

MODES = ("N", "Z")


class InconsistentNormalForm(AssertionError):
    """The functional and the rewriting normal forms disagree."""


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=1 << 16)
def _primefactors(n: int) -> tuple[int, ...]:
    return tuple(sympy.primefactors(n))


@lru_cache(maxsize=1 << 18)
def _f(n: int, p: int) -> int:
    # v_p(n) * n / p, with the value 0 at n = 0 (d(0) = 0); odd in n
    if n == 0:
        return 0
    v = valuation(n, p)
    return v * n // p if v else 0


# ---------------------------------------------------------------------------
# Formal sums of {a;a'}
# ---------------------------------------------------------------------------

def _gen_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


class DiffSum:
    """Integer combination of generators ``{a;a'}`` stored with ``a <= a'``.

    Generators with a zero entry vanish (normalisation) and are dropped on
    construction.
    """

    __slots__ = ("mode", "terms")

    def __init__(self, terms=None, mode: str = "N"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        self.mode = mode
        acc: dict[tuple[int, int], int] = defaultdict(int)
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for (a, b), c in items:
            a, b = int(a), int(b)
            if mode == "N" and (a < 0 or b < 0):
                raise ValueError(f"N-mode generator {{{a};{b}}} has a negative entry")
            if a == 0 or b == 0 or c == 0:
                continue
            acc[_gen_key(a, b)] += int(c)
        self.terms = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def gen(cls, a: int, b: int, mode: str = "N") -> "DiffSum":
        return cls({(a, b): 1}, mode)

    @classmethod
    def zero(cls, mode: str = "N") -> "DiffSum":
        return cls({}, mode)

    def _check(self, other: "DiffSum") -> None:
        if self.mode != other.mode:
            raise ValueError("cannot combine N-mode and Z-mode sums")

    def __add__(self, other: "DiffSum") -> "DiffSum":
        self._check(other)
        t = defaultdict(int, self.terms)
        for k, c in other.terms.items():
            t[k] += c
        return DiffSum(t, self.mode)

    def __neg__(self) -> "DiffSum":
        return DiffSum({k: -c for k, c in self.terms.items()}, self.mode)

    def __sub__(self, other: "DiffSum") -> "DiffSum":
        return self + (-other)

    def __rmul__(self, k: int) -> "DiffSum":
        return DiffSum({g: k * c for g, c in self.terms.items()}, self.mode)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffSum) and self.mode == other.mode and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.mode, tuple(self.terms.items())))

    def is_formal_zero(self) -> bool:
        return not self.terms

    def primes(self) -> list[int]:
        """Primes that can carry a nonzero coordinate."""
        ps: set[int] = set()
        for a, b in self.terms:
            for n in (a, b, a + b):
                if n not in (0, 1, -1):
                    ps.update(_primefactors(abs(n)))
        return sorted(ps)

    def to_json(self) -> dict:
        return {"mode": self.mode, "sum": [[c, [a, b]] for (a, b), c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "DiffSum":
        mode = data.get("mode", "N")
        terms = defaultdict(int)
        for coef, (a, b) in data["sum"]:
            terms[_gen_key(int(a), int(b))] += int(coef)
        return cls(terms, mode)

    def __repr__(self) -> str:
        if not self.terms:
            return f"DiffSum[{self.mode}](0)"
        body = " + ".join(f"{c}*{{{a};{b}}}" for (a, b), c in self.terms.items())
        return f"DiffSum[{self.mode}]({body})"


def gen(a: int, b: int, mode: str = "N") -> DiffSum:
    return DiffSum.gen(a, b, mode)


@lru_cache(maxsize=1024)
def _check_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")


def phi_p(t: DiffSum, p: int) -> int:
    """The functional ``{a;a'} -> f(a+a') - f(a) - f(a')``, ``f(n) = v_p(n) n/p``.

    The signed form of ``f`` is used in Z-mode, so that ``{a;-a}`` is killed
    and ``d(-n) = -d(n)``.
    """
    _check_prime(p)
    return sum(c * (_f(a + b, p) - _f(a, p) - _f(b, p)) for (a, b), c in t.terms.items())


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def _normal_form_phi(t: DiffSum) -> dict[int, int]:
    # phi_p of a single generator vanishes unless p divides a, a' or a+a'
    acc: dict[int, int] = defaultdict(int)
    for (a, b), c in t.terms.items():
        for p in DiffSum({(a, b): 1}, t.mode).primes():
            acc[p] += c * (_f(a + b, p) - _f(a, p) - _f(b, p))
    return {p: v for p, v in sorted(acc.items()) if v}


def _smallest_factor(n: int) -> int:
    k = 2
    while k * k <= n:
        if n % k == 0:
            return k
        k += 1
    return n


def _d_expand(n: int, cache: dict) -> dict[int, int]:
    """Coordinates of ``d(n)``, n >= 0, from d(0)=d(1)=0, d(p)=d(p) and Leibnitz."""
    if n in cache:
        return cache[n]
    if n <= 1:
        res: dict[int, int] = {}
    else:
        q = _smallest_factor(n)
        if q == n:
            res = {n: 1}
        else:
            m = n // q
            # d(q m) = m d(q) + q d(m)
            res = defaultdict(int)
            for p, c in _d_expand(q, cache).items():
                res[p] += m * c
            for p, c in _d_expand(m, cache).items():
                res[p] += q * c
            res = {p: c for p, c in res.items() if c}
    cache[n] = res
    return res


_D_CACHE: dict[int, dict[int, int]] = {}


def _normal_form_rewrite(t: DiffSum) -> dict[int, int]:
    if t.mode != "N":
        raise ValueError("the rewriting route works on N-mode sums")
    cache = _D_CACHE
    acc: dict[int, int] = defaultdict(int)
    for (a, b), c in t.terms.items():
        for n, sign in ((a + b, 1), (a, -1), (b, -1)):
            for p, k in _d_expand(n, cache).items():
                acc[p] += sign * c * k
    return {p: v for p, v in sorted(acc.items()) if v}


def to_natural(t: DiffSum) -> tuple[DiffSum, int]:
    """Rewrite a Z-mode sum as (N-mode sum, coefficient of ``{1;-1}``).

    Uses ``{-a;-b} = -{a;b}``, ``{a;-a} = a{1;-1}`` and the cocycle
    relation ``{a;-b} + {a-b;b} = b{1;-1}`` for ``a > b > 0``.
    """
    nat: dict[tuple[int, int], int] = defaultdict(int)
    flag = 0
    for (a, b), c in t.terms.items():
        if a > 0 and b > 0:
            nat[(a, b)] += c
        elif a < 0 and b < 0:
            nat[(-a, -b)] -= c
        else:
            pos, neg = (b, -a) if a < 0 else (a, -b)
            if pos == neg:
                flag += c * pos
            elif pos > neg:
                flag += c * neg
                nat[(pos - neg, neg)] -= c
            else:
                # {pos;-neg} = -{neg;-pos} = {neg-pos;pos} - pos{1;-1}
                flag -= c * pos
                nat[(neg - pos, pos)] += c
    return DiffSum(nat, "N"), flag


@dataclass(frozen=True)
class NormalForm:
    basis: dict
    torsion: tuple = ()  # ("{1;-1}",) when the flag parity is odd

    def is_zero(self) -> bool:
        return not self.basis and not self.torsion

    def to_json(self) -> dict:
        return {"basis": {str(p): c for p, c in sorted(self.basis.items())}, "torsion": list(self.torsion)}


def normal_form(t: DiffSum, check: bool = True) -> NormalForm:
    """Coordinates of ``t`` on the ``d(p)`` basis.

    With ``check`` the functional and the rewriting routes are both run and
    must agree; otherwise only the functional route is used.
    """
    if t.mode == "N":
        nat, flag = t, 0
    else:
        nat, flag = to_natural(t)
    basis = _normal_form_phi(nat)
    if check:
        other = _normal_form_rewrite(nat)
        if basis != other:
            raise InconsistentNormalForm(f"{t!r}: phi route {basis} vs rewrite route {other}")
        if t.mode == "Z":
            direct = _normal_form_phi(t)
            if direct != basis:
                raise InconsistentNormalForm(f"{t!r}: signed phi {direct} vs rewritten {basis}")
    torsion = ("{1;-1}",) if flag % 2 else ()
    return NormalForm(dict(sorted(basis.items())), torsion)


def d_plus(n: int, mode: str | None = None) -> DiffSum:
    """The even derivation: 0 for n in {0, 1}, else ``2 * sum_{k<n} {k;1}``.

    Negative ``n`` (Z-mode) gives ``2 * ({1-|n|;-1} + ... + {-1;-1})``.
    """
    mode = mode or ("N" if n >= 0 else "Z")
    if n >= 0:
        return DiffSum({(k, 1): 2 for k in range(1, n)}, mode)
    return DiffSum({(-k, -1): 2 for k in range(1, -n)}, mode)


def d(n: int, mode: str | None = None) -> DiffSum:
    """Half of :func:`d_plus`: ``{n-1;1} + ... + {1;1}``."""
    mode = mode or ("N" if n >= 0 else "Z")
    if n >= 0:
        return DiffSum({(k, 1): 1 for k in range(1, n)}, mode)
    return DiffSum({(-k, -1): 1 for k in range(1, -n)}, mode)


# ---------------------------------------------------------------------------
# Relation instances
# ---------------------------------------------------------------------------

def _g(a, b, mode):
    return DiffSum.gen(a, b, mode)


def _inst_cocycle(a, b, c, mode="N"):
    return _g(a + b, c, mode) + _g(a, b, mode) - _g(a, b + c, mode) - _g(b, c, mode)


def _inst_symmetric(a, b, mode="N"):
    return _g(a, b, mode) - DiffSum({(b, a): 1}, mode)


def _inst_almost_linear(x, y, a, b, sign, mode="N"):
    lhs = _g(x * a, x * b, mode) + _g(y * a, y * b, mode)
    lhs = lhs + sign * _g(x * a, y * a, mode) + sign * _g(x * b, y * b, mode)
    rhs = _g((x + y) * a, (x + y) * b, mode) + sign * _g(x * (a + b), y * (a + b), mode)
    return lhs - rhs


def _inst_left_linear(k, a, b, mode="N"):
    return _g(k * a, k * b, mode) - k * _g(a, b, mode)


def _inst_right_linear(x, y, a, b, mode="N"):
    return _g(x * (a + b), y * (a + b), mode) - _g(x * a, y * a, mode) - _g(x * b, y * b, mode)


def _inst_additivity(n1, n2, mode="N"):
    return d_plus(n1 + n2, mode) - d_plus(n1, mode) - d_plus(n2, mode) - 2 * _g(n1, n2, mode)


def _inst_leibnitz(n, m, mode="N"):
    return d_plus(n * m, mode) - m * d_plus(n, mode) - n * d_plus(m, mode)


def minus_linearity_chain(x: int, y: int, a: int, b: int, mode: str = "N") -> list[DiffSum]:
    """The five stages of the rewrite deriving minus-almost-linearity.

    Consecutive stages differ by one application of the cocycle relation
    (or a cancellation), and the last stage is the minus-almost-linear
    right-hand side.
    """
    g = lambda u, v: _g(u, v, mode)
    xa, ya, xb, yb = x * a, y * a, x * b, y * b
    s = a + b
    return [
        g((x + y) * a, (x + y) * b) - g(x * s, y * s),
        -g(xa, ya) + g(xa, xb + y * s) + g((x + y) * b, ya) - g(x * s, y * s),
        -g(xa, ya) - g(y * s, xb) + g(x * s, y * s) + g(xa, xb) + g((x + y) * b, ya) - g(x * s, y * s),
        -g(xa, ya) - g(y * s, xb) + g(xa, xb) - g(xb, yb) + g(xb, y * s) + g(ya, yb),
        -g(xa, ya) + g(xa, xb) - g(xb, yb) + g(ya, yb),
    ]


def _inst_chain(x, y, a, b, mode="N"):
    stages = minus_linearity_chain(x, y, a, b, mode)
    # each step must be a relation consequence; summing the squared steps
    # would hide sign errors, so return the list and let the caller test each
    return [stages[i] - stages[i + 1] for i in range(len(stages) - 1)]


def _inst_cancellation(a, mode="Z"):
    return 2 * _g(a, -a, "Z")


RELATIONS = {
    "cocycle": (3, _inst_cocycle),
    "normalized": (1, lambda a, mode="N": _g(a, 0, mode)),
    "symmetric": (2, _inst_symmetric),
    "almost-linear+": (4, lambda x, y, a, b, mode="N": _inst_almost_linear(x, y, a, b, 1, mode)),
    "almost-linear-": (4, lambda x, y, a, b, mode="N": _inst_almost_linear(x, y, a, b, -1, mode)),
    "left-linear": (3, _inst_left_linear),
    "right-linear": (4, _inst_right_linear),
    "additivity": (2, _inst_additivity),
    "leibnitz": (2, _inst_leibnitz),
    "minus-chain": (4, _inst_chain),
    "cancellation": (1, _inst_cancellation),
}


def _draw(rng: random.Random, k: int, mode: str, hi: int) -> tuple[int, ...]:
    if mode == "N":
        return tuple(rng.randint(1, hi) for _ in range(k))
    return tuple(rng.choice([-1, 1]) * rng.randint(1, hi) for _ in range(k))


def relation_check(relation: str, samples: int | Iterable = 100, mode: str = "N",
                   seed: int = 0, hi: int = 40, threads: int | None = None) -> dict:
    """Check that instances of a named relation vanish under :func:`normal_form`.

    ``samples`` is either a count of random argument tuples or an explicit
    iterable of tuples.  Returns ``{relation, mode, checked, passed,
    counterexample}``.
    """
    if relation not in RELATIONS:
        raise KeyError(f"unknown relation {relation!r}; choose from {sorted(RELATIONS)}")
    if relation == "cancellation":
        mode = "Z"
    arity, build = RELATIONS[relation]
    if isinstance(samples, int):
        rng = random.Random(seed)
        args = [_draw(rng, arity, mode, hi) for _ in range(samples)]
        if relation in ("additivity", "leibnitz"):
            args = [tuple(abs(v) for v in t) for t in args]
    else:
        args = [tuple(t) for t in samples]

    def one(t):
        inst = build(*t, mode=mode)
        parts = inst if isinstance(inst, list) else [inst]
        for part in parts:
            nf = normal_form(part)
            if not nf.is_zero():
                return {"args": list(t), "instance": part.to_json(), "normal_form": nf.to_json()}
        return None

    bad = [r for r in ordered_map(one, args, threads) if r is not None]
    return {"relation": relation, "mode": mode, "checked": len(args), "passed": not bad,
            "counterexample": bad[0] if bad else None}


# ---------------------------------------------------------------------------
# Formal sums [a|b]
# ---------------------------------------------------------------------------

def _first_sign(v: tuple[int, ...]) -> int:
    for x in v:
        if x:
            return 1 if x > 0 else -1
    return 0


def _content(v: tuple[int, ...]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


class NModuleSum:
    """Integer combination of ``[a|b]`` with ``a`` in Z^Y and ``b`` in Z^X.

    ``kind="tilde"`` imposes only ``[a|0] = [0|b] = 0`` and
    ``[-a|b] = [a|-b] = -[a|b]``; ``kind="N"`` imposes full scaling
    ``k[a|b] = [ka|b] = [a|kb]``, realised by dividing out the content of
    both vectors.
    """

    __slots__ = ("Y", "X", "kind", "terms")

    def __init__(self, Y: int, X: int, terms=None, kind: str = "tilde"):
        if kind not in ("tilde", "N"):
            raise ValueError("kind must be 'tilde' or 'N'")
        self.Y, self.X, self.kind = Y, X, kind
        acc: dict = defaultdict(int)
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for (a, b), c in items:
            a, b = tuple(int(v) for v in a), tuple(int(v) for v in b)
            if len(a) != Y or len(b) != X:
                raise ValueError(f"[{a}|{b}] does not have degree ({Y},{X})")
            sa, sb = _first_sign(a), _first_sign(b)
            if not sa or not sb or not c:
                continue
            c *= sa * sb
            a = tuple(sa * v for v in a)
            b = tuple(sb * v for v in b)
            if kind == "N":
                ga, gb = _content(a), _content(b)
                c *= ga * gb
                a = tuple(v // ga for v in a)
                b = tuple(v // gb for v in b)
            acc[(a, b)] += c
        self.terms = {k: v for k, v in sorted(acc.items()) if v}

    @classmethod
    def gen(cls, a, b, kind: str = "tilde") -> "NModuleSum":
        return cls(len(a), len(b), {(tuple(a), tuple(b)): 1}, kind)

    def __add__(self, other: "NModuleSum") -> "NModuleSum":
        if (self.Y, self.X, self.kind) != (other.Y, other.X, other.kind):
            raise ValueError("degree or kind mismatch")
        t = defaultdict(int, self.terms)
        for k, c in other.terms.items():
            t[k] += c
        return NModuleSum(self.Y, self.X, t, self.kind)

    def __neg__(self) -> "NModuleSum":
        return NModuleSum(self.Y, self.X, {k: -c for k, c in self.terms.items()}, self.kind)

    def __sub__(self, other: "NModuleSum") -> "NModuleSum":
        return self + (-other)

    def __rmul__(self, k: int) -> "NModuleSum":
        return NModuleSum(self.Y, self.X, {g: k * c for g, c in self.terms.items()}, self.kind)

    def __eq__(self, other) -> bool:
        return (isinstance(other, NModuleSum) and (self.Y, self.X, self.kind) == (other.Y, other.X, other.kind)
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.Y, self.X, self.kind, tuple(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def to_kind(self, kind: str) -> "NModuleSum":
        return NModuleSum(self.Y, self.X, self.terms, kind)

    def to_json(self) -> dict:
        return {"Y": self.Y, "X": self.X, "kind": self.kind,
                "sum": [[c, [list(a), list(b)]] for (a, b), c in self.terms.items()]}

    def __repr__(self) -> str:
        if not self.terms:
            return f"NModuleSum[{self.kind}]({self.Y},{self.X})(0)"
        body = " + ".join(f"{c}*[{list(a)}|{list(b)}]" for (a, b), c in self.terms.items())
        return f"NModuleSum[{self.kind}]({body})"


def nmodule_pi(t: NModuleSum) -> RigMatrix:
    """``sum m_i [a_i|b_i] -> sum m_i a_i (x) b_i`` as a Y x X integer matrix."""
    dense = [[0] * t.X for _ in range(t.Y)]
    for (a, b), c in t.terms.items():
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    dense[i][j] += c * ai * bj
    return RigMatrix.from_rows(dense, INT, FinSet.range(t.Y), FinSet.range(t.X))


def _vadd(u, v):
    return tuple(x + y for x, y in zip(u, v))


def _vneg(u):
    return tuple(-x for x in u)


@dataclass(frozen=True)
class OmegaGen:
    """A generator of Omega: ``[a|b;b']`` (kind "row") or ``[a,a'|b]`` (kind "col")."""

    kind: str
    a: tuple
    b: tuple

    @classmethod
    def row(cls, a, b1, b2) -> "OmegaGen":
        return cls("row", tuple(a), (tuple(b1), tuple(b2)))

    @classmethod
    def col(cls, a1, a2, b) -> "OmegaGen":
        return cls("col", (tuple(a1), tuple(a2)), tuple(b))

    def degree(self) -> tuple[int, int]:
        if self.kind == "row":
            return len(self.a), len(self.b[0])
        return len(self.a[0]), len(self.b)


def nmodule_boundary(g: OmegaGen, kind: str = "tilde") -> NModuleSum:
    """``d[a1,a2|b] = [a1|b]+[a2|b]-[a1+a2|b]``, ``d[a|b1;b2] = [a|b1+b2]-[a|b1]-[a|b2]``."""
    Y, X = g.degree()
    if g.kind == "col":
        a1, a2 = g.a
        terms = [((a1, g.b), 1), ((a2, g.b), 1), ((_vadd(a1, a2), g.b), -1)]
    elif g.kind == "row":
        b1, b2 = g.b
        terms = [((g.a, _vadd(b1, b2)), 1), ((g.a, b1), -1), ((g.a, b2), -1)]
    else:
        raise ValueError(f"unknown generator kind {g.kind!r}")
    return NModuleSum(Y, X, terms, kind)


def boundary(combo: Iterable[tuple[int, OmegaGen]], Y: int, X: int, kind: str = "tilde") -> NModuleSum:
    out = NModuleSum(Y, X, {}, kind)
    for c, g in combo:
        out = out + c * nmodule_boundary(g, kind)
    return out


def _omega_relation_table():
    R, C = OmegaGen.row, OmegaGen.col
    z = lambda v: (0,) * len(v)
    return {
        "zero-row-a": ("a1 b1 b2", lambda a1, b1, b2: [(1, R(z(a1), b1, b2))]),
        "zero-row-b": ("a1 b1 b2", lambda a1, b1, b2: [(1, R(a1, z(b1), b2)), (1, R(a1, b1, z(b2)))]),
        "zero-col-b": ("a1 a2 b1", lambda a1, a2, b1: [(1, C(a1, a2, z(b1)))]),
        "zero-col-a": ("a1 a2 b1", lambda a1, a2, b1: [(1, C(z(a1), a2, b1)), (1, C(a1, z(a2), b1))]),
        "comm-row": ("a1 b1 b2", lambda a1, b1, b2: [(1, R(a1, b1, b2)), (-1, R(a1, b2, b1))]),
        "comm-col": ("a1 a2 b1", lambda a1, a2, b1: [(1, C(a1, a2, b1)), (-1, C(a2, a1, b1))]),
        "ass-row": ("a1 b1 b2 b3", lambda a1, b1, b2, b3: [
            (1, R(a1, _vadd(b1, b2), b3)), (1, R(a1, b1, b2)),
            (-1, R(a1, b1, _vadd(b2, b3))), (-1, R(a1, b2, b3))]),
        "ass-col": ("a1 a2 a3 b1", lambda a1, a2, a3, b1: [
            (1, C(_vadd(a1, a2), a3, b1)), (1, C(a1, a2, b1)),
            (-1, C(a1, _vadd(a2, a3), b1)), (-1, C(a2, a3, b1))]),
        "almost-linear": ("a1 a2 b1 b2", lambda a1, a2, b1, b2: [
            (1, C(a1, a2, _vadd(b1, b2))), (1, R(_vadd(a1, a2), b1, b2)),
            (-1, R(a1, b1, b2)), (-1, R(a2, b1, b2)),
            (-1, C(a1, a2, b1)), (-1, C(a1, a2, b2))]),
        "cancellation": ("a1 b1", lambda a1, b1: [(1, R(a1, b1, _vneg(b1))), (1, C(a1, _vneg(a1), b1))]),
        "minus-one-row": ("a1 b1 b2", lambda a1, b1, b2: [
            (1, R(_vneg(a1), b1, b2)), (-1, R(a1, _vneg(b1), _vneg(b2)))]),
        "minus-one-col": ("a1 a2 b1", lambda a1, a2, b1: [
            (1, C(a1, a2, _vneg(b1))), (-1, C(_vneg(a1), _vneg(a2), b1))]),
    }


OMEGA_RELATIONS = _omega_relation_table()


def omega_relation(name: str, **vectors) -> list[tuple[int, OmegaGen]]:
    """One relation of Omega(F(Z)/F{+-1}) as a signed list of generators (LHS - RHS)."""
    names, build = OMEGA_RELATIONS[name]
    return build(*(tuple(vectors[v]) for v in names.split()))


def random_omega_gen(rng: random.Random, Y: int, X: int, lo: int = -3, hi: int = 3) -> OmegaGen:
    v = lambda n: tuple(rng.randint(lo, hi) for _ in range(n))
    if rng.random() < 0.5:
        return OmegaGen.row(v(Y), v(X), v(X))
    return OmegaGen.col(v(Y), v(Y), v(X))


def pi_boundary_check(samples: int = 200, seed: int = 0, max_dim: int = 3) -> dict:
    """``pi(partial(g)) = 0`` for random generators ``g``."""
    rng = random.Random(seed)
    for i in range(samples):
        Y, X = rng.randint(1, max_dim), rng.randint(1, max_dim)
        g = random_omega_gen(rng, Y, X)
        for kind in ("tilde", "N"):
            m = nmodule_pi(nmodule_boundary(g, kind))
            if m.entries:
                return {"checked": i + 1, "passed": False,
                        "counterexample": {"generator": [g.kind, g.a, g.b], "kind": kind}}
    return {"checked": samples, "passed": True, "counterexample": None}


def boundary_relations_check(values=range(-3, 4), dims=((1, 1),), kind: str = "tilde") -> dict:
    """``partial`` of every Omega relation vanishes, exhaustively over entries in ``values``.

    Each relation is enumerated over the vectors it actually involves, with
    every coordinate ranging over ``values``.
    """
    values = list(values)
    checked = 0
    for Y, X in dims:
        space = {"a": list(itertools.product(values, repeat=Y)), "b": list(itertools.product(values, repeat=X))}
        for name, (names, build) in OMEGA_RELATIONS.items():
            var = names.split()
            for vecs in itertools.product(*(space[v[0]] for v in var)):
                checked += 1
                if not boundary(build(*vecs), Y, X, kind).is_zero():
                    return {"checked": checked, "passed": False,
                            "counterexample": {"relation": name, "dims": [Y, X],
                                               "vectors": dict(zip(var, map(list, vecs)))}}
    return {"checked": checked, "passed": True, "counterexample": None}
