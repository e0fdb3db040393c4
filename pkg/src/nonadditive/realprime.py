"""The real prime: exact operator-norm tests over the rationals.

The operator 2-norm is never materialised.  Instead ``norm_le(a, c)`` decides
``||a|| <= c`` by checking that ``c^2 I - a^t a`` is positive semidefinite,
with a recursive Schur complement carried out in exact fractions.

Also provided: the unit ball ``O`` (norm at most one) with its maximal ideal
``m`` (norm strictly below one), the residue operations on unit vectors,
the residue F-ring of partial isometries, and checkers for the valuation
axioms.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable

import sympy

from .fincat import FinSet
from .rigring import RAT, CheckResult, FRing, MatrixFRing, RigMatrix, mat_compose, mat_oplus, mat_transpose


def qmatrix(rows_list, rows: FinSet | None = None, cols: FinSet | None = None) -> RigMatrix:
    """Rational matrix from nested lists (entries may be ints, strings or Fractions)."""
    return RigMatrix.from_rows([[Fraction(v) for v in r] for r in rows_list], RAT, rows, cols)


def row_vector(values: Iterable, labels: FinSet | None = None) -> RigMatrix:
    values = [Fraction(v) for v in values]
    return RigMatrix.from_rows([values], RAT, FinSet([1]), labels or FinSet.range(len(values)))


def is_psd(m: list[list[Fraction]]) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix."""
    m = [list(r) for r in m]
    while m:
        p = m[0][0]
        if p < 0:
            return False
        if p == 0:
            if any(v != 0 for v in m[0]) or any(r[0] != 0 for r in m):
                return False
            m = [r[1:] for r in m[1:]]
            continue
        head = m[0]
        m = [[r[j] - r[0] * head[j] / p for j in range(1, len(r))] for r in m[1:]]
    return True


def gram(a: RigMatrix) -> list[list[Fraction]]:
    d = a.dense()
    nr, nc = len(d), len(a.cols)
    return [[sum((d[k][i] * d[k][j] for k in range(nr)), Fraction(0)) for j in range(nc)] for i in range(nc)]


def norm_le(a: RigMatrix, c) -> bool:
    """||a||_2 <= c, decided exactly via PSD of c^2 I - a^t a."""
    return gram_norm_le(gram(a), c)


def gram_norm_le(g: list[list[Fraction]], c) -> bool:
    """Same test as :func:`norm_le` given the Gram matrix a^t a."""
    c = Fraction(c)
    if c < 0:
        raise ValueError("threshold must be nonnegative")
    n = len(g)
    return is_psd([[(c * c if i == j else 0) - g[i][j] for j in range(n)] for i in range(n)])


def in_O_eta(a: RigMatrix) -> bool:
    return norm_le(a, 1)


def in_m_eta(a: RigMatrix) -> bool:
    """Strict unit ball: norm < 1, i.e. the largest eigenvalue of a^t a is below 1."""
    if not in_O_eta(a):
        return False
    g = sympy.Matrix(gram(a)) if a.cols else sympy.zeros(0, 0)
    if g.shape[0] == 0:
        return True
    # norm == 1 exactly when I - a^t a is singular
    return (sympy.eye(g.shape[0]) - g).det() != 0


def squared_norm(values: Iterable) -> Fraction:
    return sum((Fraction(v) ** 2 for v in values), Fraction(0))


# ---------------------------------------------------------------------------
# residue operations on unit vectors (coordinates as dicts label -> Fraction)

def residue_gate(vec: dict) -> dict:
    """Keep a vector of squared norm exactly one, otherwise return zero ({})."""
    return dict(vec) if squared_norm(vec.values()) == 1 else {}


def residue_mult(a: dict, fibres: dict, fmap: dict) -> dict:
    """a over Z times a family ``fibres[z]`` (dict over f^-1(z)); ``fmap`` is f: Y -> Z."""
    out = {y: Fraction(a.get(z, 0)) * Fraction(fibres.get(z, {}).get(y, 0)) for y, z in fmap.items()}
    return residue_gate({k: v for k, v in out.items() if v})


def residue_contract(a: dict, fibres: dict, fmap: dict) -> dict:
    out: dict = {}
    for y, z in fmap.items():
        out[z] = out.get(z, Fraction(0)) + Fraction(a.get(y, 0)) * Fraction(fibres.get(z, {}).get(y, 0))
    return residue_gate({k: v for k, v in out.items() if v})


def residue_ops(a, b, op: str):
    """Residue operation on two coordinate sequences over the same index set.

    ``contract`` pairs ``a`` against ``b`` into a scalar (degree one);
    ``mult`` treats a length-one ``a`` as a scalar multiplying the vector ``b``.
    Results whose squared norm is not exactly one collapse to zero (empty tuple).
    """
    a = [Fraction(v) for v in a]
    b = [Fraction(v) for v in b]
    if op == "contract":
        if len(a) != len(b):
            raise ValueError("degree mismatch")
        res = residue_contract(dict(enumerate(a)), {0: dict(enumerate(b))}, {i: 0 for i in range(len(a))})
        return (res[0],) if res else ()
    if op == "mult":
        if len(a) != 1:
            raise ValueError("mult expects a degree-one left factor")
        res = residue_mult({0: a[0]}, {0: dict(enumerate(b))}, {i: 0 for i in range(len(b))})
        return tuple(res.get(i, Fraction(0)) for i in range(len(b))) if res else ()
    raise ValueError(f"unknown residue op {op!r}")


# ---------------------------------------------------------------------------
# the residue F-ring: partial isometries, composed and then cut to norm one

def isometric_part(a: RigMatrix) -> RigMatrix:
    """Restrict ``a`` to the subspace where it is an isometry (eigenvalue 1 of a^t a)."""
    n = len(a.cols)
    if n == 0 or len(a.rows) == 0:
        return RigMatrix.make(a.rows, a.cols, {}, RAT)
    g = sympy.Matrix(gram(a))
    basis = (sympy.eye(n) - g).nullspace()
    if not basis:
        return RigMatrix.make(a.rows, a.cols, {}, RAT)
    N = sympy.Matrix.hstack(*basis)
    proj = N * (N.T * N).inv() * N.T
    A = sympy.Matrix(a.dense())
    P = A * proj
    ent = {(y, x): Fraction(int(P[i, j].p), int(P[i, j].q))
           for i, y in enumerate(a.rows) for j, x in enumerate(a.cols)}
    return RigMatrix.make(a.rows, a.cols, ent, RAT)


class ResidueFRing(FRing):
    """Residue F-ring of the real prime on matrices of norm at most one.

    An element is stored as the partial isometry it induces; matrices whose
    norm is below one on every direction become zero.
    """

    name = "k"

    def __init__(self, values=(0, 1, -1, Fraction(3, 5), Fraction(4, 5))):
        self.values = tuple(Fraction(v) for v in values)
        self._base = MatrixFRing(RAT)

    def reduce(self, a: RigMatrix) -> RigMatrix:
        if not in_O_eta(a):
            raise ValueError("matrix lies outside the unit ball")
        return isometric_part(a)

    def compose(self, b, a):
        return isometric_part(mat_compose(b, a))

    def block_sum(self, blocks):
        return self._base.block_sum(blocks)

    def transpose(self, a):
        return mat_transpose(a)

    def relabel(self, a, row_fn, col_fn):
        return self._base.relabel(a, row_fn, col_fn)

    def identity(self, X):
        return self._base.identity(X)

    def from_pb(self, f):
        return self._base.from_pb(f)

    def elements(self, Y, X):
        seen = set()
        cells = [(y, x) for y in Y for x in X]
        for vals in product(self.values, repeat=len(cells)):
            m = RigMatrix.make(Y, X, dict(zip(cells, vals)), RAT)
            if in_O_eta(m):
                r = isometric_part(m)
                if r not in seen:
                    seen.add(r)
                    yield r


def residue_matrix_witness():
    """The unit vector (3/5, 4/5): nonzero, yet both matrix coefficients vanish."""
    v = {1: Fraction(3, 5), 2: Fraction(4, 5)}
    coeffs = {x: residue_contract(v, {0: {x: Fraction(1)}}, {1: 0, 2: 0}) for x in (1, 2)}
    return v, coeffs


# ---------------------------------------------------------------------------
# random exact samples and valuation axioms

def random_qmatrix(rng: random.Random, rows: int, cols: int, bound: int = 2, den: int = 4) -> RigMatrix:
    vals = [[Fraction(rng.randint(-bound * den, bound * den), den) for _ in range(cols)] for _ in range(rows)]
    return qmatrix(vals, FinSet.range(rows), FinSet.range(cols))


def random_unit_ball(rng: random.Random, rows: int, cols: int) -> RigMatrix:
    """A random element of O: a scaled rational matrix or a rational partial isometry."""
    if rng.random() < 0.25 and rows and cols:
        # Pythagorean rotations give boundary cases of norm exactly one
        a, b, h = rng.choice([(3, 4, 5), (5, 12, 13), (8, 15, 17), (1, 0, 1)])
        c, s = Fraction(a, h), Fraction(b, h)
        ent = {(i, i): c for i in range(1, min(rows, cols) + 1)}
        if rows >= 2 and cols >= 2:
            ent[(1, 2)], ent[(2, 1)] = -s, s
        return RigMatrix.make(FinSet.range(rows), FinSet.range(cols), ent, RAT)
    m = random_qmatrix(rng, rows, cols)
    total = sum((abs(v) for _, v in m.entries), Fraction(0))
    if total <= 1:
        return m
    scale = total if rng.random() < 0.5 else total * rng.randint(1, 3)
    return RigMatrix.make(m.rows, m.cols, {k: v / scale for k, v in m.entries}, RAT)


THRESHOLDS = tuple(Fraction(k, 4) for k in range(0, 25))


def valuation_axiom_check(axiom: str, samples: int = 200, seed: int = 0, max_size: int = 3,
                          thresholds=THRESHOLDS) -> CheckResult:
    """Check a valuation axiom on random rational matrices at rational thresholds."""
    rng = random.Random(seed)

    def rnd(r=None, c=None):
        return random_qmatrix(rng, r or rng.randint(1, max_size), c or rng.randint(1, max_size))

    for i in range(samples):
        if axiom == "I-mult":
            x1, x2 = (Fraction(rng.randint(-40, 40), rng.randint(1, 12)) for _ in range(2))
            c = abs(x1) * abs(x2)
            p = qmatrix([[x1 * x2]])
            ok = norm_le(p, c) and (c == 0 or not norm_le(p, c * Fraction(999, 1000)))
            if not ok:
                return CheckResult(False, i + 1, witness=(x1, x2))
        elif axiom == "III-submult":
            n = rng.randint(1, max_size)
            a, a2 = rnd(c=n), rnd(r=n)
            # tightest grid thresholds; larger ones follow a fortiori
            c1 = next(c for c in thresholds if norm_le(a, c))
            c2 = next(c for c in thresholds if norm_le(a2, c))
            if not norm_le(mat_compose(a, a2), c1 * c2):
                return CheckResult(False, i + 1, witness=(a, a2, c1, c2))
        elif axiom == "III-oplus":
            a0, a1 = rnd(), rnd()
            gs, g0, g1 = gram(mat_oplus(a0, a1)), gram(a0), gram(a1)
            for c in thresholds:
                if gram_norm_le(gs, c) != (gram_norm_le(g0, c) and gram_norm_le(g1, c)):
                    return CheckResult(False, i + 1, witness=(a0, a1, c))
        elif axiom == "III-transpose":
            a = rnd()
            ga, gt = gram(a), gram(mat_transpose(a))
            for c in thresholds:
                if gram_norm_le(ga, c) != gram_norm_le(gt, c):
                    return CheckResult(False, i + 1, witness=(a, c))
        else:
            raise ValueError(f"unknown axiom {axiom!r}")
    return CheckResult(True, samples)


VALUATION_AXIOMS = ("I-mult", "III-submult", "III-oplus", "III-transpose")
