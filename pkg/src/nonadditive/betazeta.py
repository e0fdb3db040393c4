"""Local zeta factors and Beta integrals over p-adic and real spheres.

Places are written as a prime ``p`` or the string ``"eta"`` for the real
place.  For a finite place and integer arguments every quantity here is an
exact :class:`~fractions.Fraction`; otherwise floats are used.

The sphere ``S_p^n`` is the set of vectors in ``Z_p^n`` of norm one
(``max |x_i| = 1``) for finite ``p``, and the unit sphere in ``R^n`` for
``eta``.  ``sigma_p^n`` is its invariant probability measure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from scipy import integrate

from ._parallel import ordered_map

ETA = "eta"


def parse_place(place) -> int | str:
    if isinstance(place, str):
        if place.lower() in ("eta", "real", "inf"):
            return ETA
        place = int(place)
    if not sympy.isprime(place):
        raise ValueError(f"place must be a prime or 'eta', got {place!r}")
    return int(place)


def _exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1 for x in xs)


def _ppow(p: int, e):
    """``p ** e`` as a Fraction for integer ``e``, float otherwise."""
    if _exact(e):
        return Fraction(p) ** int(e)
    return float(p) ** float(e)


def zeta(place, s):
    """Local factor: ``(1 - p^-s)^-1`` or ``2^(s/2) Gamma(s/2)``."""
    place = parse_place(place)
    if place == ETA:
        s = float(s)
        if s <= 0:
            raise ValueError("pole: s must be positive at the real place")
        return 2.0 ** (s / 2) * math.gamma(s / 2)
    if s == 0:
        raise ValueError("pole at s = 0")
    return 1 / (1 - _ppow(place, -s))


def _check_alphas(alphas: Sequence) -> None:
    if not alphas:
        raise ValueError("need at least one exponent")
    for a in alphas:
        if a <= 0:
            raise ValueError(f"pole: exponents must be positive, got {a!r}")


def beta(place, alphas: Sequence):
    """Unnormalised ``beta_p = prod zeta(alpha_i) / zeta(sum alpha_i)``."""
    _check_alphas(alphas)
    num = 1
    for a in alphas:
        num = num * zeta(place, a)
    return num / zeta(place, sum(alphas))


def B(place, alphas: Sequence):
    """Normalised Beta function ``beta_p(alphas) / beta_p(1, ..., 1)``."""
    return beta(place, alphas) / beta(place, [1] * len(alphas))


# ---------------------------------------------------------------------------
# p-adic integrals
# ---------------------------------------------------------------------------

def padic_beta_integral(p: int, n: int, alphas: Sequence[int]) -> Fraction:
    """``int_{S_p^n} prod |x_i|^(alpha_i - 1)`` as an exact rational.

    The sphere is split by the set ``Z`` of coordinates that are units.  On
    such a piece the other coordinates have valuation ``v_i >= 1``; the Haar
    mass of ``v(x_i) = v`` is ``(1 - 1/p) p^-v`` and the integrand is
    ``p^(-v (alpha_i - 1))``, so each coordinate contributes a geometric
    tail ``sum_{v>=1} p^(-v alpha_i)``.  The total is renormalised by the
    Haar mass ``1 - p^-n`` of the sphere.
    """
    p = parse_place(p)
    if p == ETA:
        raise ValueError("use real_beta_integral for the real place")
    if len(alphas) != n:
        raise ValueError("need one exponent per coordinate")
    _check_alphas(alphas)
    if not _exact(*alphas):
        raise ValueError("exponents must be integers for the exact p-adic integral")
    pinv = Fraction(1, p)
    tails = [pinv ** a / (1 - pinv ** a) for a in alphas]
    total = Fraction(0)
    for r in range(1, n + 1):
        for units in itertools.combinations(range(n), r):
            term = Fraction(1)
            for i in range(n):
                if i not in units:
                    term *= tails[i]
            total += term
    return (1 - pinv) ** n * total / (1 - pinv ** n)


def sphere_mass(p: int, n: int) -> Fraction:
    """Total sigma-mass from the profile decomposition; always 1."""
    return padic_beta_integral(p, n, [1] * n)


def _val(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def padic_beta_lattice(p: int, n: int, alphas: Sequence[int], k: int) -> tuple[Fraction, Fraction]:
    """Brute-force level-``k`` lattice sum; returns ``(value, error_bound)``.

    Every primitive residue vector modulo ``p^k`` is visited.  Coordinates
    that vanish modulo ``p^k`` are given absolute value 0 when their
    exponent is above 1, so the value undershoots the integral by at most
    ``error_bound``.
    """
    q = p ** k
    count = 0
    acc = Fraction(0)
    missed = Fraction(0)
    for x in itertools.product(range(q), repeat=n):
        if all(xi % p == 0 for xi in x):
            continue
        count += 1
        term = Fraction(1)
        lost = False
        for xi, a in zip(x, alphas):
            v = _val(xi, p, k)
            if xi == 0 and a != 1:
                term = Fraction(0)
                lost = True
                break
            term *= Fraction(1, p) ** (v * (a - 1))
        acc += term
        if lost:
            missed += 1
    bound = missed * Fraction(1, p) ** (k * (min(alphas) - 1)) if min(alphas) > 1 else missed
    return acc / count, bound / count


def _norm_p(y: Sequence[int], p: int) -> tuple[int, tuple[int, ...]]:
    """``y = p^m u`` with ``u`` primitive; returns ``(m, u)``."""
    if not any(y):
        raise ValueError("y must be nonzero")
    m = min(_val(abs(v), p, 10 ** 9) for v in y if v)
    return m, tuple(v // p ** m for v in y)


def sslash_rhs(place, n: int, y: Sequence, s):
    """Closed form ``zeta(n)/zeta(1) * zeta(s)/zeta(n-1+s) * |y|^(s-1)``."""
    place = parse_place(place)
    if place == ETA:
        ynorm = math.sqrt(sum(float(v) ** 2 for v in y))
        scale = ynorm ** (float(s) - 1)
    else:
        m, _ = _norm_p(y, place)
        scale = _ppow(place, -m * (s - 1)) if _exact(s) else float(place) ** (-m * (float(s) - 1))
    return zeta(place, n) / zeta(place, 1) * zeta(place, s) / zeta(place, n - 1 + s) * scale


def _primitive_count_at_least(p: int, n: int, k: int, j: int) -> int:
    """Primitive ``x`` mod ``p^k`` with ``x.u = 0`` mod ``p^j`` (``u`` primitive)."""
    if j == 0:
        return p ** (k * n) - p ** ((k - 1) * n)
    return p ** (k * n - j) - p ** ((k - 1) * n - (j - 1))


def _primitive_count_brute(p: int, n: int, k: int, u: Sequence[int]) -> list[int]:
    q = p ** k
    hist = [0] * (k + 1)
    for x in itertools.product(range(q), repeat=n):
        if all(xi % p == 0 for xi in x):
            continue
        hist[_val(sum(a * b for a, b in zip(x, u)) % q, p, k)] += 1
    return hist


@dataclass
class Comparison:
    lhs: object
    rhs: object
    delta: object
    method: str
    certificate: dict

    def passed(self, tol=0) -> bool:
        if isinstance(self.delta, Fraction):
            bound = self.certificate.get("tail_bound", 0)
            return 0 <= self.delta <= bound if bound else self.delta == 0
        return abs(self.delta) <= tol

    def to_json(self) -> dict:
        return {"lhs": _num_json(self.lhs), "rhs": _num_json(self.rhs), "delta": _num_json(self.delta),
                "method": self.method, "certificate": {k: _num_json(v) for k, v in self.certificate.items()}}


def _num_json(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def sslash_integral_check(place, n: int, y: Sequence[int], s, level: int = 20,
                          mc: int = 200_000, seed: int = 0, brute: bool = False) -> Comparison:
    """Compare ``int |x . y|^(s-1) sigma(dx)`` with its closed form.

    Finite ``p``: exact level-``k`` sum over the valuation of ``x . y``; the
    counts of primitive residue vectors come from the fibre sizes of the
    linear form (or from brute enumeration when ``brute``).  The part with
    ``x . y = 0`` mod ``p^k`` is dropped and reported as ``tail_bound``.
    Real place: quadrature for ``n = 2``, Monte Carlo otherwise.
    """
    place = parse_place(place)
    rhs = sslash_rhs(place, n, y, s)
    if place == ETA:
        if n == 2:
            ynorm = math.hypot(*map(float, y))
            phase = math.atan2(float(y[1]), float(y[0]))
            val, err = _circle_average(lambda t: abs(math.cos(t - phase)) ** (float(s) - 1)) if ynorm else (0.0, 0.0)
            val *= ynorm ** (float(s) - 1)
            return Comparison(val, rhs, val - rhs, "quadrature", {"error": err})
        xs = sample_sphere(n, mc, seed)
        vals = np.abs(xs @ np.asarray(y, dtype=float)) ** (float(s) - 1)
        est, se = float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(mc))
        return Comparison(est, rhs, est - rhs, "monte-carlo", {"samples": mc, "seed": seed, "stderr": se})
    p = place
    m, u = _norm_p(y, p)
    if brute:
        hist = _primitive_count_brute(p, n, level, u)
        total = sum(hist)
    else:
        total = _primitive_count_at_least(p, n, level, 0)
        ge = [_primitive_count_at_least(p, n, level, j) for j in range(level + 1)]
        hist = [ge[j] - ge[j + 1] for j in range(level)] + [ge[level]]
    exact_s = _exact(s)
    lhs = Fraction(0) if exact_s else 0.0
    for j in range(level):
        w = Fraction(hist[j], total) if exact_s else hist[j] / total
        lhs += w * _ppow(p, -(j + m) * (s - 1))
    tail = (Fraction(hist[level], total) if exact_s else hist[level] / total) * _ppow(p, -(level + m) * (s - 1))
    return Comparison(lhs, rhs, rhs - lhs, "lattice" + ("-brute" if brute else ""),
                      {"level": level, "tail_bound": tail})


# ---------------------------------------------------------------------------
# Real place
# ---------------------------------------------------------------------------

def _circle_average(f) -> tuple[float, float]:
    val, err = integrate.quad(f, 0.0, 2 * math.pi, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val / (2 * math.pi), err / (2 * math.pi)


def sample_sphere(n: int, count: int, seed: int, batches: int = 8, threads: int | None = None) -> np.ndarray:
    """Uniform points on the unit sphere of ``R^n`` via normalised Gaussians.

    The work is split into ``batches`` with independent child seeds, so the
    result does not depend on the thread count.
    """
    children = np.random.SeedSequence(seed).spawn(batches)
    sizes = [count // batches + (1 if i < count % batches else 0) for i in range(batches)]

    def draw(job):
        ss, size = job
        g = np.random.default_rng(ss).standard_normal((size, n))
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    return np.concatenate(ordered_map(draw, list(zip(children, sizes)), threads))


@dataclass
class Estimate:
    value: float
    error: float
    method: str

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error, "method": self.method}


def real_beta_integral(n: int, alphas: Sequence[float], method: str = "auto",
                       samples: int = 1_000_000, seed: int = 0) -> Estimate:
    """``int_{S^(n-1)} prod |x_i|^(alpha_i - 1)`` with an error estimate.

    ``quadrature`` (n = 2 only) integrates over the angle, splitting at the
    axes and using algebraic endpoint weights for exponents below 1.
    ``mc`` averages over normalised Gaussian samples; the error is one
    standard error.
    """
    _check_alphas(alphas)
    if len(alphas) != n:
        raise ValueError("need one exponent per coordinate")
    if method == "auto":
        method = "quadrature" if n <= 2 else "mc"
    if n == 1:
        return Estimate(1.0, 0.0, "exact")
    if method == "quadrature":
        if n != 2:
            raise ValueError("quadrature is implemented for n = 2")
        a1, a2 = (float(a) - 1 for a in alphas)
        half = math.pi / 2

        def smooth(t):
            # |cos t|^a1 |sin t|^a2 divided by the endpoint weight t^a2 (pi/2 - t)^a1
            c, s = math.cos(t), math.sin(t)
            left = (s / t) ** a2 if t > 0 else 1.0
            right = (c / (half - t)) ** a1 if t < half else 1.0
            return left * right

        val, err = integrate.quad(smooth, 0.0, half, weight="alg", wvar=(a2, a1),
                                  epsabs=1e-14, epsrel=1e-13, limit=200)
        # the four quadrants contribute equally
        return Estimate(val * 4 / (2 * math.pi), err * 4 / (2 * math.pi), "quadrature")
    if method == "mc":
        xs = np.abs(sample_sphere(n, samples, seed))
        vals = np.prod(xs ** (np.asarray(alphas, dtype=float) - 1), axis=1)
        return Estimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples)), "mc")
    raise ValueError(f"unknown method {method!r}")


def gamma_half_integer(k: int) -> float:
    """``Gamma(k/2)`` for a positive integer ``k`` from ``Gamma(1/2) = sqrt(pi)`` by recursion."""
    if k <= 0:
        raise ValueError("k must be positive")
    if k % 2 == 0:
        return float(math.factorial(k // 2 - 1))
    g = math.sqrt(math.pi)
    for j in range(1, k // 2 + 1):
        g *= (2 * j - 1) / 2
    return g


# ---------------------------------------------------------------------------
# Limits, multiplication and contraction
# ---------------------------------------------------------------------------

def phi_density_integral(place, N: int, s):
    """``int |x|^(s-1) phi_p^N(dx)`` from the explicit density of ``phi_p^N``."""
    place = parse_place(place)
    if N < 2:
        raise ValueError("N must be at least 2")
    if place == ETA:
        s = float(s)
        const = math.gamma(N / 2) / (math.sqrt(math.pi * N) * math.gamma((N - 1) / 2))
        r = math.sqrt(N)
        f = lambda x: x ** (s - 1) * (1 - x * x / N) ** ((N - 1) / 2 - 1)
        val, _ = integrate.quad(f, 0.0, r, epsabs=1e-14, epsrel=1e-13, limit=200)
        return 2 * const * val
    p = place
    pn = _ppow(p, -N)
    c_int = (1 - p * pn) / (1 - pn)
    c_unit = p * pn / (1 - pn)
    # int_{Z_p} |x|^(s-1) dx = zeta(s)/zeta(1), int_{Z_p^*} dx = 1/zeta(1)
    return c_int * zeta(p, s) / zeta(p, 1) + c_unit / zeta(p, 1)


def limit_target(place, s):
    return zeta(place, s) / zeta(place, 1)


def limit_check(place, s, N: int) -> dict:
    """Finite-``N`` value by the density route and by the contraction route.

    Returns the value, the limit ``zeta(s)/zeta(1)`` and their difference;
    ``via_sslash`` is the same finite-``N`` value from the contraction
    closed form with ``y = (1, ..., 1)``.
    """
    place = parse_place(place)
    value = phi_density_integral(place, N, s)
    target = limit_target(place, s)
    via = sslash_rhs(place, N, [1] * N, s)
    return {"place": place, "s": s, "N": N, "lhs": value, "rhs": target,
            "delta": value - target, "via_sslash": via}


def limit_series(place, s, Ns=(5, 10, 20, 40)) -> list[dict]:
    return [limit_check(place, s, N) for N in Ns]


def _poly_terms(integrand, N: int) -> list[tuple[object, tuple[int, ...]]]:
    if isinstance(integrand, dict):
        terms = list(integrand.items())
        terms = [(c, tuple(e)) for e, c in terms]
    else:
        terms = [(c, tuple(e)) for c, e in integrand]
    for _, e in terms:
        if len(e) != N or any(x < 0 for x in e):
            raise ValueError(f"exponent vector {e} does not match N = {N}")
    return terms


def _block_beta(place, alphas):
    place = parse_place(place)
    if place != ETA and _exact(*alphas):
        return padic_beta_integral(place, len(alphas), list(alphas))
    if place == ETA and len(alphas) <= 2:
        return real_beta_integral(len(alphas), list(alphas), "quadrature").value
    return B(place, alphas)


def multiplication_formula_check(place, parts: Sequence[int], integrand) -> dict:
    """Both sides of the multiplication formula for a polynomial in the ``|x_i|``.

    ``integrand`` maps exponent vectors ``e`` to coefficients (or is a list
    of ``(coef, e)``).  The left side is ``sum c B(e + 1)`` from the closed
    form.  The right side integrates ``f(t <| x)`` block by block: each
    block ``j`` contributes a Beta integral in its own coordinates, and the
    outer integral over ``t`` carries the weight
    ``prod |t_j|^(n_j - 1) / B(n_1, ..., n_k)`` times ``|t_j|^(E_j)`` with
    ``E_j`` the block degree.  Block integrals use the profile sums (finite
    places) or quadrature (real place, blocks of size at most 2).
    """
    place = parse_place(place)
    N = sum(parts)
    lhs = 0
    rhs = 0
    for c, e in _poly_terms(integrand, N):
        lhs += c * B(place, [x + 1 for x in e])
        blocks, start = [], 0
        for nj in parts:
            blocks.append(e[start:start + nj])
            start += nj
        inner = 1
        for blk in blocks:
            inner = inner * _block_beta(place, [x + 1 for x in blk])
        outer_exp = [nj + sum(blk) for nj, blk in zip(parts, blocks)]
        outer = _block_beta(place, outer_exp) / B(place, list(parts))
        rhs += c * outer * inner
    return {"place": place, "parts": list(parts), "lhs": lhs, "rhs": rhs, "delta": lhs - rhs}


def contraction_rhs(place, parts: Sequence[int], alphas: Sequence, ys: Sequence[Sequence[int]]):
    """Closed form of the contraction integral over ``S^N``, ``N = sum(parts)``."""
    place = parse_place(place)
    N, k = sum(parts), len(parts)
    num = zeta(place, N)
    for a in alphas:
        num = num * zeta(place, a)
    den = zeta(place, 1) ** k * zeta(place, N - k + sum(alphas))
    scale = 1
    for a, y in zip(alphas, ys):
        if place == ETA:
            scale *= math.sqrt(sum(float(v) ** 2 for v in y)) ** (float(a) - 1)
        else:
            m, _ = _norm_p(y, place)
            scale *= _ppow(place, -m * (a - 1))
    return num / den * scale


def contraction_via_multiplication(place, parts: Sequence[int], alphas: Sequence, ys):
    """The contraction integral assembled from the multiplication formula.

    With ``x = t <| (x^(j))`` the integrand factors as
    ``prod |t_j|^(alpha_j - 1) |x^(j) . y_j|^(alpha_j - 1)``; the inner
    integrals are contraction integrals with a single block, and the outer
    one is a Beta integral against the Beta-measure weight.
    """
    place = parse_place(place)
    outer = B(place, [nj + a - 1 for nj, a in zip(parts, alphas)]) / B(place, list(parts))
    inner = 1
    for nj, a, y in zip(parts, alphas, ys):
        inner = inner * sslash_rhs(place, nj, y, a)
    return outer * inner


def contraction_reductions(place, parts: Sequence[int], alphas: Sequence, ys) -> dict:
    """The two special cases of the contraction integral and the general assembly."""
    place = parse_place(place)
    N = sum(parts)
    one_block = contraction_rhs(place, [N], [alphas[0]], [ys[0]]) - sslash_rhs(place, N, ys[0], alphas[0])
    singles = contraction_rhs(place, [1] * len(alphas), alphas, [[1]] * len(alphas)) - B(place, alphas)
    general = contraction_rhs(place, parts, alphas, ys) - contraction_via_multiplication(place, parts, alphas, ys)
    return {"k1_vs_sslash": one_block, "unit_vs_beta": singles, "general_vs_multiplication": general}
