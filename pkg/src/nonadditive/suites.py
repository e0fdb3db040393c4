"""The acceptance criteria as callable suites.

Each ``criterion_k`` returns a :class:`SuiteReport` whose ``detail`` is
plain JSON.  Runtimes are measured but kept out of ``detail`` so that two
runs with the same seed produce identical reports.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import arithplane, betazeta, deltafree, differentials, genring, realprime, spectra
from .fincat import FinSet
from .rigring import mat_compose, mat_oplus, mat_transpose


@dataclass
class SuiteReport:
    name: str
    title: str
    passed: bool
    detail: dict
    seconds: float = field(default=0.0, compare=False)
    budget: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.title} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "title": self.title, "passed": self.passed, "detail": self.detail}


def _timed(name, title, budget, fn, *args, **kwargs) -> SuiteReport:
    t0 = time.perf_counter()
    passed, detail = fn(*args, **kwargs)
    return SuiteReport(name, title, bool(passed), detail, time.perf_counter() - t0, budget)


def _frac(v):
    return str(v) if isinstance(v, Fraction) else v


# ---------------------------------------------------------------------------
# 1. exact p-adic Beta integrals

def _c1():
    rows = []
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            for alphas in itertools.product(range(1, 5), repeat=n):
                lhs = betazeta.padic_beta_integral(p, n, list(alphas))
                rhs = betazeta.B(p, list(alphas))
                if lhs != rhs:
                    rows.append({"p": p, "alphas": list(alphas), "lhs": str(lhs), "rhs": str(rhs)})
    checked = 3 * (4 + 16 + 64)
    return not rows, {"checked": checked, "mismatches": rows[:5]}


def criterion_1(seed: int = 0) -> SuiteReport:
    return _timed("criterion-1", "exact p-adic Beta integrals", 2.0, _c1)


# ---------------------------------------------------------------------------
# 2. real Beta integrals

def _c2(seed: int):
    quad = []
    ok = True
    cases = [list(a) for a in itertools.product(range(1, 5), repeat=2)] + [[0.5, 1.5], [0.5, 0.5], [2.5, 1.0]]
    for alphas in cases:
        est = betazeta.real_beta_integral(2, alphas, "quadrature")
        err = abs(est.value - betazeta.B("eta", alphas))
        quad.append({"alphas": alphas, "value": est.value, "abs_error": err})
        ok &= err < 1e-8
    mc = []
    for alphas in ([2, 1, 1], [3, 2, 1], [2, 2, 2], [4, 1, 3]):
        est = betazeta.real_beta_integral(3, alphas, "mc", samples=1_000_000, seed=seed)
        exact = betazeta.B("eta", alphas)
        z = abs(est.value - exact) / est.error
        mc.append({"alphas": alphas, "value": est.value, "stderr": est.error, "exact": exact, "z": z})
        ok &= z <= 4
    return ok, {"quadrature": quad, "monte_carlo": mc, "seed": seed}


def criterion_2(seed: int = 0) -> SuiteReport:
    return _timed("criterion-2", "real Beta integrals (quadrature and Monte Carlo)", 10.0, _c2, seed)


# ---------------------------------------------------------------------------
# 3. the N -> infinity limit

def _c3():
    ok = True
    out = []
    for p in (2, 3):
        for s in (2, 3):
            series = betazeta.limit_series(p, s, (5, 10, 20, 40))
            deltas = [abs(r["delta"]) for r in series]
            monotone = all(a > b for a, b in zip(deltas, deltas[1:]))
            bounded = all(abs(r["delta"]) < Fraction(1, p ** (r["N"] - 2)) for r in series)
            routes = all(r["lhs"] == r["via_sslash"] for r in series)
            ok &= monotone and bounded and routes
            out.append({"p": p, "s": s, "target": str(series[0]["rhs"]),
                        "deltas": [str(r["delta"]) for r in series],
                        "monotone": monotone, "within_bound": bounded, "routes_agree": routes})
    return ok, {"series": out}


def criterion_3(seed: int = 0) -> SuiteReport:
    return _timed("criterion-3", "finite-N limit identity", 1.0, _c3)


# ---------------------------------------------------------------------------
# 4. generalized-ring axioms

AXIOM_INSTANCES = ("GN", "GZ", "GZ/6", "F1", "FM:Z/3")


def _c4(seed: int):
    ok = True
    table = {}
    for name in AXIOM_INSTANCES:
        A = genring.get_instance(name)
        row = {}
        for ax in genring.AXIOMS:
            res = genring.axiom_suite(A, ax, samples=500, seed=seed, max_size=3)
            row[ax] = {"passed": res.passed, "checked": res.checked}
            ok &= res.passed
        table[name] = row
    w = genring.right_linearity_witness(genring.get_instance("FM:free"))
    witness = None
    if not w.passed:
        witness = {k: repr(v) for k, v in w.witness.items()}
    ok &= not w.passed
    return ok, {"instances": table, "samples": 500, "max_size": 3,
                "free_monoid_right_linearity": {"fails": not w.passed, "witness": witness}}


def criterion_4(seed: int = 0) -> SuiteReport:
    return _timed("criterion-4", "generalized-ring axiom suite", 30.0, _c4, seed)


# ---------------------------------------------------------------------------
# 5. evaluation out of the free instance

def _c5(seed: int):
    out = {}
    ok = True
    for name in ("GN", "GZ/5"):
        r = deltafree.homomorphism_check(genring.get_instance(name), samples=200, seed=seed, max_degree=3)
        out[name] = r
        ok &= r["passed"]
    return ok, out


def criterion_5(seed: int = 0) -> SuiteReport:
    return _timed("criterion-5", "evaluation is a homomorphism", None, _c5, seed)


# ---------------------------------------------------------------------------
# 6. arithmetical plane searches

def _c6(threads=None):
    s, sp = arithplane.sigma(), arithplane.sigma_prime()
    core = arithplane.equiv_search(s, sp, arithplane.CORE_MOVES, size_bound=8, threads=threads)
    nabla_ok = all(arithplane.nabla_graph(g) == (1, 1) for g in core.visited)
    comb_ok = all(arithplane.is_comb(g) for g in core.visited)
    tags = sorted({arithplane.merge_tag(g) for g in core.visited}, key=str)
    full = arithplane.equiv_search(s, sp, arithplane.MOVE_FAMILIES, size_bound=8, threads=threads)
    replay = full.status == "path" and arithplane.check_path(s, sp, full.path)
    ok = (core.status == "exhausted" and nabla_ok and comb_ok
          and full.status == "path" and len(full.path) <= 8 and replay)
    return ok, {
        "core": {"status": core.status, "visited": core.visited_count, "pruned": core.pruned,
                 "nabla_constant": nabla_ok, "all_combs": comb_ok, "merge_tags": tags},
        "with_one_comm": {"status": full.status, "length": len(full.path),
                          "moves": [m.name for m in full.path], "replayed": replay},
    }


def criterion_6(seed: int = 0) -> SuiteReport:
    return _timed("criterion-6", "arithmetical-plane searches", 60.0, _c6)


# ---------------------------------------------------------------------------
# 7. spectra against the ring oracle, and the structure sheaf

def _c7():
    ok = True
    out = {}
    for name in ("GZ/12", "GZ/30", "GF4"):
        r = spectra.oracle_comparison(spectra.finite_instance(name))
        out[name] = r
        ok &= r["passed"]
    F = spectra.finite_instance("GZ/12")
    sheaf = {}
    for s in F.self_adjoint:
        res = spectra.structure_sheaf_check(F, s)
        sheaf[str(F.A.coords(s)[0])] = res.to_json()
        ok &= res.passed
    out["sheaf_GZ/12"] = sheaf
    return ok, out


def criterion_7(seed: int = 0) -> SuiteReport:
    return _timed("criterion-7", "spectra oracle and structure sheaf", None, _c7)


# ---------------------------------------------------------------------------
# 8. differentials

def _c8(seed: int):
    rng = random.Random(f"{seed}:differentials")
    detail = {}
    # both normal-form routes on random generators
    agree = 0
    for _ in range(1000):
        a, b = rng.randint(1, 10 ** 4), rng.randint(1, 10 ** 4)
        differentials.normal_form(differentials.gen(a, b))  # raises on disagreement
        agree += 1
    detail["routes_agree"] = agree
    # d(n) = sum v_p(n) (n/p) d(p) for n <= 1000, building d(n) = d(n-1) + {n-1;1}
    running: dict[int, int] = {}
    bad_dn = []
    for n in range(2, 1001):
        step = differentials.normal_form(differentials.gen(n - 1, 1)).basis
        for p, c in step.items():
            running[p] = running.get(p, 0) + c
        running = {p: c for p, c in running.items() if c}
        want = {p: differentials.valuation(n, p) * n // p for p in sympy.primefactors(n)}
        if running != want:
            bad_dn.append(n)
    detail["d_of_n_mismatches"] = bad_dn[:5]
    lb = differentials.relation_check("leibnitz", 100, seed=seed)
    add = differentials.relation_check("additivity", 100, seed=seed)
    detail["leibnitz"] = lb
    detail["additivity"] = add
    pib = differentials.pi_boundary_check(200, seed=seed)
    detail["pi_boundary"] = pib
    rel = {k: differentials.boundary_relations_check(kind=k) for k in ("tilde", "N")}
    detail["boundary_of_relations"] = rel
    ok = (agree == 1000 and not bad_dn and lb["passed"] and add["passed"] and pib["passed"]
          and all(r["passed"] for r in rel.values()))
    return ok, detail


def criterion_8(seed: int = 0) -> SuiteReport:
    return _timed("criterion-8", "differentials", 10.0, _c8, seed)


# ---------------------------------------------------------------------------
# 9. the real prime

def _c9(seed: int):
    rng = random.Random(f"{seed}:real-prime")
    closure_fail = None
    cs_fail = None
    for i in range(500):
        n, m, k = (rng.randint(1, 3) for _ in range(3))
        a, b = realprime.random_unit_ball(rng, n, m), realprime.random_unit_ball(rng, m, k)
        c = realprime.random_unit_ball(rng, rng.randint(1, 3), rng.randint(1, 3))
        for op, val in (("compose", mat_compose(a, b)), ("oplus", mat_oplus(a, c)), ("transpose", mat_transpose(a))):
            if closure_fail is None and not realprime.in_O_eta(val):
                closure_fail = {"sample": i, "op": op}
        # contraction of two unit-ball vectors has absolute value at most one
        u = realprime.random_unit_ball(rng, 1, n)
        v = realprime.random_unit_ball(rng, 1, n)
        ud, vd = dict(u.entries), dict(v.entries)
        pairing = sum((ud.get(key, 0) * vd.get(key, 0) for key in ud), Fraction(0))
        if cs_fail is None and (pairing ** 2 > realprime.squared_norm(ud.values()) * realprime.squared_norm(vd.values())
                                or abs(pairing) > 1):
            cs_fail = {"sample": i}
    vec, coeffs = realprime.residue_matrix_witness()
    witness_ok = (realprime.squared_norm(vec.values()) == 1
                  and all(not any(c.values()) if isinstance(c, dict) else not c for c in coeffs.values()))
    vals = {ax: realprime.valuation_axiom_check(ax, samples=200, seed=seed) for ax in realprime.VALUATION_AXIOMS}
    ok = closure_fail is None and cs_fail is None and witness_ok and all(r.passed for r in vals.values())
    return ok, {"closure_samples": 500, "closure_failure": closure_fail, "cauchy_schwarz_failure": cs_fail,
                "residue_witness": {"vector": [str(vec[1]), str(vec[2])],
                                    "coefficients": {str(x): repr(c) for x, c in coeffs.items()},
                                    "reproduced": witness_ok},
                "valuation_axioms": {ax: {"passed": r.passed, "checked": r.checked} for ax, r in vals.items()}}


def criterion_9(seed: int = 0) -> SuiteReport:
    return _timed("criterion-9", "real prime", None, _c9, seed)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_acceptance(seed: int = 0) -> list[SuiteReport]:
    return [c(seed) for c in CRITERIA]
