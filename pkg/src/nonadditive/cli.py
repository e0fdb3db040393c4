"""Command-line front end.

Every command prints one JSON report on stdout with ``schema_version``,
the command, the seed and a ``status``.  Exit codes: 0 on success, 1 when a
check fails or finds a counterexample, 2 on usage errors (including
malformed JSON input).  ``--format table`` additionally prints a short
human summary on stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import arithplane, betazeta, deltafree, differentials, fincat, genring, rigring, spectra, suites
from ._parallel import ENV_VAR

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    if isinstance(obj, float) or obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return repr(obj)


def _load_json(text: str):
    """Inline JSON, or ``@path`` / an existing file path."""
    if text.startswith("@"):
        text = text[1:]
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# handlers: each returns (passed, result)

def cmd_fring(args):
    if args.action == "presentation":
        r = arithplane.fring_presentation_check(args.target)
        return r["passed"], r
    rig = rigring.rig_from_name(args.rig)
    fr = rigring.MatrixFRing(rig)
    if args.property == "matrix":
        r = rigring.is_matrix_fring(fr, args.bound)
    elif args.property == "tame":
        r = rigring.is_tame(fr, args.bound)
    else:
        r = rigring.commutativity_class(fr, args.property, args.bound)
    return r.passed, {"rig": args.rig, "property": args.property, "passed": r.passed,
                      "checked": r.checked, "detail": r.detail, "witness": _jsonable(r.witness)}


def cmd_genring(args):
    A = genring.get_instance(args.instance)
    if args.action == "witness":
        r = genring.right_linearity_witness(A)
        # finding a failure is the expected outcome for non-commutative instances
        return True, {"instance": A.name, "right_linear": r.passed, "checked": r.checked,
                      "witness": _witness(A, r.witness)}
    axioms = genring.AXIOMS if args.axiom == "all" else [args.axiom]
    rows = {}
    ok = True
    for ax in axioms:
        r = genring.axiom_suite(A, ax, args.samples, args.seed, args.max_size)
        rows[ax] = {"passed": r.passed, "checked": r.checked, "witness": _witness(A, r.witness)}
        ok &= r.passed
    return ok, {"instance": A.name, "samples": args.samples, "max_size": args.max_size, "axioms": rows}


def _witness(A, w):
    if w is None:
        return None

    def conv(v):
        if isinstance(v, genring.GenElement):
            return A.to_json(v)
        if isinstance(v, genring.FiberFamily):
            return {"map": v.fmap.to_json(),
                    "comps": [[fincat._label_to_json(z), A.to_json(c)] for z, c in v.comps]}
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        if isinstance(v, dict):
            return {str(k): conv(x) for k, x in v.items()}
        return _jsonable(v)

    return conv(w)


def cmd_delta(args):
    A = genring.get_instance(args.instance)
    r = deltafree.homomorphism_check(A, args.samples, args.seed, args.max_degree)
    return r["passed"], r


_NAMED_GRAPHS = {"sigma": arithplane.sigma, "sigma-prime": arithplane.sigma_prime}


def _graph(text: str):
    if text in _NAMED_GRAPHS:
        return _NAMED_GRAPHS[text]()
    try:
        return arithplane.graph_from_json(_load_json(text))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad graph {text!r}: {exc}") from exc


def _moves(text: str):
    if text == "core":
        return arithplane.CORE_MOVES
    if text == "all":
        return arithplane.MOVE_FAMILIES
    names = tuple(t.strip() for t in text.split(","))
    bad = [n for n in names if n not in arithplane.MOVE_FAMILIES]
    if bad:
        raise UsageError(f"unknown move families {bad}; choose from {arithplane.MOVE_FAMILIES}")
    return names


def cmd_plane(args):
    if args.action == "search":
        G, H = _graph(args.src), _graph(args.dst)
        r = arithplane.equiv_search(G, H, _moves(args.moves), args.size, args.steps)
        out = r.to_json()
        out["moves"] = list(_moves(args.moves))
        out["size_bound"] = args.size
        out["path_graphs"] = [arithplane.graph_to_json(m.graph) for m in r.path]
        # a completed search is a successful run whatever its verdict
        return True, out
    G = _graph(args.graph)
    if args.action == "neighbors":
        mvs = arithplane.neighbors(G, _moves(args.moves))
        return True, {"count": len(mvs), "neighbors": [m.to_json() for m in mvs]}
    probs = arithplane.problems(G)
    return not probs, {"graph": arithplane.graph_to_json(G), "problems": probs,
                       "nabla": list(arithplane.nabla_graph(G)) if not probs else None,
                       "comb": arithplane.is_comb(G) if not probs else None}


def cmd_spec(args):
    F = spectra.finite_instance(args.instance, args.D)
    if args.action == "report":
        return True, F.report()
    if args.action == "oracle":
        r = spectra.oracle_comparison(F)
        return r["passed"], r
    elems = F.self_adjoint if args.s == "all" else [_element_at(F, args.s)]
    out = {}
    ok = True
    for s in elems:
        r = spectra.structure_sheaf_check(F, s)
        out[json.dumps(F.A.payload_to_json(s))] = r.to_json()
        ok &= r.passed
    return ok, {"instance": F.A.name, "checks": out}


def _element_at(F, text):
    want = _load_json(text)
    want = want if isinstance(want, list) else [want]
    for a in F.A1:
        if F.A.payload_to_json(a) == want:
            return a
    raise UsageError(f"{text!r} is not an element of degree [1]")


def cmd_diff(args):
    if args.action == "normal-form":
        data = _load_json(args.input)
        try:
            t = differentials.DiffSum.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad differential sum: {exc}") from exc
        nf = differentials.normal_form(t)
        return True, {"input": t.to_json(), **nf.to_json()}
    if args.action == "d-plus":
        t = differentials.d_plus(args.n)
        return True, {"n": args.n, "sum": t.to_json(), **differentials.normal_form(t).to_json()}
    if args.action == "relation":
        r = differentials.relation_check(args.name, args.samples, args.mode, args.seed)
        return r["passed"], r
    pib = differentials.pi_boundary_check(args.samples, args.seed)
    rel = differentials.boundary_relations_check()
    return pib["passed"] and rel["passed"], {"pi_boundary": pib, "boundary_of_relations": rel}


def cmd_beta(args):
    place = betazeta.parse_place(args.place)
    if args.action == "check":
        alphas = [_number(a) for a in args.alpha]
        if len(alphas) != args.n:
            raise UsageError("--alpha needs exactly n values")
        rhs = betazeta.B(place, alphas)
        if place == betazeta.ETA:
            method = "mc" if args.mc else "auto"
            est = betazeta.real_beta_integral(args.n, alphas, method, samples=args.mc or 1_000_000,
                                              seed=args.seed)
            delta = est.value - rhs
            tol = max(4 * est.error, 1e-8) if est.method == "mc" else 1e-8
            return abs(delta) <= tol, {"lhs": est.value, "rhs": rhs, "delta": delta, "method": est.method,
                                       "certificate": {"error": est.error, "tolerance": tol,
                                                       "samples": args.mc or None}}
        if args.level:
            lhs, bound = betazeta.padic_beta_lattice(place, args.n, alphas, args.level)
            delta = rhs - lhs
            return 0 <= delta <= bound, {"lhs": lhs, "rhs": rhs, "delta": delta, "method": "lattice",
                                         "certificate": {"level": args.level, "error_bound": bound}}
        lhs = betazeta.padic_beta_integral(place, args.n, alphas)
        return lhs == rhs, {"lhs": lhs, "rhs": rhs, "delta": lhs - rhs, "method": "profile-sum",
                            "certificate": {"exact": True}}
    if args.action == "limit":
        rows = betazeta.limit_series(place, _number(args.s), args.N)
        deltas = [abs(r["delta"]) for r in rows]
        monotone = all(a > b for a, b in zip(deltas, deltas[1:]))
        return monotone, {"series": rows, "monotone": monotone}
    c = betazeta.sslash_integral_check(place, args.n, [int(v) for v in args.y], _number(args.s),
                                       level=args.level or 20, mc=args.mc or 200_000, seed=args.seed)
    cert = c.certificate
    ok = c.passed(tol=max(4 * cert.get("stderr", 0), 2 * cert.get("error", 0), 1e-8))
    return ok, c.to_json()


def _number(text):
    v = Fraction(str(text))
    return int(v) if v.denominator == 1 else float(v)


def cmd_suite(args):
    name = args.name
    if name == "axioms":
        ns = argparse.Namespace(instance=args.instance or "GN", action="axioms", axiom="all",
                                samples=args.samples or 500, seed=args.seed, max_size=3)
        return cmd_genring(ns)
    if name == "acceptance":
        reps = suites.run_acceptance(args.seed)
        for r in reps:
            print(r.line(), file=sys.stderr)
        return all(r.passed for r in reps), {"criteria": [r.to_json() for r in reps]}
    if name.startswith("criterion-"):
        idx = int(name.split("-", 1)[1])
        if not 1 <= idx <= len(suites.CRITERIA):
            raise UsageError(f"no criterion {idx}")
        r = suites.CRITERIA[idx - 1](args.seed)
        return r.passed, r.to_json()
    raise UsageError(f"unknown suite {name!r}")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonadditive", description="Checks for generalized rings and friends.")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--threads", type=int, default=None, help=f"overrides {ENV_VAR}")
    sub = p.add_subparsers(dest="command", required=True)

    def seeded(sp):
        sp.add_argument("--seed", type=int, default=0)
        return sp

    fr = sub.add_parser("fring", help="F-ring checks")
    frs = fr.add_subparsers(dest="action", required=True)
    x = frs.add_parser("presentation")
    x.add_argument("--target", default="GN")
    x = frs.add_parser("check")
    x.add_argument("--rig", default="N")
    x.add_argument("--property", default="matrix",
                   help="matrix, tame, or a commutativity class name")
    x.add_argument("--bound", type=int, default=2)
    for sp in frs.choices.values():
        seeded(sp)

    gr = sub.add_parser("genring", help="generalized-ring axioms")
    grs = gr.add_subparsers(dest="action", required=True)
    x = seeded(grs.add_parser("axioms"))
    x.add_argument("--instance", default="GN")
    x.add_argument("--axiom", default="all", choices=("all",) + genring.AXIOMS)
    x.add_argument("--samples", type=int, default=500)
    x.add_argument("--max-size", type=int, default=3)
    x = seeded(grs.add_parser("witness"))
    x.add_argument("--instance", default="FM:free")

    de = sub.add_parser("delta", help="free instance evaluation")
    des = de.add_subparsers(dest="action", required=True)
    x = seeded(des.add_parser("hom"))
    x.add_argument("--instance", default="GN")
    x.add_argument("--samples", type=int, default=200)
    x.add_argument("--max-degree", type=int, default=3)

    pl = sub.add_parser("plane", help="arithmetical plane graphs")
    pls = pl.add_subparsers(dest="action", required=True)
    x = seeded(pls.add_parser("search"))
    x.add_argument("--from", dest="src", default="sigma")
    x.add_argument("--to", dest="dst", default="sigma-prime")
    x.add_argument("--moves", default="core")
    x.add_argument("--size", type=int, default=8)
    x.add_argument("--steps", type=int, default=None)
    x = seeded(pls.add_parser("neighbors"))
    x.add_argument("--graph", default="sigma")
    x.add_argument("--moves", default="all")
    x = seeded(pls.add_parser("validate"))
    x.add_argument("--graph", default="sigma")

    spc = sub.add_parser("spec", help="ideals, primes and the structure sheaf")
    sps = spc.add_subparsers(dest="action", required=True)
    for name in ("report", "oracle", "sheaf"):
        x = seeded(sps.add_parser(name))
        x.add_argument("--instance", default="GZ/12")
        x.add_argument("--D", type=int, default=3)
        if name == "sheaf":
            x.add_argument("--s", default="all", help="element of degree [1] as JSON, or 'all'")

    df = sub.add_parser("diff", help="differentials")
    dfs = df.add_subparsers(dest="action", required=True)
    x = seeded(dfs.add_parser("normal-form"))
    x.add_argument("--input", required=True, help='JSON {"mode":"N","sum":[[coef,[a,b]],...]} or a file')
    x = seeded(dfs.add_parser("d-plus"))
    x.add_argument("--n", type=int, required=True)
    x = seeded(dfs.add_parser("relation"))
    x.add_argument("--name", required=True, choices=sorted(differentials.RELATIONS))
    x.add_argument("--samples", type=int, default=100)
    x.add_argument("--mode", default="N", choices=differentials.MODES)
    x = seeded(dfs.add_parser("boundary"))
    x.add_argument("--samples", type=int, default=200)

    be = sub.add_parser("beta", help="Beta integrals and zeta factors")
    bes = be.add_subparsers(dest="action", required=True)
    x = seeded(bes.add_parser("check"))
    x.add_argument("--place", required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--alpha", nargs="+", required=True)
    g = x.add_mutually_exclusive_group()
    g.add_argument("--level", type=int, default=None)
    g.add_argument("--mc", type=int, default=None)
    x = seeded(bes.add_parser("limit"))
    x.add_argument("--place", required=True)
    x.add_argument("--s", default="2")
    x.add_argument("--N", type=int, nargs="+", default=[5, 10, 20, 40])
    x = seeded(bes.add_parser("sslash"))
    x.add_argument("--place", required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--y", nargs="+", required=True)
    x.add_argument("--s", default="2")
    g = x.add_mutually_exclusive_group()
    g.add_argument("--level", type=int, default=None)
    g.add_argument("--mc", type=int, default=None)

    su = seeded(sub.add_parser("suite", help="named suites: axioms, acceptance, criterion-<k>"))
    su.add_argument("--name", required=True)
    su.add_argument("--instance", default=None)
    su.add_argument("--samples", type=int, default=None)
    return p


HANDLERS = {"fring": cmd_fring, "genring": cmd_genring, "delta": cmd_delta, "plane": cmd_plane,
            "spec": cmd_spec, "diff": cmd_diff, "beta": cmd_beta, "suite": cmd_suite}


def _table(report: dict) -> str:
    lines = [f"{'command':>10}: {report['command']}", f"{'status':>10}: {report['status']}",
             f"{'seed':>10}: {report['seed']}"]
    for k, v in report["result"].items():
        text = json.dumps(v, sort_keys=True)
        lines.append(f"{k:>10}: {text if len(text) <= 70 else text[:67] + '...'}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None:
        os.environ[ENV_VAR] = str(max(1, args.threads))
    seed = getattr(args, "seed", 0)
    command = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    try:
        passed, result = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": command, "seed": seed,
              "status": "pass" if passed else "fail", "result": _jsonable(result)}
    print(json.dumps(report, sort_keys=True))
    if args.format == "table":
        print(_table(report), file=sys.stderr)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
