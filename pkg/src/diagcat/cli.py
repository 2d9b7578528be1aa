"""Command-line entry point: ``diagcat <command> [options]``.

Every command prints one JSON report on stdout. Exit status is 0 when the
verdict holds, 1 when it does not, and 2 when the input cannot be used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import io
from .diagram import validate_diagram, validate_graded, validate_representation
from .field import format_scalar, parse_scalar
from .linalg import Matrix

EXIT_OK, EXIT_FALSE, EXIT_FAULT = 0, 1, 2


class _Fault(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("DIAGCAT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise _Fault(f"DIAGCAT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise _Fault(f"DIAGCAT_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(fn, items) -> list:
    """Run independent checks, concurrently when DIAGCAT_THREADS > 1; order is kept."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, Matrix):
        return io.emit_matrix(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- input helpers -------------------------------------------------------------

def _diagram(args):
    D, reps, P = io.parse_diagram(io.load_json(args.input))
    if not reps:
        raise _Fault("the document has no representations")
    return D, reps, P


def _subset(D, text, what="F"):
    if text is None:
        return D.sorted_vertices()
    F = [v for v in (s.strip() for s in text.split(",")) if v]
    unknown = [v for v in F if v not in D.vertices]
    if unknown:
        raise _Fault(f"--{what}: unknown vertices {', '.join(unknown)}")
    return sorted(set(F))


def _rep(reps, k):
    if not 0 <= k < len(reps):
        raise _Fault(f"representation index {k} out of range (document has {len(reps)})")
    return reps[k]


def _pair(reps, text):
    if text is None:
        return reps[0], reps[1] if len(reps) > 1 else reps[0]
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise _Fault(f"--reps expects two indices like 0,1, got {text!r}") from None
    return _rep(reps, a), _rep(reps, b)


def _minpoly(text):
    if text is None:
        return None
    try:
        return [parse_scalar(s.strip()) for s in text.split(",")]
    except ValueError as exc:
        raise _Fault(f"--minpoly: {exc}") from None


def _graded(reps, P, k):
    from .diagram import GradedRepresentation
    if P is None:
        raise _Fault("the document has no product structure")
    T = _rep(reps, k)
    if not isinstance(T, GradedRepresentation):
        raise _Fault(f"representation {k} carries no tau matrices")
    return T


# -- commands --------------------------------------------------------------------

def cmd_validate(args):
    doc = io.load_json(args.input)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == "diagcat/torsor":
        from .torsor import check_torsor
        r = check_torsor(io.parse_torsor(doc))
        return r.ok, r.to_dict()
    if fmt == "diagcat/complex":
        from .simplicial import cochain_complex
        X, Y, cover = io.parse_complex(doc)
        C = cochain_complex(X, Y)
        return C.is_complex(), {"ok": C.is_complex(), "dims": list(C.dims)}
    if fmt == "diagcat/pairing":
        from .rigidity import perfect_duality_check
        A, pts = io.parse_pairing(doc)
        return True, {"ok": True, "size": A.rows, "perfect": perfect_duality_check(A),
                      "points": len(pts)}
    if fmt == "diagcat/monoid":
        mats, gens = io.parse_monoid(doc)
        return True, {"ok": True, "count": len(mats), "generators": gens}
    D, reps, P = io.parse_diagram(doc)
    rd = validate_diagram(D)
    rr = _map(lambda T: validate_representation(D, T), reps)
    out = {"diagram": rd.to_dict(), "representations": [r.to_dict() for r in rr]}
    ok = rd.ok and all(r.ok for r in rr)
    if P is not None:
        rg = _map(lambda T: validate_graded(D, P, T, sign_rule=args.sign_rule,
                                            total=not args.partial), reps)
        out["graded"] = [r.to_dict() for r in rg]
        ok = ok and all(r.ok for r in rg)
    return ok, {"ok": ok, **out}


def cmd_endo(args):
    from .endo import end_algebra
    D, reps, _ = _diagram(args)
    T = _rep(reps, args.rep)
    F = _subset(D, args.F)
    E = end_algebra(D, T, F)
    ok = E.satisfies_constraints(D, T, T) and E.is_associative()
    d = E.to_dict()
    d["unit"] = [format_scalar(x) for x in E.unit]
    d["structure_constants"] = [[i, j, l, format_scalar(c)]
                                for (i, j), row in sorted(E.mult.items())
                                for l, c in sorted(row.items())]
    return ok, {"ok": ok, **d}


def cmd_coalgebra(args):
    from .endo import coalgebra
    D, reps, _ = _diagram(args)
    C = coalgebra(D, _rep(reps, args.rep), _subset(D, args.F))
    ok = C.is_coassociative() and C.is_counital()
    return ok, {"ok": ok, "coassociative": C.is_coassociative(),
                "counital": C.is_counital(), **C.to_dict()}


def cmd_bialgebra(args):
    from .bialgebra import bialgebra
    D, reps, P = _diagram(args)
    T = _graded(reps, P, args.rep)
    r = bialgebra(D, P, T, _subset(D, args.F), _subset(D, args.F_big, "F-big"))
    return r.ok, r.to_dict()


def cmd_localize(args):
    from .localization import localization_report
    D, reps, P = _diagram(args)
    T = _graded(reps, P, args.rep)
    if args.f0 not in D.vertices:
        raise _Fault(f"--f0: unknown vertex {args.f0!r}")
    r = localization_report(D, P, T, args.f0, args.N)
    return r.ok, r.to_dict()


def cmd_hom(args):
    from .endo import intertwiners
    D, reps, _ = _diagram(args)
    T1, T2 = _pair(reps, args.reps)
    H = intertwiners(D, T1, T2, _subset(D, args.F))
    ok = H.satisfies_constraints(D, T1, T2)
    return ok, {"ok": ok, **H.to_dict()}


def cmd_periods(args):
    from .periods import coactions, period_space
    D, reps, _ = _diagram(args)
    T1, T2 = _pair(reps, args.reps)
    F = _subset(D, args.F)
    PS = period_space(D, T1, T2, F)
    co = coactions(D, T1, T2, F)
    return co.ok, {"ok": co.ok, **PS.to_dict(), "coactions": co.to_dict()}


def cmd_psi(args):
    from .periods import psi
    D, reps, _ = _diagram(args)
    T1, T2 = _pair(reps, args.reps)
    r = psi(D, T1, T2, _subset(D, args.F))
    return r.bijective, r.to_dict()


def cmd_torsor(args):
    from .torsor import check_torsor, gl_group, gr_group, group_at
    X = io.parse_torsor(io.load_json(args.input))
    chk = check_torsor(X)
    out = {"ok": chk.ok, **chk.to_dict()}
    if not chk.ok:
        return False, out
    bases = _map(lambda e: group_at(X, e)[1], range(X.n))
    (_, rl), (_, rr) = _map(lambda f: f(X), [gl_group, gr_group])
    ok = all(r.ok for r in bases) and rl.ok and rr.ok
    out.update({"ok": ok, "groups_at": [r.to_dict() for r in bases], "left": rl.to_dict(),
                "right": rr.to_dict()})
    return ok, out


def cmd_matrix_torsor(args):
    from .torsor import matrix_torsor_check
    D, reps, _ = _diagram(args)
    T1, T2 = _pair(reps, args.reps)
    r = matrix_torsor_check(D, T1, T2, _subset(D, args.F), samples=args.samples,
                            minpoly=_minpoly(args.minpoly), seed=args.seed)
    return r.ok, r.to_dict()


def cmd_rigidity(args):
    from .rigidity import (distinct_equations, is_isometry, isometry_equations,
                           isometry_inverse, perfect_duality_check, sample_isometries)
    A, points = io.parse_pairing(io.load_json(args.input))
    perfect = perfect_duality_check(A)
    out = {"perfect": perfect}
    if not perfect:
        return False, {"ok": False, **out}
    eqs = isometry_equations(A)
    out["equations"] = [p.to_dict() for p in eqs]
    out["distinct"] = len(distinct_equations(eqs))
    try:
        sampled = sample_isometries(A, args.samples, seed=args.seed)
    except ValueError:
        sampled = []
    I = Matrix.identity(A.rows)

    def check(X):
        iso = is_isometry(A, X)
        Y = isometry_inverse(A, X)
        inv = Y @ X == I and X @ Y == I
        return {"X": io.emit_matrix(X), "isometry": iso, "Y": io.emit_matrix(Y),
                "two_sided_inverse": inv, "ok": (not iso) or inv}

    given = _map(check, points)
    drawn = _map(check, sampled)
    ok = all(g["isometry"] and g["ok"] for g in given) and all(g["ok"] for g in drawn)
    out.update({"points": given, "samples": len(drawn),
                "samples_ok": all(g["ok"] for g in drawn)})
    return ok, {"ok": ok, **out}


def cmd_monoid(args):
    from .rigidity import generate_monoid, monoid_is_group
    mats, gens = io.parse_monoid(io.load_json(args.input))
    M = generate_monoid(mats, args.limit) if gens else mats
    r = monoid_is_group(M)
    return r.ok, {**r.to_dict(), "elements": [io.emit_matrix(m) for m in M]}


def cmd_cohomology(args):
    from .simplicial import cochain_complex, skeletal_filtration
    X, Y, _ = io.parse_complex(io.load_json(args.input))
    C = cochain_complex(X, Y)
    betti = C.betti_numbers()
    nonzero = [i for i, b in betti.items() if b]
    euler = sum((-1) ** i * b for i, b in betti.items())
    _, filt = skeletal_filtration(X)
    ok = C.is_complex() and euler == C.euler()
    return ok, {"ok": ok, "dims": {str(i): b for i, b in betti.items()},
                "good_degree": nonzero[0] if len(nonzero) == 1 else
                (None if nonzero else "any"), "euler": euler,
                "skeleta_good": filt.ok}


def cmd_cech(args):
    from .simplicial import cech_total_complex, cochain_complex
    X, _, cover = io.parse_complex(io.load_json(args.input))
    if not cover:
        raise _Fault("the document has no cover")
    T = cech_total_complex(X, cover)
    direct = cochain_complex(X).betti_numbers()
    total = T.betti_numbers()
    top = max(list(direct) + list(total))
    agree = all(direct.get(i, 0) == total.get(i, 0) for i in range(top + 1))
    ok = T.is_complex() and agree
    return ok, {"ok": ok, "total_dims": list(T.dims),
                "cech": {str(i): b for i, b in total.items()},
                "direct": {str(i): b for i, b in direct.items()}}


def cmd_filtration(args):
    from .simplicial import cochain_complex, filtration_complex, skeletal_filtration
    X, _, _ = io.parse_complex(io.load_json(args.input))
    steps, rep = skeletal_filtration(X)
    C = filtration_complex(X, steps)
    direct = cochain_complex(X).betti_numbers()
    filt = C.betti_numbers()
    top = max(list(direct) + list(filt))
    agree = all(direct.get(i, 0) == filt.get(i, 0) for i in range(top + 1))
    ok = rep.ok and C.is_complex() and agree
    return ok, {"ok": ok, "steps": len(steps), "terms": list(C.dims),
                "filtration": {str(i): b for i, b in filt.items()},
                "direct": {str(i): b for i, b in direct.items()}}


def cmd_fixture(args):
    from .fixtures import fixture_document, fixture_names
    if args.list or not args.name:
        return True, {"ok": True, "fixtures": fixture_names()}
    try:
        doc = fixture_document(args.name)
    except KeyError as exc:
        raise _Fault(exc.args[0]) from None
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        return True, {"ok": True, "written": args.output}
    return True, doc


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diagcat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, rep=False, pair=False, subset=False):
        sp = sub.add_parser(name, help=help)
        if name != "fixture":
            sp.add_argument("input", help="JSON document ('-' reads stdin)")
        if rep:
            sp.add_argument("--rep", type=int, default=0, help="representation index")
        if pair:
            sp.add_argument("--reps", help="two representation indices, default 0,1")
        if subset:
            sp.add_argument("--F", help="comma-separated vertices (default: all)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("validate", cmd_validate, "check a document's invariants")
    sp.add_argument("--sign-rule", choices=["degree", "koszul"], default="degree")
    sp.add_argument("--partial", action="store_true", help="allow a partial product table")
    add("endo", cmd_endo, "endomorphism algebra End(T|F)", rep=True, subset=True)
    add("coalgebra", cmd_coalgebra, "the dual coalgebra A(F,T)", rep=True, subset=True)
    sp = add("bialgebra", cmd_bialgebra, "comultiplication from the product", rep=True,
             subset=True)
    sp.add_argument("--F-big", dest="F_big", help="vertices containing all products of F")
    sp = add("localize", cmd_localize, "truncated localization at f0", rep=True)
    sp.add_argument("--f0", required=True)
    sp.add_argument("--N", type=int, default=1)
    add("hom", cmd_hom, "intertwiners Hom(T1|F, T2|F)", pair=True, subset=True)
    add("periods", cmd_periods, "period space and its coactions", pair=True, subset=True)
    add("psi-check", cmd_psi, "compare periods with dual intertwiners", pair=True, subset=True)
    add("torsor-check", cmd_torsor, "torsor axioms and the groups they define")
    sp = add("matrix-torsor", cmd_matrix_torsor, "ternary operation on intertwiners",
             pair=True, subset=True)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--minpoly", help="monic minimal polynomial, low degree first: -2,0,1")
    sp.add_argument("--seed", type=int, default=0)
    sp = add("rigidity", cmd_rigidity, "isometry equations of a pairing")
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("monoid-group", cmd_monoid, "finite monoid of invertible matrices is a group")
    sp.add_argument("--limit", type=int, default=24)
    add("cohomology", cmd_cohomology, "relative simplicial cohomology")
    add("cech", cmd_cech, "Cech total complex against direct cohomology")
    add("filtration", cmd_filtration, "skeletal filtration complex against direct cohomology")
    sp = add("fixture", cmd_fixture, "print a bundled fixture document")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("-o", "--output")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads()
        ok, report = args.func(args)
    except (io.InputError, _Fault) as exc:
        print(json.dumps({"ok": False, "error": str(exc)}), file=sys.stdout)
        print(f"diagcat: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except (ValueError, KeyError, ArithmeticError) as exc:
        msg = exc.args[0] if exc.args else type(exc).__name__
        print(json.dumps({"ok": False, "error": str(msg)}), file=sys.stdout)
        print(f"diagcat: {msg}", file=sys.stderr)
        return EXIT_FAULT
    json.dump(report, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")
    return EXIT_OK if ok else EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
