"""Command-line front end: ``worst1ps <command> ...``.

Exit status is 0 on success, 2 when no optimum exists (the target already
lies in the cone, or nothing certifies), and 1 for bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from worst1ps.chowpoly import min_pairing
from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED, build_target, dot_target, twice_area_lch
from worst1ps.cusp import cusp_explicit_solution, cusp_report, cusp_table
from worst1ps.errors import CapExceeded, NoOptimum, Worst1psError
from worst1ps.exactlin import fmt
from worst1ps.kkt import CornerSet, build, solve_face
from worst1ps.optimizer import prox, prox_bruteforce, worst_one_ps
from worst1ps.persistence import cramer_polys, eventual_face, identity_checks, sweep
from worst1ps.semigroup import from_generators


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        vals = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be nonnegative")
    return vals


def _jobs(args):
    env = os.environ.get("WORST1PS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"WORST1PS_JOBS must be an integer, got {env!r}")
    if args.jobs is not None:
        return max(1, args.jobs)
    return os.cpu_count() or 1


def _tsv(header, rows):
    lines = ["\t".join(header)]
    lines += ["\t".join(str(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def _semigroup(args):
    if not args.gens:
        raise UsageError("--gens is required")
    return from_generators(args.gens)


def _variant(args):
    return SIMPLIFIED if getattr(args, "simplified", False) else UNSIMPLIFIED


# --- commands -------------------------------------------------------------


def cmd_worst(args):
    sg = _semigroup(args)
    if args.N is None:
        raise UsageError("--N is required")
    res = worst_one_ps(sg, args.N, _variant(args))
    if args.format == "tsv":
        rows = [(i, g, fmt(w)) for i, (g, w) in enumerate(zip(res.gamma, res.w))]
        return _tsv(("i", "gamma", "w"), rows)
    out = {"semigroup": str(sg), "N": args.N, "variant": _variant(args)}
    out.update(res.to_json())
    return _json(out)


def cmd_sweep(args):
    sg = _semigroup(args)
    n_min = args.nmin if args.nmin is not None else max(4, sg.ci + 1)
    n_max = args.nmax
    if n_max is None:
        raise UsageError("--nmax is required")
    if n_max < n_min:
        raise UsageError(f"empty range {n_min}..{n_max}")
    variant = _variant(args)
    try:
        final = eventual_face(sg, variant, max(args.cap, n_max))
    except CapExceeded:
        final = None
    rows = sweep(sg, n_min, n_max, variant, _jobs(args), final)
    if args.format == "json":
        return _json([{"corner_set": r.face.to_json(), "N": r.n_range()} for r in rows])
    return _tsv(("corner_set", "N"), [(str(r.face), r.n_range()) for r in rows])


def cmd_cusp_table(args):
    if args.rmax is None or args.rmax < 1:
        raise UsageError("--rmax must be a positive integer")
    rows = cusp_table(args.rmax, _jobs(args) if args.rmax > 50 else 1)
    if args.format == "json":
        return _json([{"r": r, "j": j, "N0": n} for r, j, n in rows])
    return _tsv(("r", "j", "N0"), rows)


def cmd_cusp(args):
    if args.r is None or args.r < 1:
        raise UsageError("--r must be a positive integer")
    out = cusp_report(args.r).to_json()
    if args.N is not None:
        sol = cusp_explicit_solution(args.r, args.N)
        out["solution"] = sol.to_json()
    return _json(out)


def _verify_brute(sg, N, variant):
    fast = prox(sg, N, variant)
    slow = prox_bruteforce(sg, N, variant)
    ok = fast.face == slow.face and fast.w == slow.w
    return ok, {"face": fast.face.to_json(), "bruteforce_face": slow.face.to_json()}


def _verify_triangulation(sg, N, variant, trials=50, seed=0):
    res = prox(sg, N, variant)
    gamma = sg.prefix(N)
    a = build_target(sg, N, UNSIMPLIFIED).a
    w = res.w
    checks = {}
    if N >= sg.ci + 1:
        # a . w is twice the area only once the last gap is 1
        checks["worst w"] = min_pairing(sg, N, w) == dot_target(a, w)
    rng = random.Random(seed)
    agree = 0
    for _ in range(trials):
        v = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in gamma]
        agree += min_pairing(sg, N, v) == twice_area_lch(v, gamma)
    checks["random w"] = agree == trials
    return all(checks.values()), checks


def _verify_polys(sg, corners):
    checks = identity_checks(sg, corners)
    return all(checks.values()), checks


def cmd_verify(args):
    sg = _semigroup(args)
    variant = _variant(args)
    if args.mode == "polys":
        ok, detail = _verify_polys(sg, args.corners or ())
    else:
        if args.N is None:
            raise UsageError("--N is required")
        if args.mode == "brute":
            ok, detail = _verify_brute(sg, args.N, variant)
        else:
            ok, detail = _verify_triangulation(sg, args.N, variant)
    status = "PASS" if ok else "FAIL"
    if args.format == "tsv":
        rows = [(k, "PASS" if v is True else ("FAIL" if v is False else json.dumps(v))) for k, v in detail.items()]
        return _tsv(("check", "result"), rows + [("overall", status)])
    return _json({"mode": args.mode, "status": status, "checks": detail})


def cmd_semigroup(args):
    sg = _semigroup(args)
    out = sg.to_json()
    out["gaps"] = sg.gaps()
    if args.format == "tsv":
        return _tsv(("key", "value"), [(k, ",".join(map(str, v)) if isinstance(v, list) else v) for k, v in out.items()])
    return _json(out)


def cmd_polys(args):
    sg = _semigroup(args)
    polys = cramer_polys(sg, args.corners or (), args.k)
    out = {"semigroup": str(sg), "corner_set": CornerSet.of(args.corners or ()).to_json()}
    out.update(polys.to_json())
    out["chi_minor"] = [fmt(c) for c in polys.chi_minor]
    out["psi_minor"] = [fmt(c) for c in polys.psi_minor]
    if args.N is not None:
        sol = solve_face(build(sg, args.N, args.corners or (), SIMPLIFIED))
        out["x_at_N"] = [fmt(v) for v in sol.x]
    return _json(out)


# --- parser ---------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="worst1ps", description="Worst 1-PS of monomial curve singularities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="json", n=True, gens=True):
        if gens:
            sp.add_argument("--gens", type=_int_list, help="semigroup generators, e.g. 2,3")
        if n:
            sp.add_argument("--N", type=int)
        sp.add_argument("--simplified", action="store_true", help="use the Simplified target (last entry 2)")
        sp.add_argument("--format", choices=("json", "tsv"), default=fmt_default)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--cap", type=int, default=2000, help="largest N searched for persistence")

    sp = sub.add_parser("worst", help="worst 1-PS at one N")
    common(sp)
    sp.set_defaults(func=cmd_worst)

    sp = sub.add_parser("sweep", help="optimal face for a range of N")
    common(sp, "tsv", n=False)
    sp.add_argument("--nmin", type=int)
    sp.add_argument("--nmax", type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("cusp-table", help="(r, j, N0) for the cusps <2, 2r+1>")
    common(sp, "tsv", n=False, gens=False)
    sp.add_argument("--rmax", type=int, default=15)
    sp.set_defaults(func=cmd_cusp_table)

    sp = sub.add_parser("cusp", help="closed-form data for one cusp")
    common(sp, gens=False)
    sp.add_argument("--r", type=int)
    sp.set_defaults(func=cmd_cusp)

    sp = sub.add_parser("verify", help="cross-check against an independent route")
    common(sp)
    sp.add_argument("--mode", choices=("brute", "triangulation", "polys"), default="brute")
    sp.add_argument("-I", "--corners", type=_int_list, default=())
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("semigroup", help="elements, conductor and genus")
    common(sp, n=False)
    sp.set_defaults(func=cmd_semigroup)

    sp = sub.add_parser("polys", help="Cramer polynomials for a corner set")
    common(sp)
    sp.add_argument("-I", "--corners", type=_int_list, default=())
    sp.add_argument("--k", type=int, default=None, help="expansion point")
    sp.set_defaults(func=cmd_polys)
    return p


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        text = args.func(args)
    except NoOptimum as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, Worst1psError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
