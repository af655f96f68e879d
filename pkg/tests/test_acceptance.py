"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) and
then asserts, so a failing criterion also fails the suite.
"""

import io
import os
import random
import time
from fractions import Fraction as F
from itertools import combinations
from math import gcd

import pytest

from worst1ps import cli
from worst1ps.chowpoly import min_pairing
from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED, twice_area_lch
from worst1ps.cusp import alpha_two_value_check, cusp_explicit_solution, cusp_report
from worst1ps.errors import BadCornerIndex, NoOptimum, NTooSmall
from worst1ps.kkt import CornerSet, build, certify, solve_face
from worst1ps.optimizer import prox, prox_bruteforce
from worst1ps.persistence import (
    compute_N0,
    cramer_polys,
    eventual_face,
    identity_checks,
    sweep,
    tail_b,
    tail_m,
    unsimplified_from_persistent,
)
from worst1ps.semigroup import cusp, from_generators, semigroups_of_genus

JOBS = os.cpu_count() or 1

FACE_TABLE = {
    (2, 3): (4, 200, [
        ("{}", "4<=N<=15"), ("{4}", "16<=N<=28"), ("{4,5}", "29<=N<=74"), ("{5}", "75<=N<=145"), ("{5,6}", "146<=N"),
    ]),
    (2, 5): (4, 150, [
        ("{}", "4<=N<=11"), ("{5}", "12<=N<=18"), ("{5,6}", "19<=N<=69"), ("{6}", "70<=N<=117"), ("{6,7}", "118<=N"),
    ]),
    (4, 9): (4, 150, [
        ("{}", "4<=N<=13"), ("{7}", "14<=N<=18"), ("{7,8}", "N=19"), ("{7,8,10}", "N=20"), ("{7,10}", "N=21"),
        ("{7,10,14}", "22<=N<=23"), ("{7,10,14,15}", "24<=N<=27"), ("{7,10,15}", "28<=N<=45"),
        ("{7,8,10,15,16}", "46<=N"),
    ]),
    (5, 7): (13, 150, [
        ("{9}", "13<=N<=15"), ("{6,9}", "N=16"), ("{9}", "17<=N<=23"), ("{9,15}", "24<=N<=34"),
        ("{9,15,16}", "35<=N<=83"), ("{9,16}", "84<=N<=127"), ("{9,16,17}", "128<=N"),
    ]),
    (8, 13): (43, 150, [
        ("{6,11,19,26}", "43<=N<=55"), ("{6,11,26}", "56<=N<=58"), ("{6,11,26,37}", "59<=N<=60"),
        ("{6,11,26,38}", "61<=N<=63"), ("{6,11,26,38,47}", "64<=N<=67"), ("{6,11,26,38,47,48}", "68<=N<=70"),
        ("{6,11,26,38,48}", "71<=N<=85"), ("{6,11,26,38,48,49}", "86<=N<=112"), ("{6,11,26,38,49}", "113<=N<=139"),
        ("{6,11,26,38,49,50}", "140<=N"),
    ]),
}

CUSP_TABLE = [
    (1, 5, 146), (2, 6, 118), (3, 7, 30), (4, 9, 53), (5, 11, 174), (6, 12, 37), (7, 14, 55), (8, 16, 107),
    (9, 18, 8369), (10, 19, 58), (11, 21, 88), (12, 23, 200), (13, 24, 61), (14, 26, 82), (15, 28, 131),
]

SMALL_PAIRS = [(a, b) for a in range(2, 10) for b in range(a + 1, 10) if gcd(a, b) == 1]


def test_criterion_1_face_sweeps(report):
    bad = []
    for gens, (lo, hi, rows) in FACE_TABLE.items():
        sg = from_generators(gens)
        got = [(str(r.face), r.n_range()) for r in sweep(sg, lo, hi, UNSIMPLIFIED, JOBS, eventual_face(sg))]
        if got != rows:
            bad.append((gens, got))
    report("criterion 1", not bad, "five face tables exact" if not bad else f"mismatch {bad}")
    assert not bad


def test_criterion_2_cusp_table(report):
    out = io.StringIO()
    start = time.perf_counter()
    code = cli.main(["cusp-table", "--rmax", "15"], stdout=out)
    per_row = (time.perf_counter() - start) / 15
    lines = out.getvalue().splitlines()
    expected = ["r\tj\tN0"] + [f"{r}\t{j}\t{n}" for r, j, n in CUSP_TABLE]
    ok = code == 0 and lines == expected and per_row < 1.0
    report("criterion 2", ok, f"15 rows, {per_row * 1000:.1f} ms per row")
    assert ok


def test_criterion_3_cusp_weights(report):
    res = prox(from_generators([2, 3]), 10, SIMPLIFIED)
    want = (F(33, 14), F(157, 70), F(153, 70), F(149, 70), F(29, 14), F(141, 70), 2, 2, 2, 2, 2)
    ok = res.w == want
    report("criterion 3", ok, f"face {res.face}")
    assert ok


def test_criterion_4_sentinel(report):
    sg = from_generators([2, 19])
    heralding = solve_face(build(sg, 19, (18,), SIMPLIFIED))
    persistent = solve_face(build(sg, 20, (18, 19), SIMPLIFIED))
    with pytest.raises(BadCornerIndex):
        build(sg, 19, (18, 19), SIMPLIFIED)
    ok = heralding.xi(19) == F(1, 4175) and persistent.xi(19) == F(1, 4175)
    report("criterion 4", ok, "x_19 = 1/4175 at N=19 on {18} and N=20 on {18,19}; literal N=19,{18,19} rejected")
    assert ok


def _outcome(fn, sg, N, variant):
    try:
        r = fn(sg, N, variant)
    except NoOptimum:
        return ("none",)
    return ("ok", r.face, r.w)


def test_criterion_5_oracle_equivalence(report):
    start = time.perf_counter()
    checked, bad = 0, []
    for a, b in SMALL_PAIRS:
        sg = from_generators([a, b])
        for variant in (SIMPLIFIED, UNSIMPLIFIED):
            lo = sg.ci + 1 if variant == SIMPLIFIED else 2
            for N in range(max(lo, 2), 14):
                checked += 1
                if _outcome(prox, sg, N, variant) != _outcome(prox_bruteforce, sg, N, variant):
                    bad.append((a, b, N, variant))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed <= 600
    report("criterion 5", ok, f"{checked} instances, {len(bad)} mismatches, {elapsed:.0f} s")
    assert ok


def test_criterion_6_triangulation_oracle(report):
    rng = random.Random(20240601)
    checked, bad = 0, 0
    for a, b in SMALL_PAIRS:
        sg = from_generators([a, b])
        for N in range(2, 13):
            gamma = sg.prefix(N)
            for _ in range(50):
                w = [F(rng.randint(-30, 30), rng.randint(1, 6)) for _ in gamma]
                checked += 1
                bad += min_pairing(sg, N, w) != twice_area_lch(w, gamma)
    ok = bad == 0
    report("criterion 6", ok, f"{checked} random weight vectors")
    assert ok


def test_criterion_7_polynomial_identities(report):
    checked, failures = 0, []
    for g in range(9):
        for sg in semigroups_of_genus(g):
            for size in range(4):
                for I in combinations(range(1, sg.ci + 3), size):
                    checks = identity_checks(sg, I, cramer_polys(sg, I))
                    checked += 1
                    if not all(checks.values()):
                        failures.append((sg.generators, I, [k for k, v in checks.items() if not v]))
    ok = not failures
    report("criterion 7", ok, f"{checked} (semigroup, corner set) pairs, {len(failures)} failures")
    assert ok


def _tail_head_check(gens):
    sg = from_generators(gens)
    rep = compute_N0(sg, 400)
    heads, ok = [], True
    for N in (rep.N0, rep.N0 + 1, rep.N0 + 37):
        res = prox(sg, N, UNSIMPLIFIED)
        ok &= res.face == rep.I
        w = res.w
        ok &= all(w[i] == tail_m(N, rep.ell) * i + tail_b(N, rep.ell) for i in range(rep.ell, N + 1))
        heads.append(w[: rep.ell])
    return ok and heads[0] == heads[1] == heads[2], rep


def test_criterion_8_tail_line(report):
    results = {g: _tail_head_check(g) for g in ((2, 3), (2, 5))}
    ok = all(v[0] for v in results.values())
    report("criterion 8", ok, ", ".join(f"<{g[0]},{g[1]}> N0={v[1].N0}" for g, v in results.items()))
    assert ok


def test_criterion_9_persistent_construction(report):
    ok = True
    for gens in ([2, 3], [2, 5]):
        sg = from_generators(gens)
        rep = compute_N0(sg, 400)
        for N in (rep.N0, rep.N0 + 1, rep.N0 + 37):
            sol = unsimplified_from_persistent(sg, rep.I_simp, N)
            ok &= all(v == 0 for v in sol.system.residual(sol.x))
            cert = certify(sol)
            ok &= cert.ok and cert.smallest_face == rep.I
    report("criterion 9", ok, "exact residual and certificate at N0, N0+1, N0+37")
    assert ok


def test_criterion_10_cusp_closed_form(report):
    ok = True
    for r in (1, 2, 3):
        j = cusp_report(r).j
        for N in range(j + 2, j + 7):
            sol = cusp_explicit_solution(r, N)
            res = prox(cusp(r), N, SIMPLIFIED)
            ok &= sol.x == res.solution.x and res.face == CornerSet((j, j + 1))
    report("criterion 10", ok, "r = 1, 2, 3 at five N each")
    assert ok


@pytest.mark.xfail(strict=True, reason="r = 2 is a third exception; see the cusp tests")
def test_alpha_exceptions_note(report):
    found = alpha_two_value_check(10**5).exceptions
    ok = found == (1, 9)
    report("note alpha exceptions", ok, f"exceptions up to 1e5 are {found}, expected (1, 9)")
    assert ok
