"""Nearest point of the cone to the target: float proposal, exact finish.

The cone is ``{sum t_i F_i + s L_top + u L_one : t >= 0}``, so the proximum
is a nonnegative least-squares problem with two free columns. A float NNLS
run on the lineality-projected ray matrix proposes a support. The exact
side then solves that face, and if the certificate fails it carries on with
Lawson-Hanson pivots in rational arithmetic until it succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

import numpy as np
from scipy.optimize import nnls

from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED, build_target, dot_target, score as score_of
from worst1ps.errors import GcdTrivialCurve, NoOptimum, TooLarge
from worst1ps.exactlin import all_subsets, fmt
from worst1ps.kkt import CornerSet, KktSolution, build, certify, solve_face

NNLS_REL_TOL = 1e-9
MAX_PIVOTS = 10_000


@dataclass
class SearchStats:
    nnls_support: int = 0
    pivots: int = 0
    fallbacks: int = 0
    solves: int = 0


@dataclass(frozen=True)
class ProxResult:
    face: CornerSet
    solution: KktSolution
    score: Fraction
    search_stats: SearchStats = field(compare=False, default_factory=SearchStats)

    @property
    def w(self):
        return self.solution.w.w


def _check_input(sg):
    if sg.is_trivial():
        raise GcdTrivialCurve("the semigroup is all of N; the curve is smooth")


def nnls_proposal(gamma, a):
    """Support of the float NNLS solution, as a corner set."""
    g = np.asarray(gamma, dtype=float)
    N = len(gamma) - 1
    if N < 2:
        return CornerSet()
    target = np.asarray([float(v) for v in a])
    rays = np.maximum(g[1:N, None] - g[None, :], 0.0).T  # column i-1 is F_{gamma_i}
    lin = np.stack([g[N] - g, np.ones(N + 1)], axis=1)
    q, _ = np.linalg.qr(lin)

    def project(m):
        return m - q @ (q.T @ m)

    pr = project(rays)
    norms = np.linalg.norm(pr, axis=0)
    norms[norms == 0] = 1.0
    t, _ = nnls(pr / norms, project(target), maxiter=50 * N)
    t = t / norms
    top = t.max(initial=0.0)
    return CornerSet(tuple(i + 1 for i, v in enumerate(t) if v > NNLS_REL_TOL * top and v > 0))


def _solve(sg, N, corners, variant, stats):
    stats.solves += 1
    return solve_face(build(sg, N, corners, variant))


def _params(sol):
    return {i: sol.x[i - 1] for i in sol.corners}


def _feasible_start(sg, N, corners, variant, stats):
    sol = _solve(sg, N, corners, variant, stats)
    while True:
        bad = [(v, i) for i, v in _params(sol).items() if v < 0]
        if not bad:
            return sol
        _, worst = min(bad)
        stats.fallbacks += 1
        sol = _solve(sg, N, sol.corners.remove(worst), variant, stats)


def lawson_hanson(sg, N, variant, start=(), stats=None):
    """Exact active-set iteration from the face ``start``; returns a certified solution."""
    stats = stats if stats is not None else SearchStats()
    sol = _feasible_start(sg, N, CornerSet.of(start), variant, stats)
    t = _params(sol)
    while True:
        cert = certify(sol)
        if cert.ok:
            return sol
        if stats.pivots >= MAX_PIVOTS:
            raise NoOptimum(f"no certified face after {MAX_PIVOTS} pivots")
        stats.pivots += 1
        mults = sol.multipliers()
        _, enter = min((v, i) for i, v in mults.items())
        face = sol.corners.add(enter)
        t[enter] = Fraction(0)
        z_sol = _solve(sg, N, face, variant, stats)
        while True:
            z = _params(z_sol)
            blocking = [i for i in face if z[i] <= 0]
            if not blocking:
                break
            alpha = min(t[i] / (t[i] - z[i]) for i in blocking)
            t = {i: t[i] + alpha * (z[i] - t[i]) for i in face}
            face = CornerSet(tuple(i for i in face if t[i] > 0))
            t = {i: t[i] for i in face}
            z_sol = _solve(sg, N, face, variant, stats)
        sol = z_sol
        t = _params(sol)


def _finish(sg, N, variant, sol, stats) -> ProxResult:
    cert = certify(sol)
    assert cert.ok
    if cert.smallest_face != sol.corners:
        sol = _solve(sg, N, cert.smallest_face, variant, stats)
    a = sol.system.a
    if all(x == y for x, y in zip(sol.w.w, a)):
        raise NoOptimum("the target already lies in the cone")
    return ProxResult(cert.smallest_face, sol, score_of(a, sol.w), stats)


def prox(sg, N: int, variant=SIMPLIFIED) -> ProxResult:
    """Certified proximum of the target ``a`` on the convex-weight cone."""
    _check_input(sg)
    target = build_target(sg, N, variant)
    stats = SearchStats()
    proposal = nnls_proposal(sg.prefix(N), target.a)
    stats.nnls_support = len(proposal)
    sol = lawson_hanson(sg, N, variant, proposal, stats)
    return _finish(sg, N, variant, sol, stats)


def prox_bruteforce(sg, N: int, variant=SIMPLIFIED, max_corners=None) -> ProxResult:
    """Solve every face and keep the certified ones; independent of :func:`prox`."""
    _check_input(sg)
    top = N - 1 if max_corners is None else min(max_corners, N - 1)
    count = sum(comb(N - 1, k) for k in range(top + 1))
    if count > 2 ** 20:
        raise TooLarge(f"{count} corner sets exceeds the 2^20 enumeration guard")
    build_target(sg, N, variant)
    stats = SearchStats()
    certified = []
    for subset in all_subsets(range(1, N), top):
        sol = _solve(sg, N, subset, variant, stats)
        if certify(sol).ok:
            certified.append(sol)
    if not certified:
        raise NoOptimum(f"no face certifies for {sg} at N={N}")
    points = {s.w.w for s in certified}
    if len(points) != 1:
        raise AssertionError(f"{len(points)} distinct certified optima; the proximum must be unique")
    best = min(certified, key=lambda s: (len(s.corners), s.corners))
    return _finish(sg, N, variant, best, stats)


@dataclass(frozen=True)
class WorstOnePS:
    gamma: tuple
    face: CornerSet
    w: tuple
    w_integer: tuple
    score: Fraction
    mu: Fraction

    def to_json(self):
        return {
            "gamma": list(self.gamma),
            "face": self.face.to_json(),
            "w": [fmt(v) for v in self.w],
            "w_integer": list(self.w_integer),
            "score_squared": fmt(self.score),
            "mu": fmt(self.mu),
        }


def primitive_integer(w):
    """Scale a rational vector to coprime integers with the same direction."""
    den = 1
    for v in w:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in w]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


def worst_one_ps(sg, N: int, variant=UNSIMPLIFIED) -> WorstOnePS:
    res = prox(sg, N, variant)
    w = res.solution.w.w
    a = res.solution.system.a
    return WorstOnePS(
        gamma=tuple(res.solution.w.gamma),
        face=res.face,
        w=w,
        w_integer=primitive_integer(w),
        score=res.score,
        mu=dot_target(a, w),
    )
