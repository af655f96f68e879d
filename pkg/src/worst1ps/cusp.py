"""Closed forms for the cusps ``<2, 2r+1>``.

The optimal face for large N is ``{j, j+1}`` where ``j`` is the ceiling of
the unique positive root of a cubic ``f(r, x)``. Everything here is exact:
``j`` comes from the sign change of ``f`` at consecutive integers, the
threshold ``N0`` from a rational formula, and the comparisons with
``sqrt(3)`` are done on squared integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

from worst1ps.cone import SIMPLIFIED
from worst1ps.errors import BadR, NTooSmall
from worst1ps.exactlin import RatPoly, count_roots, fmt, positive_root_interval
from worst1ps.kkt import KktSolution, build, certify, solution_from_x
from worst1ps.semigroup import cusp


def f_poly(r) -> RatPoly:
    """The cubic ``f(r, x)`` as a polynomial in x."""
    return RatPoly([-(30 * r**3 + 18 * r**2), -(12 * r**3 + 6 * r**2 + 4 * r + 4), 6 * r - 6, 4 * r - 2])


def f_value(r, x):
    return (4 * r - 2) * x**3 + (6 * r - 6) * x**2 - (12 * r**3 + 6 * r**2 + 4 * r + 4) * x - (30 * r**3 + 18 * r**2)


def h_value(r, j):
    return j**4 + 4 * j**3 + (6 * r**2 + 6 * r + 5) * j**2 + (12 * r**2 + 12 * r + 2) * j - 3 * r**4 - 6 * r**3 + 3 * r**2 + 6 * r


def n0_denominator(r, j):
    return (-2 * r + 1) * j**3 + 3 * r * j**2 + (6 * r**3 + 3 * r**2 + 2 * r - 1) * j + 9 * r**3 + 6 * r**2 - 3 * r


def _check_r(r):
    if not isinstance(r, int) or r < 1:
        raise BadR(f"r must be a positive integer, got {r!r}")


def smaller_candidate(r) -> int:
    """Least integer k with ``k >= sqrt(3) r + (sqrt(3) + 1)/2``.

    The condition is ``2k - 1 >= sqrt(3) (2r + 1)``, and ``3 (2r+1)^2`` is
    never a square, so k is found from an integer square root and then
    confirmed by comparing squares.
    """
    t = 3 * (2 * r + 1) ** 2
    k = (isqrt(t) + 3) // 2
    assert (2 * k - 1) ** 2 > t and (2 * k - 3) ** 2 < t
    return k


def j_of(r) -> int:
    """``ceil(alpha(r))``: the integer j with ``f(r, j-1) < 0 < f(r, j)``."""
    k = smaller_candidate(r)
    for j in (k, k + 1):
        if f_value(r, j - 1) < 0 < f_value(r, j):
            return j
    # the two-value claim failed; locate the sign change directly
    j = 1
    while f_value(r, j) <= 0:
        j += 1
    return j


def n0_formula(r, j) -> int:
    """Smallest integer strictly greater than ``j + h / D``."""
    q = j + Fraction(h_value(r, j), n0_denominator(r, j))
    return floor(q) + 1


@dataclass(frozen=True)
class CuspReport:
    r: int
    f: RatPoly
    alpha_interval: tuple
    j: int
    N0: int
    m1: Fraction
    b1: Fraction
    h: int
    x_j: Fraction
    x_j1: Fraction

    @property
    def face(self):
        return (self.j, self.j + 1)

    def to_json(self):
        return {
            "r": self.r,
            "f": str(self.f),
            "alpha_interval": [fmt(v) for v in self.alpha_interval],
            "j": self.j,
            "N0": self.N0,
            "m1": fmt(self.m1),
            "b1": fmt(self.b1),
            "h": self.h,
            "x_j": fmt(self.x_j),
            "x_j+1": fmt(self.x_j1),
        }


def cusp_report(r: int) -> CuspReport:
    _check_r(r)
    f = f_poly(r)
    if count_roots(f, 0, None) != 1:
        raise AssertionError(f"f(r={r}, x) does not have exactly one positive root")
    j = j_of(r)
    lo, hi = positive_root_interval(f, Fraction(1, 2**20))
    if not j - 1 < hi and lo < j:
        raise AssertionError("root interval disagrees with the sign change")
    h = h_value(r, j)
    xj = Fraction(f_value(r, j), h)
    xj1 = Fraction(-f_value(r, j - 1), h)
    N0 = n0_formula(r, j)
    # the same threshold read off the persistent solution: floor(l + 2/x_l), l = j + 1
    if N0 != floor(j + 1 + 2 / xj1):
        raise AssertionError(f"N0 formula {N0} disagrees with floor(l + 2/x_l)")
    m1 = -xj - xj1
    b1 = (j + r) * (xj + xj1) + 2 + xj1
    return CuspReport(r, f, (lo, hi), j, N0, m1, b1, h, xj, xj1)


def regression_m1_b1(r, j):
    """``m1`` and ``b1`` as the rational functions of (r, j) obtained by fitting."""
    h = h_value(r, j)
    m1 = Fraction(6 * ((-2 * r + 1) * j**2 + j + 2 * r**3 + r**2 + r), h)
    b1 = Fraction(
        2 * (j**4 + (4 * r + 2) * j**3 + (12 * r**2 + 6 * r + 2) * j**2 + (12 * r**2 + 8 * r + 1) * j - 9 * r**4 + 6 * r**2 + 3 * r),
        h,
    )
    return m1, b1


def explicit_x(r, N, report: CuspReport | None = None):
    """The closed-form vector ``x_1..x_{N+1}`` on the face ``{j, j+1}``."""
    rep = report or cusp_report(r)
    j, xj, xj1, m1, b1 = rep.j, rep.x_j, rep.x_j1, rep.m1, rep.b1
    if N < j + 2:
        raise NTooSmall(f"N={N} < j+2={j + 2}")
    x = [Fraction(0)] * (N + 1)
    for k in range(1, r):
        x[k - 1] = Fraction((k - 1) * k * (k + 1), 3) * m1 + Fraction(k * (k + 1), 2) * b1 - 2 * k * k
    x[r - 1] = Fraction((j - r) * (j - r + 1), 6) * ((j - r - 1) * xj + (j - r + 2) * xj1)
    for k in range(r + 1, j):
        x[k - 1] = Fraction((j - k) * (j - k + 1), 3) * ((j - k - 1) * xj + (j - k + 2) * xj1)
    x[j - 1] = xj
    x[j] = xj1
    x[N] = Fraction(2)
    return x


def cusp_explicit_solution(r: int, N: int) -> KktSolution:
    """Simplified KKT solution for ``<2, 2r+1>`` on ``{j, j+1}``, checked exactly."""
    _check_r(r)
    rep = cusp_report(r)
    x = explicit_x(r, N, rep)
    sol = solution_from_x(build(cusp(r), N, rep.face, SIMPLIFIED), x)
    if any(v < 0 for v in x[: N - 1]) or x[rep.j - 1] <= 0 or x[rep.j] <= 0:
        raise AssertionError(f"closed-form x for r={r}, N={N} has the wrong signs")
    assert certify(sol).ok
    return sol


@dataclass(frozen=True)
class AlphaCheck:
    r_max: int
    exceptions: tuple
    larger_count: int

    def to_json(self):
        return {"r_max": self.r_max, "exceptions": list(self.exceptions)}


def alpha_two_value_check(r_max: int = 10**5) -> AlphaCheck:
    """For r = 1..r_max, record where j is not the smaller candidate.

    Raises if j is neither candidate.
    """
    if r_max < 1:
        raise BadR("r_max must be at least 1")
    exceptions = []
    for r in range(1, r_max + 1):
        k = smaller_candidate(r)
        if f_value(r, k - 1) < 0 < f_value(r, k):
            continue
        if f_value(r, k) < 0 < f_value(r, k + 1):
            exceptions.append(r)
            continue
        raise AssertionError(f"r={r}: j is neither {k} nor {k + 1}")
    return AlphaCheck(r_max, tuple(exceptions), len(exceptions))


def regression_sums(r, j):
    """Closed forms of the sums over ``i = 0..j`` used in the line fit of the head.

    Returns a dict keyed like :func:`direct_sums`.
    """
    return {
        "n": j + 1,
        "sum g w": (r + j) * (r + j + 1),
        "sum g": Fraction(j * j + 2 * j * r + j - r * r + r, 2),
        "sum w": 2 * j + 2 * r + 1,
        "sum g^2": -(r**3) + r * r * j + r * j * j + Fraction(j**3, 3) + Fraction(r * r, 2) + r * j
        + Fraction(j * j, 2) + Fraction(r, 2) + Fraction(j, 6),
    }


def direct_sums(r, j):
    """The same sums by summing over the semigroup prefix and the target."""
    from worst1ps.cone import target_values

    gamma = cusp(r).prefix(j + 1)
    a = target_values(gamma, SIMPLIFIED)
    g, w = gamma[: j + 1], a[: j + 1]
    return {
        "n": j + 1,
        "sum g w": sum(x * y for x, y in zip(g, w)),
        "sum g": sum(g),
        "sum w": sum(w),
        "sum g^2": sum(x * x for x in g),
    }


def cusp_table(r_max: int, jobs: int = 1):
    """Rows ``(r, j, N0)`` for r = 1..r_max."""
    if r_max < 1:
        raise BadR("r_max must be at least 1")
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(cusp_report, range(1, r_max + 1)))
    else:
        reports = [cusp_report(r) for r in range(1, r_max + 1)]
    return [(rep.r, rep.j, rep.N0) for rep in reports]
