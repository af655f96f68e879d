"""Cramer polynomials of the KKT system, the threshold nu, and the
persistent solutions of both problems.

For a fixed corner set the KKT system at size ``N`` has

* ``Q(N) = (-1)^(N+1) det A(N)``
* ``P_j = x_j Q``, ``chi = x_{N-1} Q``, ``psi = x_N Q``, ``omega = x_{N+1} Q``

all polynomial in ``N`` once ``N >= max(ci + 2, max(I) + 2)``. They are
recovered by interpolation (with spare nodes that catch a degree bound
failing) and, for ``chi`` and ``psi``, independently from minors of the
column-replaced matrix ``A'(k, j)``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED
from worst1ps.errors import (
    CapExceeded,
    CornerAboveConductor,
    DegreeBoundViolated,
    InconsistentPoints,
    NotYetValid,
    PreconditionK,
)
from worst1ps.exactlin import RatMatrix, RatPoly, det_int, fmt, interpolate, minor, root_upper_integer
from worst1ps.kkt import CornerSet, build, certify, is_persistent, solution_from_x, solve_face
from worst1ps.optimizer import prox

NODES = 6
DEGREE_BOUNDS = {"Q": 4, "chi": 3, "psi": 2, "omega": 4, "P": 4}


class FormulaMismatch(DegreeBoundViolated):
    """Two independent routes to the same coefficient disagree."""


def min_k(sg, corners):
    return max(sg.ci + 2, CornerSet.of(corners).max + 2)


@dataclass(frozen=True)
class CramerValues:
    """The Cramer numerators at one size ``N``."""

    N: int
    Q: int
    x: tuple

    def P(self, j):
        return self.x[j - 1] * self.Q

    @property
    def chi(self):
        return self.x[self.N - 2] * self.Q

    @property
    def psi(self):
        return self.x[self.N - 1] * self.Q

    @property
    def omega(self):
        return self.x[self.N] * self.Q


def cramer_values(sg, corners, N) -> CramerValues:
    system = build(sg, N, corners, SIMPLIFIED)
    sign = 1 if (N + 1) % 2 == 0 else -1
    return CramerValues(N, sign * det_int(system.integer_rows()), solve_face(system).x)


def a_prime(sg, corners, N, j) -> RatMatrix:
    """``A(N)`` with column ``j`` (1-based) replaced by ``2a - 2``."""
    system = build(sg, N, corners, SIMPLIFIED)
    col = [2 * v - 2 for v in system.a]
    return system.matrix.with_column(j - 1, col)


def delta(m, rows, cols):
    """Minor of ``m`` with the listed 1-based rows and columns deleted."""
    return minor(m, [r - 1 for r in rows], [c - 1 for c in cols])


def minor_coefficients(sg, corners, k):
    """Taylor coefficients of chi and psi about ``k`` from determinants of ``A'``."""
    sign = 1 if (k + 1) % 2 == 0 else -1
    m1 = a_prime(sg, corners, k, k - 1)
    d_a = delta(m1, (k, k + 1), (k, k + 1))
    d_b = delta(m1, (k - 1, k + 1), (k, k + 1))
    d_c = delta(a_prime(sg, corners, k + 1, k), (k + 2,), (k + 1,))
    chi = [
        sign * m1_det(m1),
        Fraction(sign, 3) * (-14 * d_a - 8 * d_b - 6 * d_c),
        sign * (4 * d_a + 2 * d_b),
        Fraction(sign, 3) * (2 * d_a + 2 * d_b),
    ]
    m2 = a_prime(sg, corners, k, k)
    e_a = delta(m2, (k + 1,), (k + 1,))
    e_b = delta(m2, (k,), (k + 1,))
    psi = [sign * m1_det(m2), sign * (3 * e_a + e_b), sign * (e_a + e_b)]
    return chi, psi


def m1_det(m):
    return delta(m, (), ())


@dataclass
class CramerPolys:
    Q: RatPoly
    chi: RatPoly
    psi: RatPoly
    omega: RatPoly
    P: dict
    k: int
    chi_taylor: list = field(default_factory=list)
    psi_taylor: list = field(default_factory=list)
    chi_minor: list = field(default_factory=list)
    psi_minor: list = field(default_factory=list)

    def minor_agreement(self):
        names = [f"chi{i}" for i in range(4)] + [f"psi{i}" for i in range(3)]
        pairs = list(zip(self.chi_taylor, self.chi_minor)) + list(zip(self.psi_taylor, self.psi_minor))
        return {n: t == m for n, (t, m) in zip(names, pairs)}

    def to_json(self):
        return {
            "k": self.k,
            "Q": [fmt(c) for c in self.Q.coeffs],
            "chi": [fmt(c) for c in self.chi.coeffs],
            "psi": [fmt(c) for c in self.psi.coeffs],
            "omega": [fmt(c) for c in self.omega.coeffs],
            "chi_taylor": [fmt(c) for c in self.chi_taylor],
            "psi_taylor": [fmt(c) for c in self.psi_taylor],
            "P": {str(j): [fmt(c) for c in p.coeffs] for j, p in self.P.items()},
        }


def _fit(name, points, bound):
    try:
        return interpolate(points, bound)
    except InconsistentPoints as exc:
        raise DegreeBoundViolated(f"{name}: values do not fit degree <= {bound}") from exc


def _taylor(p, k, length):
    t = p.shift(k)
    return (t + [Fraction(0)] * length)[:length]


def _show(cs):
    return "[" + ", ".join(fmt(c) for c in cs) + "]"


def cramer_polys(sg, corners=(), k=None, p_indices=None, check_minors=False) -> CramerPolys:
    """Interpolated Cramer polynomials for ``corners``, Taylor-expanded about ``k``.

    The minor-based coefficients are always computed and stored; with
    ``check_minors`` a disagreement with the interpolated ones raises
    :class:`FormulaMismatch`.
    """
    corners = CornerSet.of(corners)
    k0 = min_k(sg, corners)
    if k is None:
        k = k0
    if k < k0:
        raise PreconditionK(f"k={k} below max(ci+2, max(I)+2)={k0}")
    if p_indices is None:
        p_indices = range(k, k + 3)
    top = max([k + NODES - 1] + [j + NODES for j in p_indices])
    vals = {N: cramer_values(sg, corners, N) for N in range(k, top + 1)}
    nodes = range(k, k + NODES)
    polys = {
        name: _fit(name, [(N, getattr(vals[N], name)) for N in nodes], DEGREE_BOUNDS[name])
        for name in ("Q", "chi", "psi", "omega")
    }
    P = {}
    for j in p_indices:
        pts = [(N, vals[N].P(j)) for N in range(j + 1, j + 1 + NODES)]
        P[j] = _fit(f"P_{j}", pts, DEGREE_BOUNDS["P"])
    chi_t = _taylor(polys["chi"], k, 4)
    psi_t = _taylor(polys["psi"], k, 3)
    chi_m, psi_m = minor_coefficients(sg, corners, k)
    # the constant terms are plain determinants and must always agree
    if chi_t[0] != chi_m[0] or psi_t[0] != psi_m[0]:
        raise FormulaMismatch(f"values at N={k} disagree with det A'(k, .)")
    if check_minors and (chi_t != chi_m or psi_t != psi_m):
        raise FormulaMismatch(
            f"Taylor coefficients chi={_show(chi_t)} psi={_show(psi_t)} differ from "
            f"the minor formulas chi={_show(chi_m)} psi={_show(psi_m)}"
        )
    return CramerPolys(polys["Q"], polys["chi"], polys["psi"], polys["omega"], P, k, chi_t, psi_t, chi_m, psi_m)


def pj_identity_rhs(polys: CramerPolys, j) -> RatPoly:
    """``(N-j)(N-j+1)(chi/2 + (N-j-1) psi/3)``."""
    n = RatPoly.x()
    return (n - j) * (n - j + 1) * (polys.chi / 2 + (n - j - 1) * polys.psi / 3)


def identity_checks(sg, corners, polys: CramerPolys = None) -> dict:
    """Every polynomial identity that applies to ``(sg, corners)``, as booleans."""
    corners = CornerSet.of(corners)
    polys = polys or cramer_polys(sg, corners)
    chi3, psi2 = polys.chi_taylor[3], polys.psi_taylor[2]
    out = {
        "deg Q = 4": polys.Q.degree == 4,
        "deg chi <= 3": polys.chi.degree <= 3,
        "deg psi <= 2": polys.psi.degree <= 2,
        "deg omega = 4": polys.omega.degree == 4,
        "chi3/2 = -psi2/3": chi3 / 2 == -psi2 / 3,
        "-chi + 2 omega = 4Q": -polys.chi + 2 * polys.omega == 4 * polys.Q,
        "P_j identity": all(p == pj_identity_rhs(polys, j) for j, p in polys.P.items()),
    }
    ell = corners.max
    if corners and ell >= sg.ci:
        n = RatPoly.x()
        out["chi = -2/3 (N-l-1) psi"] = polys.chi == Fraction(-2, 3) * (n - ell - 1) * polys.psi
        c3 = _taylor(polys.chi, ell, 4)[3]
        p2 = _taylor(polys.psi, ell, 3)[2]
        out["chi factors"] = polys.chi == (n - ell - 1) * (n - ell) * (n - ell + 1) * c3
        out["psi factors"] = polys.psi == (n - ell) * (n - ell + 1) * p2
    else:
        chi = polys.chi_taylor
        psi = polys.psi_taylor
        if chi[3] == 0:
            out["chi3 = 0 => psi2 = 0, chi2 = -psi1"] = psi[2] == 0 and chi[2] == -psi[1]
        if chi[3] == 0 and chi[2] == 0:
            out["chi3 = chi2 = 0 => chi1 = 0, psi = 0"] = chi[1] == 0 and polys.psi.is_zero()
        out["deg chi != 1"] = polys.chi.degree != 1
    return out


def open_question_candidate(polys: CramerPolys) -> bool:
    """True when chi3 = chi2 = 0 but chi0 != 0 (not known to be impossible)."""
    c = polys.chi_taylor
    return c[3] == 0 and c[2] == 0 and c[0] != 0


def nu(sg, corners=()) -> int:
    """Smallest positive integer beyond the real roots of ``chi`` and
    ``chi + 2(N - ci - 2) psi`` and beyond ``ci + 2`` and ``max(I) + 2``."""
    corners = CornerSet.of(corners)
    if corners.max > sg.ci:
        raise CornerAboveConductor(f"max(I)={corners.max} exceeds c.i.={sg.ci}")
    polys = cramer_polys(sg, corners)
    n = RatPoly.x()
    bound = max(sg.ci + 2, corners.max + 2) + 1
    for p in (polys.chi, polys.chi + 2 * (n - sg.ci - 2) * polys.psi):
        if not p.is_zero():
            r = root_upper_integer(p)
            if r is not None:
                bound = max(bound, r)
    return max(bound, 1)


# ---------------------------------------------------------------------------
# persistence of the Simplified optimum


@dataclass(frozen=True)
class SimplifiedPersistence:
    I_simp: CornerSet
    N0_simp: int
    heralded: bool
    first_persistent_N: int
    solution: object = field(repr=False, compare=False, default=None)

    def to_json(self):
        return {
            "I_simp": self.I_simp.to_json(),
            "N0_simp": self.N0_simp,
            "heralded": self.heralded,
            "first_persistent_N": self.first_persistent_N,
        }


def heralded_face(res):
    """The persistent face announced by a non-persistent optimum, or ``None``."""
    sol = res.solution
    N = sol.N
    if res.face.max != N - 1 or sol.xi(N) == 0 or is_persistent(sol):
        return None
    face = res.face.add(N)
    nxt = solve_face(build(sol.system.semigroup, N + 1, face, SIMPLIFIED))
    cert = certify(nxt)
    if cert.ok and cert.smallest_face == face and is_persistent(nxt):
        return nxt
    return None


def find_simplified_persistence(sg, n_cap: int = 2000) -> SimplifiedPersistence:
    """Increase N from ``ci + 2`` until the Simplified optimum is persistent
    (or heralds a persistent face at N + 1)."""
    start = sg.ci + 2
    if n_cap < start:
        raise ValueError(f"n_cap={n_cap} below c.i.+2={start}")
    seen = []
    for N in range(start, n_cap + 1):
        res = prox(sg, N, SIMPLIFIED)
        seen.append((N, res.face))
        if is_persistent(res.solution):
            found = SimplifiedPersistence(res.face, N, False, N, res.solution)
            break
        nxt = heralded_face(res)
        if nxt is not None:
            found = SimplifiedPersistence(nxt.corners, N, True, N + 1, nxt)
            break
    else:
        raise CapExceeded(f"no persistent Simplified optimum for {sg} up to N={n_cap}", partial=seen)
    first = found.first_persistent_N
    for N in (first + 1, first + 2):
        res = prox(sg, N, SIMPLIFIED)
        if res.face != found.I_simp or not is_persistent(res.solution):
            raise AssertionError(f"persistent face {found.I_simp} not stable at N={N}: got {res.face}")
    return found


def persistent_simplified_solution(sg, I_simp, N):
    """The persistent Simplified solution on ``I_simp`` carried to size N."""
    sol = solve_face(build(sg, N, I_simp, SIMPLIFIED))
    if not is_persistent(sol) or not certify(sol).ok:
        raise NotYetValid(f"face {I_simp} does not carry the persistent optimum at N={N}")
    return sol


def tail_m(N, ell):
    return Fraction(-6, (N - ell + 1) * (N - ell + 2))


def tail_b_prime(N, ell):
    return Fraction(2 * (N - ell - 1), (N - ell + 1) * (N - ell + 2))


def tail_b(N, ell):
    return 2 + Fraction(2 * (N + 2 * ell - 1), (N - ell + 1) * (N - ell + 2))


def unsimplified_corners(I_simp):
    I_simp = CornerSet.of(I_simp)
    return I_simp.add(I_simp.max - 1)


def unsimplified_from_persistent(sg, I_simp, N):
    """Closed-form Unsimplified KKT solution built from the persistent Simplified one."""
    I_simp = CornerSet.of(I_simp)
    ell = I_simp.max
    if ell <= sg.ci:
        raise CornerAboveConductor(f"need max(I_simp)={ell} above c.i.={sg.ci}")
    I = unsimplified_corners(I_simp)
    x = persistent_simplified_solution(sg, I, N).x
    m, bp = tail_m(N, ell), tail_b_prime(N, ell)
    xt = list(x)
    xt[ell - 2] = x[ell - 2] + bp
    xt[ell - 1] = x[ell - 1] + m - bp
    den = (N - ell + 1) * (N - ell + 2)
    for i in range(ell + 1, N):
        xt[i - 1] = Fraction(2 * (i - ell + 1) * (i - ell) * (N - i), den)
    xt[N - 1] = -m
    xt[N] = m * (N - ell) + 2 + bp
    if xt[ell - 1] <= 0:
        raise NotYetValid(f"x~_l = {fmt(xt[ell - 1])} <= 0 at N={N}; N must exceed l + 2/x_l - 1")
    sol = solution_from_x(build(sg, N, I, UNSIMPLIFIED), xt)
    cert = certify(sol)
    if not cert.ok or cert.smallest_face != I:
        raise AssertionError(f"x~ at N={N} is not certified on {I}: {cert}")
    return sol


@dataclass
class PersistenceReport:
    generators: tuple
    I_simp: CornerSet
    N0_simp: int
    heralded: bool
    I: CornerSet
    ell: int
    x_ell: Fraction
    N0: int
    N0_observed: int
    head_weights: tuple

    def tail_m(self, N):
        return tail_m(N, self.ell)

    def tail_b(self, N):
        return tail_b(N, self.ell)

    def to_json(self):
        return {
            "generators": list(self.generators),
            "I_simp": self.I_simp.to_json(),
            "N0_simp": self.N0_simp,
            "heralded": self.heralded,
            "I": self.I.to_json(),
            "ell": self.ell,
            "x_ell": fmt(self.x_ell),
            "N0": self.N0,
            "N0_observed": self.N0_observed,
            "head_weights": [fmt(v) for v in self.head_weights],
        }


def proven_N0(first_persistent_N, ell, x_ell):
    """Smallest N from which the closed-form Unsimplified solution is valid."""
    return max(first_persistent_N, floor(ell + 2 / x_ell))


def final_face(sg, n_cap: int = 2000):
    """``(simp, I, N0)``: the persistent Simplified data, the eventual
    Unsimplified face and the threshold from which it is optimal."""
    simp = find_simplified_persistence(sg, n_cap)
    ell = simp.I_simp.max
    I = unsimplified_corners(simp.I_simp)
    N0 = proven_N0(simp.first_persistent_N, ell, simp.solution.xi(ell))
    if N0 > n_cap:
        raise CapExceeded(f"proven threshold N0={N0} exceeds cap {n_cap}", partial=simp)
    return simp, I, N0


def compute_N0(sg, n_cap: int = 2000) -> PersistenceReport:
    simp, I, N0 = final_face(sg, n_cap)
    ell = simp.I_simp.max
    x_ell = simp.solution.xi(ell)
    res = prox(sg, N0, UNSIMPLIFIED)
    if res.face != I:
        raise AssertionError(f"optimum at N0={N0} lies on {res.face}, expected {I}")
    observed = N0
    lowest = max(sg.ci + 2, 2)
    while observed - 1 >= lowest and prox(sg, observed - 1, UNSIMPLIFIED).face == I:
        observed -= 1
    head = res.solution.w.w[:ell]
    return PersistenceReport(
        tuple(sg.generators), simp.I_simp, simp.N0_simp, simp.heralded, I, ell, x_ell, N0, observed, head
    )


# ---------------------------------------------------------------------------
# face sweeps


def _face_at(args):
    gens, N, variant = args
    from worst1ps.semigroup import from_generators

    return N, prox(from_generators(gens), N, variant).face


def face_sequence(sg, n_min, n_max, variant=UNSIMPLIFIED, jobs=1):
    """Optimal face for every N in ``n_min..n_max``; parallel over N when ``jobs > 1``."""
    if n_max < n_min:
        raise ValueError("empty N range")
    tasks = [(tuple(sg.generators), N, variant) for N in range(n_min, n_max + 1)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_face_at, tasks, chunksize=4))
    return [(N, prox(sg, N, variant).face) for N in range(n_min, n_max + 1)]


@dataclass(frozen=True)
class SweepRow:
    face: CornerSet
    n_min: int
    n_max: int
    open_ended: bool = False

    def n_range(self):
        if self.open_ended:
            return f"{self.n_min}<=N"
        if self.n_min == self.n_max:
            return f"N={self.n_min}"
        return f"{self.n_min}<=N<={self.n_max}"


def merge_faces(seq):
    rows = []
    for N, face in seq:
        if rows and rows[-1].face == face and rows[-1].n_max == N - 1:
            rows[-1] = SweepRow(face, rows[-1].n_min, N)
        else:
            rows.append(SweepRow(face, N, N))
    return rows


def sweep(sg, n_min, n_max, variant=UNSIMPLIFIED, jobs=1, final=None):
    """Merged face table.

    ``final`` is a pair ``(face, threshold)``: the face known to be optimal
    for every N at or beyond the threshold. When the last row carries that
    face and the range reaches the threshold, the row is open-ended.
    """
    rows = merge_faces(face_sequence(sg, n_min, n_max, variant, jobs))
    if final is not None and rows:
        face, threshold = final
        last = rows[-1]
        if last.face == face and n_max >= threshold:
            rows[-1] = SweepRow(last.face, last.n_min, last.n_max, True)
    return rows


def eventual_face(sg, variant=UNSIMPLIFIED, n_cap=2000):
    """``(face, threshold)`` beyond which the optimum face never changes."""
    if variant == SIMPLIFIED:
        simp = find_simplified_persistence(sg, n_cap)
        return simp.I_simp, simp.first_persistent_N
    _, I, N0 = final_face(sg, n_cap)
    return I, N0
