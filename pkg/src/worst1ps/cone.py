"""The cone W of convex weight vectors and the target vector a.

Weight vectors ``w = (w_0, ..., w_N)`` are indexed from 0 and sit over the
abscissae ``gamma_0, ..., gamma_N``. The target ``a = (a_1, ..., a_{N+1})``
is indexed from 1, so the pairing is ``sum_i a_i * w_{i-1}``; in Python both
are plain 0-based sequences and the shift is handled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from worst1ps.errors import Negative, NotConvex, NTooSmall, ZeroVector
from worst1ps.exactlin import frac, fmt

SIMPLIFIED = "simplified"
UNSIMPLIFIED = "unsimplified"
VARIANTS = (SIMPLIFIED, UNSIMPLIFIED)


@dataclass(frozen=True)
class WeightVector:
    w: tuple
    gamma: tuple

    def __post_init__(self):
        if len(self.w) != len(self.gamma):
            raise ValueError(f"{len(self.w)} weights over {len(self.gamma)} abscissae")

    @classmethod
    def of(cls, w, gamma):
        return cls(tuple(frac(v) for v in w), tuple(int(g) for g in gamma))

    @property
    def N(self):
        return len(self.w) - 1

    def to_json(self):
        return {"w": [fmt(v) for v in self.w], "gamma": list(self.gamma)}


@dataclass(frozen=True)
class TargetVector:
    a: tuple  # a[0] is a_1
    variant: str

    @property
    def N(self):
        return len(self.a) - 1

    def to_json(self):
        return {"a": [fmt(v) for v in self.a], "variant": self.variant}


@dataclass(frozen=True)
class ConeDescription:
    N: int
    rays: tuple
    lineality: tuple
    facet_normals: tuple


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def target_values(gamma, variant):
    """Entries ``a_1..a_{N+1}`` for the abscissae ``gamma = (gamma_0..gamma_N)``."""
    N = len(gamma) - 1
    a = [gamma[1]]
    a.extend(gamma[i] - gamma[i - 2] for i in range(2, N + 1))
    a.append(2 if variant == SIMPLIFIED else 1)
    return a


def build_target(sg, N: int, variant=SIMPLIFIED) -> TargetVector:
    """Target vector with ``a . w`` equal to twice the area under a convex w.

    The last entry is 1 (Unsimplified) or 2 (Simplified). The area identity
    needs a unit final gap, i.e. ``N >= ci + 1``; the Simplified variant
    enforces that, while the Unsimplified one also accepts smaller ``N``
    with the same formula, which is how the low rows of the face tables
    are produced.
    """
    _check_variant(variant)
    if N < 2:
        raise NTooSmall(f"N={N}: need at least one facet (N >= 2)")
    if variant == SIMPLIFIED and N < sg.ci + 1:
        raise NTooSmall(f"N={N} < c.i.+1={sg.ci + 1}; the Simplified target needs a unit last gap")
    gamma = sg.prefix(N)
    return TargetVector(tuple(Fraction(v) for v in target_values(gamma, variant)), variant)


def ray(k, gamma):
    """``F_k(gamma)``: coordinates ``max(k - gamma_i, 0)``."""
    return [max(k - g, 0) for g in gamma]


def lineality(gamma):
    """The two lineality generators ``L_{gamma_N}(gamma)`` and ``L_1(gamma)``."""
    top = gamma[-1]
    return [top - g for g in gamma], [1] * len(gamma)


def facet_normal(i, gamma):
    """Coefficients (on ``w_{i-1}, w_i, w_{i+1}``) of the slope inequality at ``gamma_i``."""
    return (
        -(gamma[i + 1] - gamma[i]),
        gamma[i + 1] - gamma[i - 1],
        -(gamma[i] - gamma[i - 1]),
    )


def facet_value(i, w, gamma):
    """``g_i . w``; nonpositive exactly when the slopes at ``gamma_i`` do not decrease."""
    c0, c1, c2 = facet_normal(i, gamma)
    return c0 * w[i - 1] + c1 * w[i] + c2 * w[i + 1]


def describe(sg, N) -> ConeDescription:
    gamma = sg.prefix(N)
    rays = tuple(tuple(ray(gamma[i], gamma)) for i in range(1, N))
    normals = []
    for i in range(1, N):
        vec = [0] * (N + 1)
        vec[i - 1], vec[i], vec[i + 1] = facet_normal(i, gamma)
        normals.append(tuple(vec))
    return ConeDescription(N, rays, tuple(map(tuple, lineality(gamma))), tuple(normals))


def _w_and_gamma(w, gamma=None):
    if isinstance(w, WeightVector):
        return list(w.w), list(w.gamma)
    if gamma is None:
        raise ValueError("gamma is required with a bare weight sequence")
    return [frac(v) for v in w], list(gamma)


def is_convex(w, gamma=None) -> bool:
    w, gamma = _w_and_gamma(w, gamma)
    return all(facet_value(i, w, gamma) <= 0 for i in range(1, len(w) - 1))


def slopes(w, gamma):
    return [Fraction(w[i] - w[i - 1]) / (gamma[i] - gamma[i - 1]) for i in range(1, len(w))]


def lower_hull_indices(w, gamma):
    """Indices of the lower convex hull vertices of the points ``(gamma_i, w_i)``.

    Monotone chain; collinear middle points are dropped, so every returned
    interior index is a genuine corner.
    """
    hull = []
    for i in range(len(w)):
        while len(hull) >= 2:
            o, p = hull[-2], hull[-1]
            cross = (gamma[p] - gamma[o]) * (w[i] - w[o]) - (w[p] - w[o]) * (gamma[i] - gamma[o])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def lower_convex_hull(w, gamma=None):
    """Values of ``lch(f_w)`` at every abscissa; returns the same type as given."""
    wrapped = isinstance(w, WeightVector)
    w, gamma = _w_and_gamma(w, gamma)
    hull = lower_hull_indices(w, gamma)
    out = list(w)
    for a, b in zip(hull, hull[1:]):
        slope = Fraction(w[b] - w[a]) / (gamma[b] - gamma[a])
        for i in range(a + 1, b):
            out[i] = w[a] + slope * (gamma[i] - gamma[a])
    return WeightVector(tuple(out), tuple(gamma)) if wrapped else out


def twice_area(w, gamma=None):
    """``2 * integral`` of the piecewise linear interpolant of w (trapezoid rule)."""
    w, gamma = _w_and_gamma(w, gamma)
    return sum(((w[i - 1] + w[i]) * (gamma[i] - gamma[i - 1]) for i in range(1, len(w))), Fraction(0))


def twice_area_lch(w, gamma=None):
    w, gamma = _w_and_gamma(w, gamma)
    return twice_area(lower_convex_hull(w, gamma), gamma)


def dot_target(a, w):
    """``sum_{i=1}^{N+1} a_i w_{i-1}`` with no hypothesis checks."""
    a = a.a if isinstance(a, TargetVector) else a
    w = w.w if isinstance(w, WeightVector) else w
    if len(a) != len(w):
        raise ValueError(f"target has {len(a)} entries, weights {len(w)}")
    return sum((frac(x) * frac(y) for x, y in zip(a, w)), Fraction(0))


def pairing(a, w, gamma=None):
    """``a . w``, which equals twice the area under a nonnegative convex w."""
    wv, gm = _w_and_gamma(w, gamma)
    if any(v < 0 for v in wv):
        raise Negative("pairing formula needs a nonnegative weight vector")
    if not is_convex(wv, gm):
        raise NotConvex("pairing formula needs a convex weight vector")
    return dot_target(a, wv)


def score(a, w):
    """Squared Kempf ratio ``(a.w)^2 / (w.w)``."""
    wv = w.w if isinstance(w, WeightVector) else [frac(v) for v in w]
    norm2 = sum((v * v for v in wv), Fraction(0))
    if norm2 == 0:
        raise ZeroVector("score is undefined at w = 0")
    return dot_target(a, wv) ** 2 / norm2


def decompose(w, gamma=None):
    """Coefficients of w over the rays and lineality generators.

    Returns ``(t, s, u)`` with ``w = sum_i t[i-1] F_{gamma_i} + s L_{gamma_N} + u L_1``;
    ``t[i-1]`` is the slope increase at ``gamma_i`` and ``-s`` the last slope.
    """
    w, gamma = _w_and_gamma(w, gamma)
    m = slopes(w, gamma)
    t = [m[i] - m[i - 1] for i in range(1, len(m))]
    return t, -m[-1], w[-1]


def recompose(t, s, u, gamma):
    N = len(gamma) - 1
    out = [frac(s) * (gamma[N] - g) + frac(u) for g in gamma]
    for i, ti in enumerate(t, start=1):
        if ti:
            for k, g in enumerate(gamma):
                if g < gamma[i]:
                    out[k] += ti * (gamma[i] - g)
    return out
