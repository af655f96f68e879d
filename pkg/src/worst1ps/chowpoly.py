"""One-dimensional triangulations and their GKZ vectors.

A triangulation of the point configuration ``gamma_0 < ... < gamma_N`` is
a choice of interior breakpoints. Its GKZ vector gives each point the
total length of the intervals it bounds. Minimizing ``<w, phi_T>`` over
all triangulations is the brute-force route to the Hilbert-Mumford value,
which should equal twice the area under the lower convex hull of w.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from worst1ps.cone import WeightVector, _w_and_gamma
from worst1ps.errors import TooLarge

MAX_N = 20


@dataclass(frozen=True)
class Triangulation1D:
    """Breakpoints (indices into ``gamma``) including both endpoints."""

    gamma: tuple
    vertices: tuple

    def __post_init__(self):
        v = self.vertices
        N = len(self.gamma) - 1
        if not v or v[0] != 0 or v[-1] != N or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"invalid breakpoints {v} for N={N}")

    @property
    def simplices(self):
        return tuple((self.gamma[a], self.gamma[b]) for a, b in zip(self.vertices, self.vertices[1:]))

    def __str__(self):
        return "[" + ",".join(str(self.gamma[i]) for i in self.vertices) + "]"


@dataclass(frozen=True)
class GkzVector:
    phi: tuple

    def __iter__(self):
        return iter(self.phi)


def _gamma(sg, N):
    return tuple(sg.prefix(N)) if hasattr(sg, "prefix") else tuple(sg)


def all_triangulations(sg, N=None):
    """Every triangulation of ``gamma_0..gamma_N``: one per subset of interior points.

    ``sg`` may be a semigroup (with ``N``) or an explicit abscissa sequence.
    """
    gamma = _gamma(sg, N) if N is not None else tuple(sg)
    N = len(gamma) - 1
    if N > MAX_N:
        raise TooLarge(f"N={N} exceeds the enumeration guard N <= {MAX_N}")
    if N < 1:
        raise ValueError("need at least two points")
    inner = range(1, N)
    for k in range(N):
        for subset in combinations(inner, k):
            yield Triangulation1D(gamma, (0, *subset, N))


def gkz_vector(t: Triangulation1D) -> GkzVector:
    phi = [0] * len(t.gamma)
    for a, b in zip(t.vertices, t.vertices[1:]):
        length = t.gamma[b] - t.gamma[a]
        phi[a] += length
        phi[b] += length
    return GkzVector(tuple(phi))


def min_pairing(sg, N, w) -> Fraction:
    """``min_T <w, phi_T>`` by enumeration of all triangulations."""
    gamma = _gamma(sg, N)
    if isinstance(w, WeightVector):
        w = w.w
    w, _ = _w_and_gamma(w, gamma)
    if len(w) != len(gamma):
        raise ValueError(f"{len(w)} weights over {len(gamma)} points")
    # integer arithmetic inside the loop
    den = lcm(*(Fraction(v).denominator for v in w))
    wi = [int(v * den) for v in w]
    best = None
    for t in all_triangulations(gamma):
        s = 0
        for a, b in zip(t.vertices, t.vertices[1:]):
            s += (wi[a] + wi[b]) * (gamma[b] - gamma[a])
        if best is None or s < best:
            best = s
    return Fraction(best, den)
