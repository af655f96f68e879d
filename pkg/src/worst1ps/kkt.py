"""KKT matrix equation ``A x = 2a`` for one face of the cone, solved exactly.

Indices follow the usual 1-based convention: ``x = (x_1, ..., x_{N+1})``
where ``x_i`` is a face parameter for ``i`` in the corner set (and for
``i = N, N+1``, the lineality coordinates) and a Lagrange multiplier for
every other ``i <= N-1``. Python tuples store ``x_i`` at position ``i - 1``.

The solver does not eliminate the dense matrix. The multiplier columns are
orthogonal to the face span, so ``w`` is the orthogonal projection of the
target onto that span (a small Gram system); the multipliers then follow by
forward substitution down the banded rows, and the full residual is checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED, WeightVector, build_target
from worst1ps.errors import (
    BadCornerIndex,
    SingularMatrix,
    SingularSystem,
    WrongVariant,
    NotPersistent,
)
from worst1ps.exactlin import RatMatrix, fmt, solve

PARAMETER = "parameter"
MULTIPLIER = "multiplier"


@dataclass(frozen=True, order=True)
class CornerSet:
    """Sorted set of interior indices where the weight graph may bend."""

    indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(int(i) for i in self.indices))))

    @classmethod
    def of(cls, items=()):
        return items if isinstance(items, CornerSet) else cls(tuple(items))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in self.indices

    @property
    def max(self):
        """Largest index, 0 for the empty set."""
        return self.indices[-1] if self.indices else 0

    def add(self, i):
        return CornerSet(self.indices + (i,))

    def remove(self, i):
        return CornerSet(tuple(j for j in self.indices if j != i))

    def __str__(self):
        return "{" + ",".join(map(str, self.indices)) + "}"

    def to_json(self):
        return list(self.indices)


def _check_corners(corners, N):
    for i in corners:
        if not 1 <= i <= N - 1:
            raise BadCornerIndex(f"corner {i} outside 1..{N - 1}")


def matrix_entry(gamma, corners, i, j):
    """Entry ``A[i, j]`` (both 1-based) of the KKT matrix."""
    N = len(gamma) - 1
    if j == N + 1:
        return 2
    if j == N:
        return 2 * (gamma[N] - gamma[i - 1])
    if j in corners:
        return 2 * (gamma[j] - gamma[i - 1]) if i <= j else 0
    if i == j:
        return gamma[j] - gamma[j + 1]
    if i == j + 1:
        return gamma[j + 1] - gamma[j - 1]
    if i == j + 2:
        return gamma[j - 1] - gamma[j]
    return 0


@dataclass
class KktSystem:
    gamma: tuple
    corners: CornerSet
    a: tuple  # a_1..a_{N+1}
    variant: str
    semigroup: object = None
    _matrix: RatMatrix = field(default=None, repr=False, compare=False)

    @property
    def N(self):
        return len(self.gamma) - 1

    @property
    def rhs(self):
        return tuple(2 * v for v in self.a)

    def integer_rows(self):
        n = self.N + 1
        return [[matrix_entry(self.gamma, self.corners, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]

    @property
    def matrix(self) -> RatMatrix:
        if self._matrix is None:
            self._matrix = RatMatrix(self.integer_rows())
        return self._matrix

    def role(self, i):
        return PARAMETER if (i in self.corners or i >= self.N) else MULTIPLIER

    def residual(self, x):
        """``A x - 2a`` computed from the sparse column structure."""
        N, g, I = self.N, self.gamma, self.corners
        out = []
        for r in range(1, N + 2):
            s = 2 * x[N] + 2 * (g[N] - g[r - 1]) * x[N - 1]
            for j in I:
                if r <= j:
                    s += 2 * (g[j] - g[r - 1]) * x[j - 1]
            for j in (r - 2, r - 1, r):
                if 1 <= j <= N - 1 and j not in I:
                    s += matrix_entry(g, I, r, j) * x[j - 1]
            out.append(s - 2 * self.a[r - 1])
        return out


def build(sg, N: int, corners=(), variant=SIMPLIFIED) -> KktSystem:
    corners = CornerSet.of(corners)
    _check_corners(corners, N)
    target = build_target(sg, N, variant)
    return KktSystem(tuple(sg.prefix(N)), corners, target.a, variant, sg)


def build_from_gamma(gamma, corners, a, variant) -> KktSystem:
    corners = CornerSet.of(corners)
    _check_corners(corners, len(gamma) - 1)
    return KktSystem(tuple(gamma), corners, tuple(Fraction(v) for v in a), variant)


@dataclass(frozen=True)
class KktSolution:
    system: KktSystem
    x: tuple  # x_1..x_{N+1}
    w: WeightVector

    @property
    def N(self):
        return self.system.N

    @property
    def corners(self):
        return self.system.corners

    def xi(self, i):
        """``x_i`` with 1-based ``i``."""
        return self.x[i - 1]

    def roles(self):
        return tuple(self.system.role(i) for i in range(1, self.N + 2))

    def multipliers(self):
        return {i: self.x[i - 1] for i in range(1, self.N) if i not in self.corners}

    def parameters(self):
        return {i: self.x[i - 1] for i in range(1, self.N + 2) if self.system.role(i) == PARAMETER}

    def to_json(self):
        cert = certify(self)
        persistent = is_persistent(self) if self.system.variant == SIMPLIFIED else None
        return {
            "corner_set": self.corners.to_json(),
            "x": [
                {"index": i, "role": self.system.role(i), "value": fmt(v)}
                for i, v in enumerate(self.x, start=1)
            ],
            "w": [fmt(v) for v in self.w.w],
            "persistent": persistent,
            "certificate": cert.to_json(),
        }


def _face_basis(gamma, corners):
    N = len(gamma) - 1
    basis = [[max(gamma[i] - v, 0) for v in gamma] for i in corners]
    basis.append([gamma[N] - v for v in gamma])
    basis.append([1] * (N + 1))
    return basis


def solve_face(system: KktSystem) -> KktSolution:
    """Exact solution of the KKT matrix equation on ``system.corners``."""
    g, I, N = system.gamma, system.corners, system.N
    # target seen as a vector over w_0..w_N
    target = system.a
    basis = _face_basis(g, I)
    k = len(basis)
    gram = [[sum(p * q for p, q in zip(basis[r], basis[c])) for c in range(k)] for r in range(k)]
    rhs = [sum(p * q for p, q in zip(basis[r], target)) for r in range(k)]
    try:
        coef = solve(gram, rhs)
    except SingularMatrix as exc:
        raise SingularSystem(f"face {I} has a degenerate span") from exc

    # clear denominators once so w is assembled in integer arithmetic
    den = 1
    for c in coef:
        den = den * c.denominator // _gcd(den, c.denominator)
    num = [int(c * den) for c in coef]
    w = []
    for m in range(N + 1):
        w.append(Fraction(sum(n * b[m] for n, b in zip(num, basis)), den))

    x = [Fraction(0)] * (N + 1)
    for pos, i in enumerate(I):
        x[i - 1] = coef[pos]
    x[N - 1] = coef[-2]
    x[N] = coef[-1]
    for r in range(1, N):
        if r in I:
            continue
        s = 2 * (target[r - 1] - w[r - 1])
        for j in (r - 2, r - 1):
            if j >= 1 and j not in I:
                s -= matrix_entry(g, I, r, j) * x[j - 1]
        x[r - 1] = s / matrix_entry(g, I, r, r)

    sol = KktSolution(system, tuple(x), WeightVector(tuple(w), tuple(g)))
    bad = [r for r, v in enumerate(system.residual(sol.x), start=1) if v != 0]
    if bad:
        raise SingularSystem(f"face {I}: KKT residual nonzero in rows {bad[:5]}")
    return sol


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def solve_dense(system: KktSystem) -> KktSolution:
    """Reference route: Gaussian elimination on the full matrix."""
    try:
        x = solve(system.matrix, list(system.rhs))
    except SingularMatrix as exc:
        raise SingularSystem(str(exc)) from exc
    w = weights_from_x(system.gamma, system.corners, x)
    return KktSolution(system, tuple(x), WeightVector(w, tuple(system.gamma)))


def weights_from_x(gamma, corners, x):
    """``w`` assembled from the face parameters of ``x``."""
    N = len(gamma) - 1
    w = [x[N] + x[N - 1] * (gamma[N] - v) for v in gamma]
    for i in corners:
        for m, v in enumerate(gamma):
            if v < gamma[i]:
                w[m] += x[i - 1] * (gamma[i] - v)
    return tuple(w)


def solution_from_x(system: KktSystem, x) -> KktSolution:
    """Wrap a candidate ``x``; raises unless it solves ``system`` exactly."""
    x = tuple(Fraction(v) for v in x)
    bad = [r for r, v in enumerate(system.residual(x), start=1) if v != 0]
    if bad:
        raise SingularSystem(f"candidate does not solve the KKT system (rows {bad[:5]})")
    w = weights_from_x(system.gamma, system.corners, x)
    return KktSolution(system, x, WeightVector(w, tuple(system.gamma)))


@dataclass(frozen=True)
class GlobalOptimum:
    smallest_face: CornerSet

    ok = True

    def to_json(self):
        return {"status": "global_optimum", "smallest_face": self.smallest_face.to_json()}


@dataclass(frozen=True)
class NotOptimal:
    violated_index: int
    value: Fraction

    ok = False

    def to_json(self):
        return {"status": "not_optimal", "violated_index": self.violated_index, "value": fmt(self.value)}


def certify(sol: KktSolution):
    """Optimality test: every ``x_i`` with ``1 <= i <= N-1`` must be nonnegative."""
    for i in range(1, sol.N):
        if sol.x[i - 1] < 0:
            return NotOptimal(i, sol.x[i - 1])
    return GlobalOptimum(CornerSet(tuple(i for i in sol.corners if sol.x[i - 1] > 0)))


def is_persistent(sol: KktSolution) -> bool:
    if sol.system.variant != SIMPLIFIED:
        raise WrongVariant("persistence is defined for the Simplified problem")
    return sol.x[sol.N - 1] == 0 and sol.x[sol.N] == 2


def extend_persistent(sol: KktSolution) -> KktSolution:
    """Carry a persistent solution from N to N + 1 without re-solving."""
    if not is_persistent(sol):
        raise NotPersistent("x_N = 0 and x_{N+1} = 2 are required")
    system = sol.system
    N = system.N
    if system.semigroup is not None:
        nxt = build(system.semigroup, N + 1, system.corners, system.variant)
    else:
        g = list(system.gamma) + [system.gamma[-1] + 1]
        nxt = build_from_gamma(g, system.corners, list(system.a) + [2], system.variant)
    x = list(sol.x[: N - 1]) + [Fraction(0), Fraction(0), Fraction(2)]
    w = WeightVector(sol.w.w + (Fraction(2),), nxt.gamma)
    out = KktSolution(nxt, tuple(x), w)
    if any(v != 0 for v in nxt.residual(out.x)):
        raise NotPersistent("extended vector does not solve the next system")
    return out


__all__ = [
    "SIMPLIFIED",
    "UNSIMPLIFIED",
    "CornerSet",
    "KktSystem",
    "KktSolution",
    "GlobalOptimum",
    "NotOptimal",
    "build",
    "build_from_gamma",
    "solve_face",
    "solve_dense",
    "certify",
    "is_persistent",
    "extend_persistent",
    "matrix_entry",
    "solution_from_x",
    "weights_from_x",
]
