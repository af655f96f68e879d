from fractions import Fraction as F
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED, facet_value, is_convex, ray, lineality
from worst1ps.errors import BadCornerIndex, NotPersistent, WrongVariant
from worst1ps.kkt import (
    MULTIPLIER,
    PARAMETER,
    CornerSet,
    build,
    certify,
    extend_persistent,
    is_persistent,
    solve_dense,
    solve_face,
)
from worst1ps.semigroup import from_generators

CUSP_W = (F(33, 14), F(157, 70), F(153, 70), F(149, 70), F(29, 14), F(141, 70), 2, 2, 2, 2, 2)
S23 = from_generators([2, 3])


def test_corner_set():
    c = CornerSet.of([6, 5, 5])
    assert c.indices == (5, 6) and str(c) == "{5,6}" and str(CornerSet()) == "{}"
    assert CornerSet().max == 0 and c.add(2).indices == (2, 5, 6) and 6 not in c.remove(6)


def test_matrix_columns():
    sys = build(S23, 4, (), SIMPLIFIED)
    A = sys.integer_rows()
    assert [row[0] for row in A] == [-1, 3, -2, 0, 0]
    assert all(row[4] == 2 for row in A)
    assert A[4] == [0, 0, -1, 0, 2]


@pytest.mark.parametrize("gens,N,I", [([2, 3], 8, (2, 5)), ([3, 5], 10, (4, 9)), ([4, 9], 16, (7, 8, 15))])
def test_matrix_columns_are_rays_and_normals(gens, N, I):
    sg = from_generators(gens)
    sys = build(sg, N, I, UNSIMPLIFIED)
    A = sys.integer_rows()
    g = sys.gamma
    L_top, L_one = lineality(g)
    col = lambda j: [A[i][j - 1] for i in range(N + 1)]
    assert col(N) == [2 * v for v in L_top] and col(N + 1) == [2 * v for v in L_one]
    for j in range(1, N):
        if j in I:
            assert col(j) == [2 * v for v in ray(g[j], g)]
        else:
            expect = [0] * (N + 1)
            expect[j - 1], expect[j], expect[j + 1] = g[j] - g[j + 1], g[j + 1] - g[j - 1], g[j - 1] - g[j]
            assert col(j) == expect


def test_bad_corner():
    with pytest.raises(BadCornerIndex):
        build(S23, 10, (10,), SIMPLIFIED)
    with pytest.raises(BadCornerIndex):
        build(from_generators([2, 19]), 19, (18, 19), SIMPLIFIED)


def test_cusp_face_weights():
    sol = solve_face(build(S23, 10, (5, 6), SIMPLIFIED))
    assert sol.w.w == CUSP_W
    assert certify(sol).ok and is_persistent(sol)


def test_empty_face_is_not_the_cusp_optimum():
    sol = solve_face(build(S23, 10, (), SIMPLIFIED))
    assert sol.w.w != CUSP_W and not certify(sol).ok and not is_persistent(sol)


def test_sentinel_value():
    sg = from_generators([2, 19])
    heralding = solve_face(build(sg, 19, (18,), SIMPLIFIED))
    persistent = solve_face(build(sg, 20, (18, 19), SIMPLIFIED))
    assert heralding.xi(19) == F(1, 4175) == persistent.xi(19)
    assert certify(persistent).ok and is_persistent(persistent)


def test_certify_examples():
    assert certify(solve_face(build(S23, 10, (), UNSIMPLIFIED))).smallest_face == CornerSet()
    bad = certify(solve_face(build(S23, 16, (), UNSIMPLIFIED)))
    assert not bad.ok and bad.value < 0
    assert certify(solve_face(build(S23, 16, (4,), UNSIMPLIFIED))).smallest_face == CornerSet((4,))


def test_persistence_flags():
    assert is_persistent(solve_face(build(S23, 20, (4, 5), SIMPLIFIED)))
    with pytest.raises(WrongVariant):
        is_persistent(solve_face(build(S23, 20, (4, 5), UNSIMPLIFIED)))
    with pytest.raises(NotPersistent):
        extend_persistent(solve_face(build(S23, 10, (), SIMPLIFIED)))


def test_extension_matches_direct_solve():
    sol = solve_face(build(S23, 150, (5, 6), SIMPLIFIED))
    ext = extend_persistent(sol)
    direct = solve_face(build(S23, 151, (5, 6), SIMPLIFIED))
    assert ext.x == direct.x and ext.w.w == direct.w.w
    assert certify(ext).ok
    assert extend_persistent(ext).x == solve_face(build(S23, 152, (5, 6), SIMPLIFIED)).x


def test_roles_and_json():
    sol = solve_face(build(S23, 8, (3,), SIMPLIFIED))
    roles = sol.roles()
    assert roles[2] == PARAMETER and roles[0] == MULTIPLIER and roles[7:] == (PARAMETER, PARAMETER)
    data = sol.to_json()
    assert set(data) == {"corner_set", "x", "w", "persistent", "certificate"}


def sympy_solution(sys):
    A = sympy.Matrix(sys.integer_rows())
    b = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in sys.rhs])
    return tuple(F(int(v.p), int(v.q)) for v in A.LUsolve(b))


@st.composite
def instance(draw):
    gens = draw(st.sampled_from([[2, 3], [2, 5], [3, 4], [3, 5], [3, 7], [4, 5], [4, 9], [5, 7]]))
    sg = from_generators(gens)
    variant = draw(st.sampled_from([SIMPLIFIED, UNSIMPLIFIED]))
    lo = sg.ci + 1 if variant == SIMPLIFIED else 2
    N = draw(st.integers(max(lo, 2), sg.ci + 12))
    I = draw(st.sets(st.integers(1, N - 1), max_size=min(4, N - 1)))
    return sg, N, tuple(sorted(I)), variant


@settings(max_examples=150, deadline=None)
@given(instance())
def test_structured_solve_matches_oracles(case):
    sg, N, I, variant = case
    sys = build(sg, N, I, variant)
    sol = solve_face(sys)
    assert sol.x == solve_dense(sys).x == sympy_solution(sys)
    assert all(v == 0 for v in sys.residual(sol.x))
    # bottom row: only the facet at N-1 and the constant column reach it
    g = sys.gamma
    facet = (g[N - 2] - g[N - 1]) * sol.xi(N - 1) if N - 1 not in I else 0
    assert facet + 2 * sol.xi(N + 1) == 2 * sys.a[N]
    if N - 1 not in I and N >= sg.ci + 2:
        assert -sol.xi(N - 1) + 2 * sol.xi(N + 1) == 2 * sys.a[N]
    # w sits on the face: facet equalities off I
    for i in range(1, N):
        if i not in I:
            assert facet_value(i, sol.w.w, sys.gamma) == 0


@settings(max_examples=100, deadline=None)
@given(instance())
def test_pj_identity(case):
    sg, N, I, _ = case
    sys = build(sg, N, I, SIMPLIFIED) if N >= sg.ci + 1 else None
    if sys is None:
        return
    x = solve_face(sys).x
    lo = max(sg.ci + 2, max(I, default=0) + 2)
    for j in range(lo, N):
        assert x[j - 1] == (N - j) * (N - j + 1) * (x[N - 2] / 2 + F(N - j - 1, 3) * x[N - 1])


@pytest.mark.parametrize("gens,N,variant", [([2, 3], 9, SIMPLIFIED), ([3, 5], 9, UNSIMPLIFIED), ([2, 5], 10, UNSIMPLIFIED)])
def test_unique_certified_face(gens, N, variant):
    sg = from_generators(gens)
    winners = []
    for k in range(N):
        for I in combinations(range(1, N), k):
            sol = solve_face(build(sg, N, I, variant))
            cert = certify(sol)
            if cert.ok and cert.smallest_face == sol.corners:
                winners.append(sol)
    assert len(winners) == 1
    assert is_convex(winners[0].w)
