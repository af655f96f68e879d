from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from worst1ps.cone import SIMPLIFIED, UNSIMPLIFIED
from worst1ps.cusp import (
    alpha_two_value_check,
    cusp_explicit_solution,
    cusp_report,
    cusp_table,
    direct_sums,
    f_value,
    h_value,
    regression_m1_b1,
    regression_sums,
    smaller_candidate,
)
from worst1ps.errors import BadR, NTooSmall
from worst1ps.exactlin import count_roots, isolate_real_roots
from worst1ps.kkt import CornerSet
from worst1ps.optimizer import prox
from worst1ps.persistence import sweep
from worst1ps.semigroup import cusp

TABLE = [
    (1, 5, 146), (2, 6, 118), (3, 7, 30), (4, 9, 53), (5, 11, 174), (6, 12, 37), (7, 14, 55), (8, 16, 107),
    (9, 18, 8369), (10, 19, 58), (11, 21, 88), (12, 23, 200), (13, 24, 61), (14, 26, 82), (15, 28, 131),
]


@pytest.mark.parametrize("r,j,n0", TABLE)
def test_report_rows(r, j, n0):
    rep = cusp_report(r)
    assert (rep.j, rep.N0) == (j, n0)
    lo, hi = rep.alpha_interval
    assert j - 1 < hi and lo < j


def test_report_fields():
    rep = cusp_report(1)
    assert str(rep.f) == "2*x^3 - 26*x - 48"
    assert (rep.x_j, rep.x_j1, rep.h) == (F(3, 70), F(1, 70), 1680)
    assert (rep.m1, rep.b1) == regression_m1_b1(1, 5)
    with pytest.raises(BadR):
        cusp_report(0)


def test_sentinel_n0():
    rep = cusp_report(9)
    assert rep.x_j1 == F(1, 4175) and rep.N0 == 8369


@pytest.mark.parametrize("r", range(1, 61))
def test_cubic_sign_pattern(r):
    rep = cusp_report(r)
    assert f_value(r, rep.j - 1) < 0 < f_value(r, rep.j)
    assert count_roots(rep.f, 0, None) == 1
    assert rep.j in (smaller_candidate(r), smaller_candidate(r) + 1)
    assert (rep.m1, rep.b1) == regression_m1_b1(r, rep.j)


def test_smaller_candidate_exact():
    # sqrt(3)*r + (sqrt(3)+1)/2 for r = 1, 2, 9 is 3.098, 4.830, 16.954
    assert [smaller_candidate(r) for r in (1, 2, 9)] == [4, 5, 17]


@pytest.mark.parametrize("r,N", [(1, 20), (1, 7), (2, 25), (3, 12), (5, 30)])
def test_explicit_solution_matches_optimizer(r, N):
    sol = cusp_explicit_solution(r, N)
    res = prox(cusp(r), N, SIMPLIFIED)
    assert res.face == CornerSet((cusp_report(r).j, cusp_report(r).j + 1))
    assert sol.x == res.solution.x and sol.w.w == res.w
    assert sol.xi(N + 1) == 2 and sol.xi(N) == 0


def test_explicit_solution_too_small():
    with pytest.raises(NTooSmall):
        cusp_explicit_solution(2, 7)


def test_alpha_check_small_range():
    rep = alpha_two_value_check(100)
    assert 1 in rep.exceptions and 9 in rep.exceptions
    assert all(r not in rep.exceptions for r in range(3, 9))
    assert all(r not in rep.exceptions for r in range(10, 101))


def test_alpha_check_r2_takes_larger_value():
    assert cusp_report(2).j == smaller_candidate(2) + 1 == 6


@pytest.mark.xfail(strict=True, reason="r = 2 also takes the larger value, so the exception set is {1, 2, 9}")
def test_alpha_exceptions_are_one_and_nine():
    assert alpha_two_value_check(10**5).exceptions == (1, 9)


def test_alpha_check_full_range():
    assert alpha_two_value_check(10**5).exceptions == (1, 2, 9)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40))
def test_regression_sums(r, j):
    if j <= r:
        return
    assert regression_sums(r, j) == direct_sums(r, j)


def test_h_is_twelve_times_variance_denominator():
    for r in range(1, 10):
        for j in range(r + 1, 30):
            s = direct_sums(r, j)
            assert 12 * (s["n"] * s["sum g^2"] - s["sum g"] ** 2) == h_value(r, j)


@pytest.mark.parametrize("r,expected", [(1, 146), (2, 118)])
def test_unsimplified_transition(r, expected):
    sg = cusp(r)
    j = cusp_report(r).j
    rows = sweep(sg, expected - 3, expected + 2, UNSIMPLIFIED)
    assert rows[-1].face == CornerSet((j, j + 1)) and rows[-1].n_min == expected


@pytest.mark.parametrize("r", range(3, 7))
def test_unsimplified_face_at_n0(r):
    rep = cusp_report(r)
    if rep.N0 > 400:
        pytest.skip("beyond the cross-validation range")
    face = CornerSet((rep.j, rep.j + 1))
    assert prox(cusp(r), rep.N0, UNSIMPLIFIED).face == face
    assert prox(cusp(r), rep.N0 + 5, UNSIMPLIFIED).face == face


def test_table():
    assert cusp_table(15) == TABLE
    with pytest.raises(BadR):
        cusp_table(0)
