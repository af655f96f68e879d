"""Exact rational linear algebra and univariate polynomials.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator). Matrices are :class:`RatMatrix`, a thin row-major wrapper;
polynomials are :class:`RatPoly` with ascending coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import floor, ceil

from worst1ps.errors import (
    InconsistentPoints,
    NonSquareMinor,
    SingularMatrix,
    ZeroPolynomial,
)

Rational = Fraction


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(value)


def fmt(q) -> str:
    """Render a rational as ``p/q`` (integers unadorned)."""
    q = frac(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class RatMatrix:
    """Dense matrix of rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols=None, entries=None):
        if cols is None:
            data = [[frac(v) for v in row] for row in rows]
            self.rows = len(data)
            self.cols = len(data[0]) if data else 0
            if any(len(row) != self.cols for row in data):
                raise ValueError("ragged matrix")
            self.entries = [v for row in data for v in row]
        else:
            self.rows, self.cols = rows, cols
            self.entries = [frac(v) for v in entries] if entries is not None else [Fraction(0)] * (rows * cols)
            if len(self.entries) != rows * cols:
                raise ValueError("entries length does not match shape")

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m[i, i] = 1
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.entries[i * self.cols + j] = frac(value)

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return self.entries[j::self.cols]

    def tolist(self):
        return [self.row(i) for i in range(self.rows)]

    def matvec(self, x):
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(self.row(i), x) if a), Fraction(0)) for i in range(self.rows)]

    def with_column(self, j, column):
        out = RatMatrix(self.rows, self.cols, self.entries)
        for i, v in enumerate(column):
            out[i, j] = v
        return out

    def submatrix(self, keep_rows, keep_cols):
        return RatMatrix([[self[i, j] for j in keep_cols] for i in keep_rows]) if keep_rows else RatMatrix(0, 0)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"RatMatrix({self.tolist()!r})"


def _as_matrix(a) -> RatMatrix:
    return a if isinstance(a, RatMatrix) else RatMatrix(a)


def solve(a, b) -> list:
    """Solve ``A x = b`` exactly.

    Gaussian elimination with partial pivoting on magnitude (ties go to the
    smallest row index), carried out over the rationals.
    """
    a = _as_matrix(a)
    n = a.rows
    if a.cols != n:
        raise ValueError("solve needs a square matrix")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    m = [a.row(i) + [frac(b[i])] for i in range(n)]
    for c in range(n):
        p = max(range(c, n), key=lambda r: (abs(m[r][c]), -r))
        if m[p][c] == 0:
            raise SingularMatrix(f"matrix is singular (no pivot in column {c})")
        if p != c:
            m[c], m[p] = m[p], m[c]
        piv_row = m[c]
        inv = 1 / piv_row[c]
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                f *= inv
                row = m[r]
                for k in range(c, n + 1):
                    if piv_row[k]:
                        row[k] -= f * piv_row[k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = m[i][n] - sum((m[i][k] * x[k] for k in range(i + 1, n) if m[i][k]), Fraction(0))
        x[i] = s / m[i][i]
    return x


def det(a) -> Fraction:
    """Determinant by Bareiss fraction-free elimination.

    Rational input is scaled row by row to integers first so that every
    intermediate quantity is an exact integer division.
    """
    a = _as_matrix(a)
    n = a.rows
    if a.cols != n:
        raise ValueError("det needs a square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for i in range(n):
        row = a.row(i)
        d = 1
        for v in row:
            d = d * v.denominator // _gcd(d, v.denominator)
        scale /= d
        m.append([int(v * d) for v in row])
    return scale * _bareiss_int(m)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bareiss_int(m) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * m[n - 1][n - 1]


def det_int(rows) -> int:
    """Determinant of an integer matrix (list of lists), exact."""
    return _bareiss_int([list(map(int, r)) for r in rows]) if rows else 1


def det_cofactor(a) -> Fraction:
    """Laplace expansion along the first row; exponential, for cross-checks only."""
    a = _as_matrix(a)
    n = a.rows
    if n == 0:
        return Fraction(1)
    if n == 1:
        return a[0, 0]
    total = Fraction(0)
    for j in range(n):
        if a[0, j]:
            keep = [c for c in range(n) if c != j]
            total += (-1) ** j * a[0, j] * det_cofactor(a.submatrix(list(range(1, n)), keep))
    return total


def minor(a, delete_rows, delete_cols) -> Fraction:
    """Determinant of ``a`` with the given (0-based) rows and columns removed."""
    a = _as_matrix(a)
    delete_rows, delete_cols = set(delete_rows), set(delete_cols)
    keep_r = [i for i in range(a.rows) if i not in delete_rows]
    keep_c = [j for j in range(a.cols) if j not in delete_cols]
    if len(keep_r) != len(keep_c):
        raise NonSquareMinor(f"{len(keep_r)}x{len(keep_c)} submatrix is not square")
    if any(not 0 <= i < a.rows for i in delete_rows) or any(not 0 <= j < a.cols for j in delete_cols):
        raise IndexError("minor index out of range")
    return det(a.submatrix(keep_r, keep_c))


# ---------------------------------------------------------------------------
# polynomials


class RatPoly:
    """Univariate polynomial with rational coefficients ``c_0 + c_1 x + ...``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, v):
        v = frac(v)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def _coerce(self, other):
        return other if isinstance(other, RatPoly) else RatPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = frac(scalar)
        return RatPoly([c / s for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatPoly([other])
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead()
        dn = other.degree
        while len(rem) - 1 >= dn and rem:
            shift = len(rem) - 1 - dn
            f = rem[-1] / lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return RatPoly(q), RatPoly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self):
        return RatPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, center):
        """Coefficients of the Taylor expansion about ``center``: p(x) = sum t_k (x - center)^k."""
        center = frac(center)
        t = list(self.coeffs)
        n = len(t)
        # repeated synthetic division
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                t[k] += center * t[k + 1]
        return t

    def primitive(self):
        """Integer polynomial with content 1 obtained by a positive scaling."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = _gcd(g, abs(v))
        return RatPoly([v // g for v in ints])

    def __repr__(self):
        return f"RatPoly({[fmt(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = fmt(abs(c)) + ("*" + mono if mono else "")
            terms.append(("-" if c < 0 else "+") + " " + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def interpolate(points, degree_bound: int) -> RatPoly:
    """Polynomial of degree <= ``degree_bound`` through ``points``.

    The first ``degree_bound + 1`` points determine it (Newton divided
    differences); every further point must lie on it, otherwise
    :class:`InconsistentPoints` is raised.
    """
    pts = [(frac(x), frac(y)) for x, y in points]
    if len({x for x, _ in pts}) != len(pts):
        raise ValueError("abscissae must be distinct")
    if len(pts) < degree_bound + 1:
        raise ValueError(f"need at least {degree_bound + 1} points, got {len(pts)}")
    base = pts[: degree_bound + 1]
    xs = [x for x, _ in base]
    dd = [y for _, y in base]
    n = len(base)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    poly = RatPoly([dd[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * RatPoly([-xs[i], 1]) + dd[i]
    for x, y in pts[degree_bound + 1:]:
        if poly(x) != y:
            raise InconsistentPoints(f"point ({fmt(x)}, {fmt(y)}) is off the degree-{degree_bound} interpolant")
    return poly


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(p: RatPoly) -> list:
    """Sturm chain of the squarefree part of ``p``, each term content-free."""
    return _signed_sturm(p)


def _poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a / a.lead() if not a.is_zero() else a


def _signed_sturm(p: RatPoly) -> list:
    g = _poly_gcd(p, p.derivative())
    if g.degree > 0:
        p = p.divmod(g)[0]
    seq = [_content_free(p), _content_free(p.derivative())]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(_content_free(-r))
    return [q for q in seq if not q.is_zero()]


def _content_free(p: RatPoly) -> RatPoly:
    """Divide by a positive rational so coefficients are coprime integers (sign kept)."""
    return p.primitive()


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(seq, x) -> int:
    return _sign_changes([q(x) for q in seq])


def _variations_at_inf(seq, positive=True) -> int:
    vals = []
    for q in seq:
        s = q.lead()
        if not positive and q.degree % 2 == 1:
            s = -s
        vals.append(s)
    return _sign_changes(vals)


def count_roots(p: RatPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (``None`` means infinite)."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has infinitely many roots")
    seq = _signed_sturm(p)
    v_lo = _variations_at_inf(seq, positive=False) if lo is None else _variations_at(seq, frac(lo))
    v_hi = _variations_at_inf(seq, positive=True) if hi is None else _variations_at(seq, frac(hi))
    return v_lo - v_hi


def cauchy_bound(p: RatPoly) -> Fraction:
    """Every real root has absolute value strictly below this bound."""
    lead = abs(p.lead())
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: RatPoly):
    """Disjoint intervals ``(lo, hi]`` with rational endpoints, one per distinct real root.

    Returns ``(intervals, bound)`` where ``bound`` is the smallest integer
    strictly greater than every real root (``None`` if there are no roots).
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    seq = _signed_sturm(p)
    if p.degree == 0:
        return [], None
    B = cauchy_bound(p)
    out = []

    def count(lo, hi):
        return _variations_at(seq, lo) - _variations_at(seq, hi)

    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    if not out:
        return out, None
    # Tighten the top root to a unit-width interval with integer endpoints.
    lo, hi = out[-1]
    k_lo, k_hi = floor(lo), ceil(hi)
    while k_hi - k_lo > 1:
        mid = (k_lo + k_hi) // 2
        if count(Fraction(mid), Fraction(k_hi)) >= 1:
            k_lo = mid
        else:
            k_hi = mid
    # the largest root lies in (k_lo, k_hi]
    bound = k_hi + 1 if p(k_hi) == 0 else k_hi
    return out, bound


def root_upper_integer(p: RatPoly):
    """Smallest integer strictly greater than every real root of ``p`` (``None`` if none)."""
    return isolate_real_roots(p)[1]


def positive_root_interval(p: RatPoly, width=Fraction(1)):
    """Isolating interval ``(lo, hi]`` for the unique positive root, refined to ``width``."""
    if count_roots(p, 0, None) != 1:
        raise ValueError("polynomial does not have exactly one positive root")
    seq = _signed_sturm(p)
    lo, hi = Fraction(0), cauchy_bound(p)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _variations_at(seq, lo) - _variations_at(seq, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def all_subsets(items, max_size=None):
    items = list(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        yield from combinations(items, k)
