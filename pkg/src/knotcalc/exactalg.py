"""Exact linear algebra over the Gaussian rationals and real-root isolation.

Everything here works in exact arithmetic: Gaussian rationals are pairs of
:class:`fractions.Fraction`, polynomials are lists of Python integers
(lowest degree first), and signatures of Hermitian forms come from a
pivoted LDL* factorization rather than from eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class GaussianRational:
    """A number ``re + im*i`` with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        if isinstance(x, complex):
            raise TypeError("refusing to coerce a float complex into exact arithmetic")
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Squared modulus ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = GaussianRational(1)
        for bit in bin(abs(n))[2:]:
            result = result * result
            if bit == "1":
                result = result * base
        return result

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


@dataclass(frozen=True)
class UnitCirclePoint:
    """Point ``omega = ((1 - s^2) + 2 s i) / (1 + s^2)`` on the unit circle.

    ``omega`` has argument ``2*atan(s)``; ``s > 0`` gives the open upper
    half circle and ``s -> oo`` approaches ``-1``.
    """

    s: Fraction
    omega: GaussianRational


def circle_point(s: Rational) -> UnitCirclePoint:
    s = Fraction(s)
    denom = 1 + s * s
    omega = GaussianRational((1 - s * s) / denom, 2 * s / denom)
    return UnitCirclePoint(s, omega)


# ---------------------------------------------------------------------------
# Hermitian signatures


class HermitianMatrix:
    """Square matrix of Gaussian rationals equal to its conjugate transpose."""

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[GaussianRational.coerce(x) for x in row] for row in entries]
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("HermitianMatrix must be square")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != rows[j][i].conjugate():
                    raise ValueError(f"entry ({i},{j}) is not the conjugate of ({j},{i})")
        self.entries = rows

    @property
    def size(self) -> int:
        return len(self.entries)

    def __repr__(self):
        return f"HermitianMatrix({self.entries!r})"


def ldlstar_signature(H: HermitianMatrix) -> tuple[int, int]:
    """Return ``(signature, nullity)`` of a Hermitian matrix.

    Uses a symmetric pivoted elimination (LDL*).  The pivot is the remaining
    diagonal entry of largest absolute value; when every remaining diagonal
    entry vanishes a 2x2 block on a nonzero off-diagonal entry is used
    instead, and such a block contributes one positive and one negative
    square.
    """
    A = [row[:] for row in H.entries]
    active = list(range(len(A)))
    pos = neg = 0
    while active:
        best = None
        for i in active:
            d = A[i][i].re
            if d != 0 and (best is None or abs(d) > abs(A[best][best].re)):
                best = i
        if best is not None:
            d = A[best][best].re
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(best)
            col = [A[i][best] for i in active]
            for a, i in enumerate(active):
                li = col[a] / d
                if not li:
                    continue
                row_i = A[i]
                for b, j in enumerate(active):
                    # A[i][j] -= A[i][p] * A[p][j] / d
                    row_i[j] = row_i[j] - li * col[b].conjugate()
            continue

        pair = next(((i, j) for i in active for j in active
                     if i < j and A[i][j]), None)
        if pair is None:
            # remaining block is identically zero
            break
        p, q = pair
        pos += 1
        neg += 1
        active.remove(p)
        active.remove(q)
        # block B = [[0, b], [conj(b), 0]], B^{-1} = [[0, 1/conj(b)], [1/b, 0]]
        b = A[p][q]
        inv_bc = b.conjugate().inverse()
        inv_b = b.inverse()
        cp = [A[i][p] for i in active]
        cq = [A[i][q] for i in active]
        for a, i in enumerate(active):
            # x_i = C_i B^{-1} = (cq_i / b, cp_i / conj(b))
            xp = cq[a] * inv_b
            xq = cp[a] * inv_bc
            row_i = A[i]
            for c, j in enumerate(active):
                row_i[j] = row_i[j] - xp * cp[c].conjugate() - xq * cq[c].conjugate()
    nullity = len(H.entries) - pos - neg
    return pos - neg, nullity


def determinant(M: Sequence[Sequence]) -> GaussianRational:
    """Exact determinant by fraction-field Gaussian elimination."""
    A = [[GaussianRational.coerce(x) for x in row] for row in M]
    n = len(A)
    det = GaussianRational(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return GaussianRational(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        p = A[c][c]
        det = det * p
        inv = p.inverse()
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f:
                A[r] = [A[r][k] - f * A[c][k] for k in range(n)]
    return det


def integer_determinant(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]



def gaussian_integer_determinant(M: Sequence[Sequence[tuple[int, int]]]) -> tuple[int, int]:
    """Bareiss determinant over Z[i]; entries and result are ``(re, im)`` pairs.

    Every Bareiss quotient is exact in Z[i], so no fractions appear.
    """
    A = [[(int(a), int(b)) for a, b in row] for row in M]
    n = len(A)
    if n == 0:
        return (1, 0)
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        if A[k][k] == (0, 0):
            swap = next((r for r in range(k + 1, n) if A[r][k] != (0, 0)), None)
            if swap is None:
                return (0, 0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pa, pb = A[k][k]
        qa, qb = prev
        qn = qa * qa + qb * qb
        for i in range(k + 1, n):
            ia, ib = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                xa, xb = row_i[j]
                ka, kb = row_k[j]
                # x*p - a_ik*a_kj
                ra = xa * pa - xb * pb - (ia * ka - ib * kb)
                rb = xa * pb + xb * pa - (ia * kb + ib * ka)
                # divide by prev: multiply by conj(prev) / |prev|^2
                na, nb = ra * qa + rb * qb, rb * qa - ra * qb
                if na % qn or nb % qn:
                    raise ArithmeticError("inexact Bareiss step")
                row_i[j] = (na // qn, nb // qn)
        prev = A[k][k]
    a, b = A[n - 1][n - 1]
    return (sign * a, sign * b)

# ---------------------------------------------------------------------------
# Integer polynomials and Sturm sequences.  A polynomial is a list of ints,
# index = degree, with no trailing zeros; [] is the zero polynomial.


def poly_trim(p: Iterable[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[int], x: Rational) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_at(p: Sequence[int], x: Fraction) -> int:
    # sign of den**deg * p(num/den), computed in integers
    num, den = x.numerator, x.denominator
    deg = len(p) - 1
    total = 0
    npow = 1
    for k, c in enumerate(p):
        total += c * npow * den ** (deg - k)
        npow *= num
    return (total > 0) - (total < 0)


def poly_content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def poly_primitive(p: Sequence[int]) -> list[int]:
    """Divide by the (positive) content; leading sign is kept."""
    g = poly_content(p)
    if g <= 1:
        return list(p)
    return [c // g for c in p]


def poly_derivative(p: Sequence[int]) -> list[int]:
    return [k * p[k] for k in range(1, len(p))]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pseudo_rem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Remainder of ``|lc(b)|**(deg a - deg b + 1) * a`` divided by ``b``.

    The multiplier is positive, so the sign pattern needed by Sturm chains
    is preserved.
    """
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    mult = abs(lc)
    sgn = 1 if lc > 0 else -1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        coef = r[-1]
        # r <- |lc| * r - sign(lc) * coef * x^shift * b
        r = [mult * c for c in r]
        for k, c in enumerate(b):
            r[k + shift] -= sgn * coef * c
        r = poly_trim(r)
    return r


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_primitive(poly_pseudo_rem(a, b))
    if not a:
        return []
    a = poly_primitive(a)
    return a if a[-1] > 0 else [-c for c in a]


def poly_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient of ``a / b`` over the rationals, assumed exact and integral
    up to content; the result is returned as a primitive integer polynomial."""
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 0)
    while len(r) - 1 >= db and any(r):
        shift = len(r) - 1 - db
        coef = r[-1] / b[-1]
        q[shift] = coef
        for k, c in enumerate(b):
            r[k + shift] -= coef * c
        r.pop()
    if any(r):
        raise ArithmeticError("polynomial division is not exact")
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    return poly_primitive([int(c * den) for c in q])


def square_free_part(p: Sequence[int]) -> list[int]:
    p = poly_trim(p)
    g = poly_gcd(p, poly_derivative(p))
    if len(g) <= 1:
        return poly_primitive(p)
    return poly_exact_div(p, g)


def sturm_chain(p: Sequence[int]) -> list[list[int]]:
    chain = [poly_primitive(p), poly_primitive(poly_derivative(p))]
    while chain[-1] and len(chain[-1]) > 1:
        r = poly_pseudo_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(poly_primitive([-c for c in r]))
    return [c for c in chain if c]


def sign_variations(chain: Sequence[Sequence[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(q, x) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: Sequence[int]) -> Fraction:
    """Cauchy bound: every real root has absolute value below this."""
    lead = abs(p[-1])
    return 1 + Fraction(max((abs(c) for c in p[:-1]), default=0), lead)


@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval ``(lo, hi)`` holding exactly one root of ``poly``."""

    lo: Fraction
    hi: Fraction
    poly: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("IsolatingInterval needs lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Rational) -> bool:
        return self.lo < x < self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def bisect(self) -> "IsolatingInterval":
        """Halve the interval, keeping the half that holds the root."""
        lo, hi = self.lo, self.hi
        m = _split_point(self.poly, lo, hi)
        s_lo = _sign_at(self.poly, lo)
        s_m = _sign_at(self.poly, m)
        if s_lo * s_m < 0:
            return IsolatingInterval(lo, m, self.poly)
        return IsolatingInterval(m, hi, self.poly)

    def refine(self, width: Rational) -> "IsolatingInterval":
        iv = self
        while iv.width > width:
            iv = iv.bisect()
        return iv

    def avoid(self, x: Rational) -> "IsolatingInterval":
        """Shrink until ``x`` no longer lies inside, unless ``x`` is the root."""
        iv = self
        while iv.contains(x):
            if _sign_at(self.poly, Fraction(x)) == 0:
                raise ValueError("point is the isolated root itself")
            iv = iv.bisect()
        return iv


def _split_point(p: Sequence[int], lo: Fraction, hi: Fraction) -> Fraction:
    # a point strictly inside (lo, hi) that is not a root of p
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 5), (3, 5)):
        m = lo + (hi - lo) * num / den
        if _sign_at(p, m) != 0:
            return m
    k = 7
    while True:
        m = lo + (hi - lo) / k
        if _sign_at(p, m) != 0:
            return m
        k += 1


def sturm_isolate_roots(p: Sequence[int], lo: Rational = 0,
                        hi: Rational | None = None) -> list[IsolatingInterval]:
    """Isolate the distinct real roots of ``p`` in the open interval ``(lo, hi)``.

    ``hi=None`` means the Cauchy root bound.  Roots are isolated on the
    square-free part of ``p``.  Interval endpoints are never roots.
    """
    p = poly_trim(p)
    if not p:
        raise ValueError("cannot isolate roots of the zero polynomial")
    q = square_free_part(p)
    if len(q) <= 1:
        return []
    lo = Fraction(lo)
    hi = root_bound(q) if hi is None else Fraction(hi)
    if lo >= hi:
        return []
    chain = sturm_chain(q)
    qt = tuple(q)
    out: list[IsolatingInterval] = []

    # endpoints that are roots are excluded from the open range
    a = lo if _sign_at(q, lo) != 0 else None
    b = hi if _sign_at(q, hi) != 0 else None
    if a is None:
        a = _shrink_from_root(q, chain, lo, hi, left=True)
    if b is None:
        b = _shrink_from_root(q, chain, lo, hi, left=False)
    stack = [(a, b, sign_variations(chain, a) - sign_variations(chain, b))]
    while stack:
        x, y, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(x, y, qt))
            continue
        m = _split_point(q, x, y)
        vm = sign_variations(chain, m)
        stack.append((m, y, vm - sign_variations(chain, y)))
        stack.append((x, m, sign_variations(chain, x) - vm))
    out.sort(key=lambda iv: iv.lo)
    return out


def _shrink_from_root(q, chain, lo: Fraction, hi: Fraction, left: bool) -> Fraction:
    """Move an endpoint that is itself a root inward past no other root."""
    root = lo if left else hi
    width = (hi - lo) / 2
    while True:
        x = root + width if left else root - width
        if _sign_at(q, x) != 0:
            a, b = (root, x) if left else (x, root)
            # count roots in (a, b]; root itself is not counted when left
            va = sign_variations(chain, a)
            vb = sign_variations(chain, b)
            inside = va - vb
            if left and inside == 0:
                return x
            if not left:
                # (x, root]: root counted once
                if inside == 1:
                    return x
        width /= 2
