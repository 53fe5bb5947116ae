"""Classical invariants computed from a Seifert matrix.

A Seifert matrix ``V`` is a square integer matrix of even size with
``det(V - V^T) = 1``.  From it we get the Alexander polynomial
``det(tV - V^T)``, the determinant ``|det(V + V^T)|`` and the
Levine-Tristram signature ``sign((1 - w) V + (1 - conj w) V^T)``.

Points of the upper half circle are parametrized by a rational ``s > 0``
through :func:`knotcalc.exactalg.circle_point`.  With ``S = V + V^T`` and
``A = V - V^T`` the form at ``s`` is a positive multiple of
``s*S - i*A``, so its degeneracy locus is the set of real roots of the
integer polynomial ``det(s*S - i*A)``; between consecutive roots the
signature is constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from . import exactalg as ea
from .exactalg import HermitianMatrix, IsolatingInterval
from .poly import LaurentPoly


class NotASeifertMatrix(ValueError):
    pass


class MinusOne:
    """Sentinel for the point ``omega = -1``, which no finite ``s`` reaches."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "MINUS_ONE"


MINUS_ONE = MinusOne()
Point = Union[Fraction, int, MinusOne]


@dataclass(frozen=True)
class SeifertMatrix:
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def genus(self) -> int:
        return self.size // 2

    def transpose(self) -> "SeifertMatrix":
        return SeifertMatrix(tuple(zip(*self.rows)) if self.rows else ())

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def symmetrized(self) -> list[list[int]]:
        n = self.size
        return [[self.rows[i][j] + self.rows[j][i] for j in range(n)] for i in range(n)]

    def antisymmetrized(self) -> list[list[int]]:
        n = self.size
        return [[self.rows[i][j] - self.rows[j][i] for j in range(n)] for i in range(n)]


def validate_seifert(V) -> SeifertMatrix:
    if isinstance(V, SeifertMatrix):
        V = V.tolist()
    rows = [list(r) for r in V]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise NotASeifertMatrix("not a Seifert matrix: matrix is not square")
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise NotASeifertMatrix(f"not a Seifert matrix: non-integer entry {x!r}")
    if n % 2:
        raise NotASeifertMatrix(f"not a Seifert matrix: odd dimension {n}")
    skew = [[rows[i][j] - rows[j][i] for j in range(n)] for i in range(n)]
    d = ea.integer_determinant(skew)
    if d != 1:
        raise NotASeifertMatrix(f"not a Seifert matrix: det(V - V^T) = {d}, expected 1")
    return SeifertMatrix(tuple(tuple(r) for r in rows))


UNKNOT = SeifertMatrix(())


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> list[int]:
    """Integer coefficients of the polynomial through ``(xs, ys)`` (Newton form)."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [shifted[k] - xs[i] * poly[k] for k in range(n)]
        poly[0] += coef[i]
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("interpolated polynomial is not integral")
        out.append(int(c))
    return ea.poly_trim(out)


def alexander(V: SeifertMatrix) -> LaurentPoly:
    n = V.size
    if n == 0:
        return LaurentPoly.constant(1)
    xs = list(range(n + 1))
    ys = []
    for k in xs:
        M = [[k * V.rows[i][j] - V.rows[j][i] for j in range(n)] for i in range(n)]
        ys.append(Fraction(ea.integer_determinant(M)))
    coeffs = _interpolate(xs, ys)
    return LaurentPoly.from_list(coeffs).normalize_symmetric()


def determinant(V: SeifertMatrix) -> int:
    d = abs(ea.integer_determinant(V.symmetrized()))
    if d % 2 == 0:
        raise ArithmeticError(f"even determinant {d}: input is not a knot's Seifert matrix")
    return d


def hermitian_form(V: SeifertMatrix, s) -> HermitianMatrix:
    """``(1 - w) V + (1 - conj w) V^T`` at ``w = circle_point(s)``."""
    w = ea.circle_point(s).omega
    a = 1 - w
    b = 1 - w.conjugate()
    n = V.size
    return HermitianMatrix([[a * V.rows[i][j] + b * V.rows[j][i] for j in range(n)]
                            for i in range(n)])


def signature_at(V: SeifertMatrix, point: Point) -> tuple[int, int]:
    if V.size == 0:
        return 0, 0
    if point is MINUS_ONE:
        return ea.ldlstar_signature(HermitianMatrix(V.symmetrized()))
    return ea.ldlstar_signature(hermitian_form(V, point))


def jump_polynomial(V: SeifertMatrix) -> list[int]:
    """Integer coefficients of ``det(s*(V + V^T) - i*(V - V^T))`` in ``s``."""
    n = V.size
    if n == 0:
        return [1]
    S = V.symmetrized()
    A = V.antisymmetrized()
    xs = list(range(n + 1))
    ys = []
    for k in xs:
        re, im = ea.gaussian_integer_determinant(
            [[(k * S[i][j], -A[i][j]) for j in range(n)] for i in range(n)])
        if im != 0:
            raise ArithmeticError("determinant of a Hermitian matrix is not real")
        ys.append(Fraction(re))
    return _interpolate(xs, ys)


# ---------------------------------------------------------------------------
# Step functions


@dataclass(frozen=True)
class Jump:
    """A jump of the signature function inside an isolating interval in ``s``."""

    interval: IsolatingInterval
    left: int
    right: int

    @property
    def value_at_jump(self) -> Fraction:
        # averaged convention; metadata only
        return Fraction(self.left + self.right, 2)


@dataclass(frozen=True)
class SignatureStepFunction:
    """Exact piecewise-constant signature function on the upper half circle.

    ``values[k]`` is the signature between jump ``k-1`` and jump ``k``
    (``values[0]`` near ``omega = 1``, ``values[-1]`` near ``omega = -1``).
    ``poly`` is a square-free integer polynomial in ``s`` vanishing at every
    jump; it is kept so that jump intervals can be refined on demand.
    """

    jumps: tuple[Jump, ...]
    values: tuple[int, ...]
    value_at_minus_one: int
    nullity_at_minus_one: int = 0
    poly: tuple[int, ...] = field(default=(1,), compare=False)

    def __post_init__(self):
        if len(self.values) != len(self.jumps) + 1:
            raise ValueError("need exactly one more value than jumps")

    @property
    def jump_points(self) -> tuple[IsolatingInterval, ...]:
        return tuple(j.interval for j in self.jumps)

    def segments(self) -> list[tuple[IsolatingInterval | None, IsolatingInterval | None, int]]:
        """``(left jump or None for s=0, right jump or None for s=oo, value)``."""
        bounds = [None, *self.jump_points, None]
        return [(bounds[k], bounds[k + 1], v) for k, v in enumerate(self.values)]

    def all_values(self) -> set[int]:
        return set(self.values) | {self.value_at_minus_one}

    def takes_positive(self) -> bool:
        return any(v > 0 for v in self.all_values())

    def takes_negative(self) -> bool:
        return any(v < 0 for v in self.all_values())

    def is_zero(self) -> bool:
        return self.all_values() == {0}

    def value_at(self, s) -> int:
        """Signature at the rational parameter ``s > 0``.

        Raises ``ValueError`` if ``s`` is a degenerate point (a root of the
        jump polynomial), where the value is not determined by the segments.
        """
        s = Fraction(s)
        if s <= 0:
            raise ValueError("s must be positive")
        if ea.poly_eval(self.poly, s) == 0:
            raise ValueError(f"s = {s} is a root of the jump polynomial")
        for k, j in enumerate(self.jumps):
            iv = j.interval.avoid(s)
            if s <= iv.lo:
                return self.values[k]
        return self.values[-1]

    def negate(self) -> "SignatureStepFunction":
        return SignatureStepFunction(
            tuple(Jump(j.interval, -j.left, -j.right) for j in self.jumps),
            tuple(-v for v in self.values),
            -self.value_at_minus_one, self.nullity_at_minus_one, self.poly)

    def refined(self, width) -> "SignatureStepFunction":
        return SignatureStepFunction(
            tuple(Jump(j.interval.refine(width), j.left, j.right) for j in self.jumps),
            self.values, self.value_at_minus_one, self.nullity_at_minus_one, self.poly)

    def equivalent(self, other: "SignatureStepFunction") -> bool:
        """Same values and jumps at the same points (brackets may differ)."""
        if self.values != other.values or self.value_at_minus_one != other.value_at_minus_one:
            return False
        return all(same_root(a.interval, b.interval) for a, b in zip(self.jumps, other.jumps))


def same_root(a: IsolatingInterval, b: IsolatingInterval) -> bool:
    """Whether two isolating intervals bracket the same real number.

    Any common root lies on ``gcd(a.poly, b.poly)``; since each interval
    holds exactly one root of its own polynomial, the roots agree iff that
    gcd has a root in the intersection.
    """
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo >= hi:
        return False
    g = ea.poly_gcd(a.poly, b.poly)
    if len(g) <= 1:
        return False
    return bool(ea.sturm_isolate_roots(g, lo, hi))


def build_step_function(poly: Sequence[int], evaluate: Callable[[Fraction], int],
                        value_at_minus_one: int,
                        nullity_at_minus_one: int = 0) -> SignatureStepFunction:
    """Assemble a step function from a jump polynomial and a pointwise oracle.

    ``evaluate`` must return the exact signature at any rational ``s > 0``
    that is not a root of ``poly``.  One sample is taken in each gap between
    isolated roots; roots across which the value does not change are dropped.
    """
    sq = ea.square_free_part(poly)
    roots = ea.sturm_isolate_roots(sq, 0, None) if len(sq) > 1 else []
    samples = []
    prev = Fraction(0)
    for iv in roots:
        samples.append((prev + iv.lo) / 2 if prev < iv.lo else iv.lo)
        prev = iv.hi
    samples.append(prev + 1)
    for k, x in enumerate(samples):
        if ea.poly_eval(sq, x) == 0:
            raise ArithmeticError("sample point landed on a root")
    values = [evaluate(x) for x in samples]
    jumps: list[Jump] = []
    kept = [values[0]]
    for iv, right in zip(roots, values[1:]):
        if right != kept[-1]:
            jumps.append(Jump(iv, kept[-1], right))
            kept.append(right)
    return SignatureStepFunction(tuple(jumps), tuple(kept), value_at_minus_one,
                                 nullity_at_minus_one, tuple(sq))


def signature_function(V: SeifertMatrix) -> SignatureStepFunction:
    sig_m1, null_m1 = signature_at(V, MINUS_ONE)
    return build_step_function(jump_polynomial(V), lambda s: signature_at(V, s)[0],
                               sig_m1, null_m1)


# ---------------------------------------------------------------------------
# Constructions


def block_sum(V1: SeifertMatrix, V2: SeifertMatrix) -> SeifertMatrix:
    n1, n2 = V1.size, V2.size
    rows = [list(r) + [0] * n2 for r in V1.rows]
    rows += [[0] * n1 + list(r) for r in V2.rows]
    return SeifertMatrix(tuple(tuple(r) for r in rows))


def mirror(V: SeifertMatrix) -> SeifertMatrix:
    n = V.size
    return SeifertMatrix(tuple(tuple(-V.rows[j][i] for j in range(n)) for i in range(n)))


def congruent(V: SeifertMatrix, P: Sequence[Sequence[int]]) -> SeifertMatrix:
    """``P^T V P`` for a unimodular integer matrix ``P``."""
    n = V.size
    if abs(ea.integer_determinant(P)) != 1:
        raise ValueError("P is not unimodular")
    VP = [[sum(V.rows[i][k] * P[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    out = [[sum(P[k][i] * VP[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return validate_seifert(out)


def stabilize(V: SeifertMatrix, column: Sequence[int], transpose: bool = False) -> SeifertMatrix:
    """Elementary S-equivalence enlargement of ``V`` by two rows and columns.

    The new matrix is ``[[V, xi, 0], [0, 0, 1], [0, 0, 0]]`` (or its
    transpose pattern ``[[V, 0, 0], [xi^T, 0, 0], [0, 1, 0]]``), which
    leaves every invariant here unchanged.
    """
    n = V.size
    xi = list(column)
    if len(xi) != n:
        raise ValueError("stabilizing column has the wrong length")
    rows = [[0] * (n + 2) for _ in range(n + 2)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = V.rows[i][j]
    if not transpose:
        for i in range(n):
            rows[i][n] = xi[i]
        rows[n][n + 1] = 1
    else:
        for j in range(n):
            rows[n][j] = xi[j]
        rows[n + 1][n] = 1
    return validate_seifert(rows)
