"""Integer Laurent polynomials in one variable ``t``."""

from __future__ import annotations

from typing import Iterable, Mapping

from .exactalg import GaussianRational


class NotAlexanderPolynomial(ValueError):
    pass


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients.

    Stored as a map exponent -> nonzero coefficient, so equality is
    structural and the zero polynomial is the empty map.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._coeffs = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_list(cls, coeffs: Iterable[int], shift: int = 0) -> "LaurentPoly":
        """Coefficients listed from exponent ``shift`` upwards."""
        return cls((shift + k, c) for k, c in enumerate(coeffs))

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_exp(self) -> int:
        return min(self._coeffs)

    def max_exp(self) -> int:
        return max(self._coeffs)

    def span(self) -> int:
        return self.max_exp() - self.min_exp() if self._coeffs else 0

    def __getitem__(self, e: int) -> int:
        return self._coeffs.get(e, 0)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return LaurentPoly(list(self._coeffs.items()) + list(other._coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def substitute_power(self, n: int) -> "LaurentPoly":
        if n <= 0:
            raise ValueError("substitution t -> t^n needs n >= 1")
        return LaurentPoly({n * e: c for e, c in self._coeffs.items()})

    def reflect(self) -> "LaurentPoly":
        """``t -> t^-1``."""
        return LaurentPoly({-e: c for e, c in self._coeffs.items()})

    def value_at_one(self) -> int:
        return sum(self._coeffs.values())

    def value_at_minus_one(self) -> int:
        return sum(c if e % 2 == 0 else -c for e, c in self._coeffs.items())

    def evaluate(self, z, z_inverse) -> GaussianRational:
        z = GaussianRational.coerce(z)
        zi = GaussianRational.coerce(z_inverse)
        if z * zi != 1:
            raise ValueError("z_inverse is not the inverse of z")
        total = GaussianRational(0)
        for e, c in self._coeffs.items():
            total = total + c * (z ** e if e >= 0 else zi ** (-e))
        return total

    def is_symmetric(self) -> bool:
        return self == self.reflect()

    def normalize_symmetric(self) -> "LaurentPoly":
        """The unique ``+-t^k * self`` that is symmetric with value 1 at t=1."""
        if self.is_zero():
            raise NotAlexanderPolynomial("zero polynomial")
        v = self.value_at_one()
        if abs(v) != 1:
            raise NotAlexanderPolynomial(f"value at t=1 is {v}, expected +-1")
        lo, hi = self.min_exp(), self.max_exp()
        if (lo + hi) % 2:
            raise NotAlexanderPolynomial("odd span: no symmetric representative")
        f = self.shift(-(lo + hi) // 2)
        if v < 0:
            f = -f
        if not f.is_symmetric():
            raise NotAlexanderPolynomial("coefficients are not palindromic")
        return f

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self._coeffs.items()]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((e, c) for e, c in data)

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in self._coeffs.items():
            if e == 0:
                mono = str(abs(c))
            else:
                var = "t" if e == 1 else f"t^{e}"
                mono = var if abs(c) == 1 else f"{abs(c)}*{var}"
            if not parts:
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {mono}")
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self._coeffs!r})"


ONE = LaurentPoly.constant(1)


def lp_arith(a: LaurentPoly, b: LaurentPoly, kind: str) -> LaurentPoly:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def lp_substitute_power(a: LaurentPoly, n: int) -> LaurentPoly:
    return a.substitute_power(n)


def lp_normalize_symmetric(a: LaurentPoly) -> LaurentPoly:
    return a.normalize_symmetric()


def lp_eval(a: LaurentPoly, z, z_inverse) -> GaussianRational:
    return a.evaluate(z, z_inverse)
