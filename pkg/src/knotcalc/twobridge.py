"""Two-bridge fractions, lens-space linking forms and the algebraic
unknotting-number-one test.

If a knot can be turned into an Alexander-polynomial-one knot by a single
crossing change, some generator ``h`` of the first homology of its double
branched cover has self-linking ``+-2/det``.  For a two-bridge knot with
fraction ``p/q`` the cover is ``L(p, q)`` and ``l(t*mu, t*mu) = t^2 q / p``,
so the test reduces to whether ``t^2 q = +-2 (mod p)`` has a unit solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .poly import LaurentPoly


class NotAGenerator(ValueError):
    pass


@dataclass(frozen=True)
class TwoBridgeFraction:
    p: int
    q: int

    def __post_init__(self):
        if self.p <= 0 or self.p % 2 == 0:
            raise ValueError(f"p must be a positive odd integer, got {self.p}")
        if not 0 < self.q < self.p or gcd(self.p, self.q) != 1:
            raise ValueError(f"need 0 < q < p with gcd(p, q) = 1, got q = {self.q}")

    @classmethod
    def normalized(cls, p: int, q: int) -> "TwoBridgeFraction":
        """Reduce ``q`` into ``(0, p)``; ``p`` may be given with either sign."""
        p = abs(p)
        return cls(p, q % p)

    @classmethod
    def from_continued_fraction(cls, terms: Sequence[int]) -> "TwoBridgeFraction":
        x = cf_to_fraction(terms)
        return cls.normalized(x.numerator, x.denominator)

    def mirror(self) -> "TwoBridgeFraction":
        return TwoBridgeFraction(self.p, self.p - self.q)


@dataclass(frozen=True)
class LinkingValue:
    """An element ``numerator/modulus`` of Q/Z, reduced."""

    numerator: int
    modulus: int

    @classmethod
    def of(cls, num: int, den: int) -> "LinkingValue":
        if den <= 0:
            raise ValueError("modulus must be positive")
        num %= den
        g = gcd(num, den)
        return cls(num // g, den // g)

    def __str__(self):
        return f"{self.numerator}/{self.modulus}"


@dataclass(frozen=True)
class BfVerdict:
    obstructed: bool
    checked_modulus: int
    witness: Optional[int] = None
    target: Optional[int] = None  # +2 or -2 when satisfiable

    @property
    def tag(self) -> str:
        return "Obstructed" if self.obstructed else "Satisfiable"

    def to_json(self) -> dict:
        out = {"verdict": self.tag, "checked_modulus": self.checked_modulus}
        if not self.obstructed:
            out["witness"] = self.witness
            out["target"] = self.target
        return out


def cf_to_fraction(terms: Sequence[int]) -> Fraction:
    """Value of ``a0 + 1/(a1 + 1/(a2 + ...))``."""
    if not terms:
        raise ValueError("empty continued fraction")
    x = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        if x == 0:
            raise ZeroDivisionError("continued fraction has a zero denominator")
        x = a + 1 / x
    return x


def linking_self(f: TwoBridgeFraction, t: int) -> LinkingValue:
    if gcd(t, f.p) != 1:
        raise NotAGenerator(f"{t} is not a generator: gcd({t}, {f.p}) != 1")
    return LinkingValue.of(t * t * f.q, f.p)


def bf_obstruction(f: TwoBridgeFraction) -> BfVerdict:
    """Exhaustive search for a unit ``t`` with ``t^2 q = +-2 (mod p)``."""
    p, q = f.p, f.q
    targets = (2 % p, -2 % p)
    for t in range(1, p):
        if gcd(t, p) != 1:
            continue
        r = t * t * q % p
        if r == targets[0]:
            return BfVerdict(False, p, t, 2)
        if r == targets[1]:
            return BfVerdict(False, p, t, -2)
    return BfVerdict(True, p)


def mod5_shortcut(p: int, q: int) -> Optional[BfVerdict]:
    """Obstructed if ``5 | p`` and ``+-2/q`` are both non-residues mod 5.

    Returns ``None`` when inconclusive.
    """
    if p % 5 or q % 5 == 0:
        return None
    squares = {x * x % 5 for x in range(1, 5)}
    inv_q = pow(q, -1, 5)
    if (2 * inv_q) % 5 in squares or (-2 * inv_q) % 5 in squares:
        return None
    return BfVerdict(True, p)


def two_bridge_alexander(f: TwoBridgeFraction) -> LaurentPoly:
    """Alexander polynomial of the two-bridge knot ``b(p, q)``.

    With ``q`` replaced by an odd representative mod ``p``, set
    ``e_i = (-1)^floor(i q / p)``; then ``Delta = sum_k (-1)^k t^(e_1+...+e_k)``.
    """
    p, q = f.p, f.q
    if q % 2 == 0:
        q -= p
    coeffs: dict[int, int] = {}
    exp = 0
    for k in range(p):
        if k:
            exp += 1 if (k * q // p) % 2 == 0 else -1
        coeffs[exp] = coeffs.get(exp, 0) + (-1) ** k
    return LaurentPoly(coeffs).normalize_symmetric()
