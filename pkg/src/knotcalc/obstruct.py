"""Obstructions and bound propagation for unknotting-type invariants.

The ledger holds an integer interval for each of

    g_alg  algebraic genus
    sd_a   algebraic surgery description number
    u_a    algebraic unknotting number
    tu_a   algebraic untwisting number
    sd     surgery description number
    tu     untwisting number
    u      unknotting number

and ``propagate`` closes it under the known inequalities between them.
Every bound carries the rule that produced it, so a contradiction can be
reported together with the chain of rules behind it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import kirby
from . import seifert as sf
from .knotspec import KnotTable, default_table, pretzel_seifert
from .seifert import SignatureStepFunction
from .twobridge import TwoBridgeFraction, bf_obstruction, cf_to_fraction, mod5_shortcut, two_bridge_alexander

INVARIANTS = ("g_alg", "sd_a", "u_a", "tu_a", "sd", "tu", "u")

# x <= a*y + b
_LINEAR_RULES: tuple[tuple[str, int, str, int], ...] = (
    ("g_alg", 1, "sd_a", 0),
    ("sd_a", 1, "u_a", 0),
    ("u_a", 2, "g_alg", 0),
    ("u_a", 1, "tu_a", 0),
    ("tu_a", 1, "u_a", 0),
    ("sd_a", 1, "tu_a", 0),
    ("tu_a", 2, "sd_a", 0),
    ("sd_a", 1, "sd", 0),
    ("tu_a", 1, "tu", 0),
    ("sd", 1, "tu", 0),
    ("tu", 2, "sd", 1),
    ("tu", 1, "u", 0),
    ("u_a", 1, "u", 0),
)


def _rule_text(x: str, a: int, y: str, b: int) -> str:
    rhs = y if a == 1 else f"{a}*{y}"
    return f"{x} <= {rhs}" + (f" + {b}" if b else "")


class InconsistentLedger(ValueError):
    def __init__(self, invariant: str, lo: int, hi: int, chain: list[str]):
        self.invariant = invariant
        self.lo = lo
        self.hi = hi
        self.chain = chain
        super().__init__(f"{invariant}: lower bound {lo} exceeds upper bound {hi}; "
                         "derivation: " + "; ".join(chain))


@dataclass(frozen=True)
class Interval:
    lo: int = 0
    hi: Optional[int] = None  # None is +infinity

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < 0):
            raise ValueError("invariants are nonnegative")

    @property
    def exact(self) -> Optional[int]:
        return self.lo if self.hi == self.lo else None

    def contains(self, other: "Interval") -> bool:
        """Whether ``other`` is at least as tight as ``self``."""
        return other.lo >= self.lo and (self.hi is None or (other.hi is not None and other.hi <= self.hi))

    def to_json(self) -> list:
        return [self.lo, self.hi]

    def __str__(self):
        if self.exact is not None:
            return str(self.lo)
        return f"[{self.lo}, {'inf' if self.hi is None else self.hi}]"


@dataclass
class BoundsLedger:
    bounds: dict[str, Interval] = field(default_factory=lambda: {k: Interval() for k in INVARIANTS})
    alexander_trivial: Optional[bool] = None
    signature_takes_positive: bool = False
    signature_takes_negative: bool = False
    # (name, "lo"|"hi") -> (rule, dependencies)
    reasons: dict[tuple[str, str], tuple[str, tuple[tuple[str, str], ...]]] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Interval:
        return self.bounds[name]

    def copy(self) -> "BoundsLedger":
        return BoundsLedger(dict(self.bounds), self.alexander_trivial, self.signature_takes_positive,
                            self.signature_takes_negative, dict(self.reasons))

    def tighten(self, name: str, lo: Optional[int] = None, hi: Optional[int] = None,
                reason: str = "input", deps: Sequence[tuple[str, str]] = ()) -> bool:
        """Intersect ``name`` with ``[lo, hi]``; returns whether anything changed."""
        if name not in self.bounds:
            raise KeyError(f"unknown invariant {name!r}")
        cur = self.bounds[name]
        new_lo, new_hi = cur.lo, cur.hi
        changed = False
        if lo is not None and lo > new_lo:
            new_lo = lo
            self.reasons[(name, "lo")] = (reason, tuple(deps))
            changed = True
        if hi is not None and (new_hi is None or hi < new_hi):
            new_hi = hi
            self.reasons[(name, "hi")] = (reason, tuple(deps))
            changed = True
        if changed:
            if new_hi is not None and new_lo > new_hi:
                raise InconsistentLedger(name, new_lo, new_hi, self.chain(name))
            self.bounds[name] = Interval(new_lo, new_hi)
        return changed

    def chain(self, name: str) -> list[str]:
        """Rules behind the current bounds of ``name``, dependencies first."""
        out: list[str] = []
        seen = set()

        def walk(key):
            if key in seen or key not in self.reasons:
                return
            seen.add(key)
            rule, deps = self.reasons[key]
            for d in deps:
                walk(d)
            out.append(f"{key[0]}.{key[1]} by {rule}")

        walk((name, "lo"))
        walk((name, "hi"))
        return out

    @property
    def both_signs(self) -> bool:
        return self.signature_takes_positive and self.signature_takes_negative

    def to_json(self) -> dict:
        out: dict = {k: self.bounds[k].to_json() for k in INVARIANTS}
        out["alexander_trivial"] = self.alexander_trivial
        out["signature_takes_positive"] = self.signature_takes_positive
        out["signature_takes_negative"] = self.signature_takes_negative
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BoundsLedger":
        led = cls()
        for k in INVARIANTS:
            if k in data:
                lo, hi = data[k]
                led.tighten(k, lo, hi)
        led.alexander_trivial = data.get("alexander_trivial")
        led.signature_takes_positive = bool(data.get("signature_takes_positive", False))
        led.signature_takes_negative = bool(data.get("signature_takes_negative", False))
        return led

    def __str__(self):
        return ", ".join(f"{k}={self.bounds[k]}" for k in INVARIANTS)


def propagate(ledger: BoundsLedger) -> BoundsLedger:
    """Least fixpoint of the inequality rules; the input is not modified.

    Raises ``InconsistentLedger`` if some interval becomes empty.
    """
    led = ledger.copy()
    if led.alexander_trivial is True:
        for k in ("g_alg", "sd_a", "u_a", "tu_a"):
            led.tighten(k, hi=0, reason="Alexander polynomial 1 => algebraic invariants vanish")
    elif led.alexander_trivial is False:
        led.tighten("g_alg", lo=1, reason="Alexander polynomial != 1 => g_alg >= 1")
    if led.both_signs:
        led.tighten("sd_a", lo=2, reason="signature takes both signs => not H-slice => sd_a >= 2")
    changed = True
    while changed:
        changed = False
        for x, a, y, b in _LINEAR_RULES:
            rule = _rule_text(x, a, y, b)
            yb = led[y]
            if yb.hi is not None:
                changed |= led.tighten(x, hi=a * yb.hi + b, reason=rule, deps=[(y, "hi")])
            xb = led[x]
            lo = max(0, math.ceil(Fraction(xb.lo - b, a)))
            changed |= led.tighten(y, lo=lo, reason=rule, deps=[(x, "lo")])
    return led


# ---------------------------------------------------------------------------
# signature sign test


class SignClass(enum.Enum):
    BOTH_SIGNS = "BothSigns"
    NON_POSITIVE = "NonPositive"
    NON_NEGATIVE = "NonNegative"
    ZERO = "Zero"

    def __str__(self):
        return self.value


def hslice_sign_test(sfn: SignatureStepFunction) -> SignClass:
    """Sign behaviour of a signature function over all segments and at -1.

    A knot that is H-slice in a sum of copies of CP^2 has nonpositive
    signature everywhere (nonnegative for the reversed orientation), so
    ``BOTH_SIGNS`` rules out a single surgery-description move to a slice knot.
    """
    pos, neg = sfn.takes_positive(), sfn.takes_negative()
    if pos and neg:
        return SignClass.BOTH_SIGNS
    if neg:
        return SignClass.NON_POSITIVE
    if pos:
        return SignClass.NON_NEGATIVE
    return SignClass.ZERO


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class TwistCertificate:
    """Multi-twists (signed full-twist counts, one per region) reaching ``target``."""

    moves: tuple[int, ...]
    target: str = "unknot"
    status: str = "asserted, not verified"

    def __post_init__(self):
        if not self.moves or any(m == 0 for m in self.moves):
            raise ValueError("certificate moves must be a nonempty list of nonzero integers")
        if self.target not in ("unknot", "alexander_one"):
            raise ValueError(f"unknown certificate target {self.target!r}")

    @classmethod
    def from_json(cls, data: dict) -> "TwistCertificate":
        return cls(tuple(data["moves"]), data.get("target", "unknot"),
                   data.get("status", "asserted, not verified"))

    def to_json(self) -> dict:
        return {"moves": list(self.moves), "target": self.target, "status": self.status}


def certificate_to_bounds(c: TwistCertificate) -> dict[str, Interval]:
    sd_name, tu_name = ("sd", "tu") if c.target == "unknot" else ("sd_a", "tu_a")
    tu_hi = min(sum(abs(m) for m in c.moves), kirby.untwist_upper_bound(c.moves))
    return {sd_name: Interval(0, len(c.moves)), tu_name: Interval(0, tu_hi)}


def apply_certificate(ledger: BoundsLedger, c: TwistCertificate) -> None:
    for name, iv in certificate_to_bounds(c).items():
        ledger.tighten(name, hi=iv.hi, reason=f"certificate {list(c.moves)} to {c.target} ({c.status})")


# ---------------------------------------------------------------------------
# the pretzel family


@dataclass(frozen=True)
class Stage:
    name: str
    ok: bool
    detail: str

    def to_json(self) -> dict:
        return {"stage": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class FamilyReport:
    n: int
    p: int
    q: int
    stages: list[Stage]
    ledger: Optional[BoundsLedger]

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    @property
    def failed_stage(self) -> Optional[str]:
        return next((s.name for s in self.stages if not s.ok), None)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "q": self.q, "ok": self.ok,
                "stages": [s.to_json() for s in self.stages],
                "ledger": self.ledger.to_json() if self.ledger else None}


FAMILY_EXPECTED = {"sd": (1, 1), "tu": (2, 2), "u_a": (2, 2), "tu_a": (2, 2), "sd_a": (1, 1)}


def certify_family(n: int, q: int = 4) -> FamilyReport:
    """Check that ``K_n = P(10n+3, 1, 3)`` has sd = 1 and tu = 2.

    ``q`` is the claimed denominator of the two-bridge fraction; anything
    other than 4 should fail the fraction stage.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = 40 * n + 15
    stages: list[Stage] = []
    report = FamilyReport(n, p, q, stages, None)

    V = pretzel_seifert(10 * n + 3, 1, 3)
    det = sf.determinant(V)
    stages.append(Stage("pretzel determinant", det == p, f"det P({10 * n + 3},1,3) = {det}, expected {p}"))
    x = cf_to_fraction([10 * n + 3, 1, 3])
    stages.append(Stage("continued fraction", x == Fraction(p, q) and x.denominator == q,
                        f"[{10 * n + 3},1,3] = {x}, claimed {p}/{q}"))
    if not report.ok:
        return report

    f = TwoBridgeFraction(p, q)
    alex_tb = two_bridge_alexander(f)
    alex_v = sf.alexander(V)
    stages.append(Stage("two-bridge Alexander", alex_tb == alex_v,
                        f"from fraction: {alex_tb}; from Seifert matrix: {alex_v}"))

    verdict = bf_obstruction(f)
    short = mod5_shortcut(p, q)
    agree = short is None or short.obstructed == verdict.obstructed
    stages.append(Stage("linking form obstruction", verdict.obstructed and agree,
                        f"search: {verdict.tag}; mod 5: {'inconclusive' if short is None else short.tag}"))
    if not report.ok:
        return report

    cert = TwistCertificate((2,), "unknot")
    led = BoundsLedger(alexander_trivial=alex_v == 1)
    led.tighten("u_a", lo=2, reason="no generator with self-linking +-2/det => u_a >= 2")
    apply_certificate(led, cert)
    stages.append(Stage("certificate", True, "+1/2 surgery is a 2-twist to the unknot (asserted, not verified)"))
    try:
        led = propagate(led)
    except InconsistentLedger as exc:
        stages.append(Stage("propagate", False, str(exc)))
        return report
    report.ledger = led
    bad = [k for k, (lo, hi) in FAMILY_EXPECTED.items() if (led[k].lo, led[k].hi) != (lo, hi)]
    stages.append(Stage("propagate", not bad, str(led) if not bad else f"unexpected bounds for {bad}: {led}"))
    return report


def whitehead_ledger(p: int = 2, table: Optional[KnotTable] = None) -> BoundsLedger:
    """Ledger for the ``(p,1)``-cable of an untwisted Whitehead double."""
    from .knotspec import Cable, Named, evaluate

    table = table if table is not None else default_table()
    entry = table["whitehead_double"]
    report = evaluate(Cable(p, Named("whitehead_double")), table, signature=False)
    led = BoundsLedger(alexander_trivial=report.alexander == 1)
    if entry.asserted.get("nontrivial"):
        led.tighten("sd", lo=1, reason="asserted nontrivial (table metadata)")
    if entry.certificate:
        apply_certificate(led, TwistCertificate.from_json(entry.certificate))
    return propagate(led)


def signature_ledger(sfn: SignatureStepFunction, alexander_trivial: Optional[bool],
                     g_alg_hi: Optional[int] = None) -> BoundsLedger:
    led = BoundsLedger(alexander_trivial=alexander_trivial,
                       signature_takes_positive=sfn.takes_positive(),
                       signature_takes_negative=sfn.takes_negative())
    if g_alg_hi is not None:
        led.tighten("g_alg", hi=g_alg_hi, reason="input")
    return propagate(led)
