"""Knot expressions, the bundled knot table, and invariant evaluation.

Grammar (whitespace is insignificant)::

    expr  := sum
    sum   := atom ('#' atom)*
    atom  := '-' atom | func | NAME | '(' expr ')'
    func  := 'P(' INT ',' INT ',' INT ')'
           | 'TB(' INT (',' INT)* ')'
           | 'cable(' INT ',' expr ')'
           | 'seifert(' matrix ')'
    NAME  := [A-Za-z0-9_]+

``-`` is the mirror and binds tighter than ``#`` (connected sum).
``cable(n, K)`` is the (n,1)-cable.  ``matrix`` is a JSON-style nested list
of integers, e.g. ``seifert([[-1,1],[0,-1]])``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from importlib import resources
from math import comb
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from . import exactalg as ea
from . import seifert as sf
from .poly import LaurentPoly
from .seifert import SeifertMatrix, SignatureStepFunction
from .twobridge import TwoBridgeFraction, cf_to_fraction, two_bridge_alexander

TABLE_ENV = "KNOTCALC_TABLE"


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownKnot(KeyError):
    def __str__(self):
        return f"unknown knot name {self.args[0]!r}"


class InvalidParameters(ValueError):
    pass


class TableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class SeifertLiteral:
    matrix: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Pretzel:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if any(x % 2 == 0 for x in (self.p, self.q, self.r)):
            raise InvalidParameters(f"pretzel parameters must all be odd: P({self.p},{self.q},{self.r})")


@dataclass(frozen=True)
class TwoBridge:
    terms: tuple[int, ...]

    def __post_init__(self):
        if not self.terms:
            raise InvalidParameters("TB() needs at least one term")

    def fraction(self) -> TwoBridgeFraction:
        try:
            x = cf_to_fraction(self.terms)
        except ZeroDivisionError as exc:
            raise InvalidParameters(str(exc)) from None
        if x.numerator % 2 == 0:
            raise InvalidParameters(f"TB{self.terms} has even numerator {x.numerator}: a link, not a knot")
        if abs(x.numerator) == 1:
            raise InvalidParameters(f"TB{self.terms} is the unknot; use 'unknot'")
        return TwoBridgeFraction.normalized(x.numerator, x.denominator)


@dataclass(frozen=True)
class Mirror:
    expr: "KnotExpr"


@dataclass(frozen=True)
class Sum:
    left: "KnotExpr"
    right: "KnotExpr"


@dataclass(frozen=True)
class Cable:
    n: int
    expr: "KnotExpr"

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameters(f"cable index must be >= 2, got {self.n}")


KnotExpr = Union[Named, SeifertLiteral, Pretzel, TwoBridge, Mirror, Sum, Cable]


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+(?![A-Za-z_\d]))|(?P<name>[A-Za-z0-9_]+)|(?P<op>[-#(),\[\]]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    FUNCS = ("P", "TB", "cable", "seifert")

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind not in ("op",):
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def integer(self) -> int:
        kind, val, pos = self.take()
        if kind == "op" and val == "-" and self.peek()[0] == "int" and not self.peek()[1].startswith("-"):
            return -int(self.take()[1])
        if kind != "int":
            raise ParseError(f"expected an integer, found {val or 'end of input'!r}", pos)
        return int(val)

    def parse(self) -> KnotExpr:
        e = self.sum()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return e

    def sum(self) -> KnotExpr:
        e = self.atom()
        while self.peek()[1] == "#":
            self.take()
            e = Sum(e, self.atom())
        return e

    def atom(self) -> KnotExpr:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Mirror(self.atom())
        if kind == "op" and val == "(":
            self.take()
            e = self.sum()
            self.expect(")")
            return e
        if kind == "int" and val.startswith("-"):
            # a bare negative integer such as "-5" is not a knot
            raise ParseError(f"unexpected integer {val!r}", pos)
        if kind in ("name", "int"):
            self.take()
            if val in self.FUNCS and self.peek()[1] == "(":
                return self.func(val, pos)
            return Named(val)
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def func(self, name: str, pos: int) -> KnotExpr:
        self.expect("(")
        try:
            if name == "P":
                a = self.integer()
                self.expect(",")
                b = self.integer()
                self.expect(",")
                c = self.integer()
                self.expect(")")
                return Pretzel(a, b, c)
            if name == "TB":
                terms = [self.integer()]
                while self.peek()[1] == ",":
                    self.take()
                    terms.append(self.integer())
                self.expect(")")
                tb = TwoBridge(tuple(terms))
                tb.fraction()
                return tb
            if name == "cable":
                n = self.integer()
                self.expect(",")
                e = self.sum()
                self.expect(")")
                return Cable(n, e)
            m = self.matrix()
            self.expect(")")
            try:
                sf.validate_seifert(m)
            except sf.NotASeifertMatrix as exc:
                raise InvalidParameters(str(exc)) from None
            return SeifertLiteral(tuple(tuple(r) for r in m))
        except InvalidParameters as exc:
            raise InvalidParameters(f"{exc} (in {name}(...) at position {pos})") from None

    def matrix(self) -> list[list[int]]:
        self.expect("[")
        rows: list[list[int]] = []
        if self.peek()[1] == "]":
            self.take()
            return rows
        while True:
            self.expect("[")
            row = [self.integer()]
            while self.peek()[1] == ",":
                self.take()
                row.append(self.integer())
            self.expect("]")
            rows.append(row)
            if self.peek()[1] == ",":
                self.take()
                continue
            self.expect("]")
            return rows


def parse(text: str, table: Optional["KnotTable"] = None) -> KnotExpr:
    """Parse an expression; with ``table`` given, every name must resolve."""
    e = _Parser(text).parse()
    if table is not None:
        for name in names_in(e):
            if name not in table:
                raise UnknownKnot(name)
    return e


def names_in(e: KnotExpr) -> list[str]:
    if isinstance(e, Named):
        return [e.name]
    if isinstance(e, (Mirror, Cable)):
        return names_in(e.expr)
    if isinstance(e, Sum):
        return names_in(e.left) + names_in(e.right)
    return []


def to_text(e: KnotExpr) -> str:
    """Canonical text; ``parse(to_text(e)) == e``."""
    if isinstance(e, Named):
        return e.name
    if isinstance(e, SeifertLiteral):
        return "seifert(" + json.dumps([list(r) for r in e.matrix], separators=(",", ":")) + ")"
    if isinstance(e, Pretzel):
        return f"P({e.p},{e.q},{e.r})"
    if isinstance(e, TwoBridge):
        return "TB(" + ",".join(map(str, e.terms)) + ")"
    if isinstance(e, Mirror):
        inner = to_text(e.expr)
        return f"-({inner})" if isinstance(e.expr, Sum) else f"-{inner}"
    if isinstance(e, Sum):
        right = to_text(e.right)
        if isinstance(e.right, Sum):
            right = f"({right})"
        return f"{to_text(e.left)} # {right}"
    if isinstance(e, Cable):
        return f"cable({e.n}, {to_text(e.expr)})"
    raise TypeError(f"not a knot expression: {e!r}")


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True)
class TableEntry:
    name: str
    matrix: SeifertMatrix
    notes: str = ""
    certificate: Optional[dict] = None
    asserted: dict = field(default_factory=dict)


class KnotTable:
    def __init__(self, entries: Optional[dict[str, TableEntry]] = None, source: str = ""):
        self.entries = dict(entries or {})
        self.source = source

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> TableEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownKnot(name) from None

    def __len__(self):
        return len(self.entries)

    def names(self) -> list[str]:
        return list(self.entries)


def _entries_from_json(data) -> dict[str, TableEntry]:
    if isinstance(data, dict):
        data = data.get("knots", [])
    if not isinstance(data, list):
        raise TableError("table must be a JSON list of entries")
    out: dict[str, TableEntry] = {}
    problems = []
    for k, raw in enumerate(data):
        if not isinstance(raw, dict) or "name" not in raw or "seifert_matrix" not in raw:
            problems.append(f"entry {k}: needs 'name' and 'seifert_matrix'")
            continue
        name = raw["name"]
        if not isinstance(name, str) or not re.fullmatch(r"[A-Za-z0-9_]+", name):
            problems.append(f"entry {k}: invalid name {name!r}")
            continue
        if name in out:
            problems.append(f"entry {name!r}: duplicate name")
            continue
        try:
            V = sf.validate_seifert(raw["seifert_matrix"])
        except (sf.NotASeifertMatrix, TypeError) as exc:
            problems.append(f"entry {name!r}: {exc}")
            continue
        cert = raw.get("certificate")
        if cert is not None:
            moves = cert.get("moves") if isinstance(cert, dict) else None
            if not moves or any(not isinstance(m, int) or m == 0 for m in moves):
                problems.append(f"entry {name!r}: certificate moves must be nonzero integers")
                continue
        out[name] = TableEntry(name, V, raw.get("notes", ""), cert, dict(raw.get("asserted", {})))
    if problems:
        raise TableError("; ".join(problems))
    return out


def load_table(path: Union[str, os.PathLike]) -> KnotTable:
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return KnotTable({}, str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableError(f"{path}: invalid JSON: {exc}") from None
    return KnotTable(_entries_from_json(data), str(path))


def default_table() -> KnotTable:
    """The table named by ``$KNOTCALC_TABLE``, else the bundled one."""
    override = os.environ.get(TABLE_ENV)
    if override:
        return load_table(override)
    ref = resources.files("knotcalc") / "data" / "knots.json"
    data = json.loads(ref.read_text(encoding="utf-8"))
    return KnotTable(_entries_from_json(data), "bundled")


# ---------------------------------------------------------------------------
# generators


def pretzel_seifert(p: int, q: int, r: int) -> SeifertMatrix:
    """Genus-one Seifert matrix of the odd pretzel knot ``P(p, q, r)``."""
    if any(x % 2 == 0 for x in (p, q, r)):
        raise InvalidParameters(f"pretzel parameters must all be odd: P({p},{q},{r})")
    return sf.validate_seifert([[(p + q) // 2, (q + 1) // 2],
                                [(q - 1) // 2, (q + r) // 2]])


# ---------------------------------------------------------------------------
# evaluation


class _SigSource:
    """Exact signature data without an explicit step function yet.

    ``poly`` vanishes at every possible jump in ``s``; it is built on first
    use, since pointwise evaluation through ``at`` never needs it.  ``at``
    gives the signature at any rational ``s > 0`` off the roots of ``poly``.
    """

    def __init__(self, make_poly: Callable[[], Sequence[int]], at: Callable[[Fraction], int],
                 at_minus_one: int):
        self._make_poly = make_poly
        self.at = at
        self.at_minus_one = at_minus_one

    @cached_property
    def poly(self) -> tuple[int, ...]:
        return tuple(self._make_poly())


@dataclass(frozen=True)
class _Value:
    alexander: LaurentPoly
    matrix: Optional[SeifertMatrix]
    sig: Optional[_SigSource]
    notes: tuple[str, ...] = ()


def _matrix_source(V: SeifertMatrix) -> _SigSource:
    return _SigSource(lambda: ea.square_free_part(sf.jump_polynomial(V)),
                      lambda s: sf.signature_at(V, s)[0],
                      sf.signature_at(V, sf.MINUS_ONE)[0])


def _power_parts(n: int) -> tuple[list[int], list[int]]:
    """Real and imaginary parts of ``(1 + i s)^n`` as integer polynomials."""
    re_part = [0] * (n + 1)
    im_part = [0] * (n + 1)
    for k in range(n + 1):
        c = comb(n, k)
        if k % 4 == 0:
            re_part[k] = c
        elif k % 4 == 1:
            im_part[k] = c
        elif k % 4 == 2:
            re_part[k] = -c
        else:
            im_part[k] = -c
    return ea.poly_trim(re_part), ea.poly_trim(im_part)


def cable_parameter(n: int, s) -> Optional[Fraction]:
    """Parameter of ``omega^n`` for ``omega = circle_point(s)``.

    Returns ``None`` when ``omega^n = -1``.  The result may be negative
    (lower half circle) or zero (``omega^n = 1``).
    """
    A, B = _power_parts(n)
    a = ea.poly_eval(A, s)
    if a == 0:
        return None
    return ea.poly_eval(B, s) / a


def _pullback_source(src: _SigSource, n: int) -> _SigSource:
    def make_poly() -> list[int]:
        # src.poly(B/A) with the denominator A^d cleared
        A, B = _power_parts(n)
        d = len(src.poly) - 1
        composed: list[int] = []
        for k, c in enumerate(src.poly):
            if c:
                term = [c]
                for _ in range(k):
                    term = ea.poly_mul(term, B)
                for _ in range(d - k):
                    term = ea.poly_mul(term, A)
                composed = _poly_add(composed, term)
        return ea.square_free_part(composed) if len(composed) > 1 else [1]

    def at(s: Fraction) -> int:
        x = cable_parameter(n, s)
        if x is None:
            return src.at_minus_one
        if x == 0:
            return 0
        # sigma(conj w) = sigma(w)
        return src.at(abs(x))

    m1 = 0 if n % 2 == 0 else src.at_minus_one
    return _SigSource(make_poly, at, m1)


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return ea.poly_trim([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])


def _sum_source(a: _SigSource, b: _SigSource) -> _SigSource:
    return _SigSource(lambda: ea.square_free_part(ea.poly_mul(list(a.poly), list(b.poly))),
                      lambda s: a.at(s) + b.at(s), a.at_minus_one + b.at_minus_one)


def _neg_source(a: _SigSource) -> _SigSource:
    return _SigSource(lambda: a.poly, lambda s: -a.at(s), -a.at_minus_one)


def _eval(e: KnotExpr, table: Optional[KnotTable]) -> _Value:
    if isinstance(e, Named):
        if table is None:
            raise UnknownKnot(e.name)
        V = table[e.name].matrix
        return _Value(sf.alexander(V), V, None)
    if isinstance(e, SeifertLiteral):
        V = sf.validate_seifert(e.matrix)
        return _Value(sf.alexander(V), V, None)
    if isinstance(e, Pretzel):
        V = pretzel_seifert(e.p, e.q, e.r)
        return _Value(sf.alexander(V), V, None)
    if isinstance(e, TwoBridge):
        f = e.fraction()
        return _Value(two_bridge_alexander(f), None, None,
                      (f"two-bridge fraction {f.p}/{f.q}: signature unavailable without a Seifert matrix",))
    if isinstance(e, Mirror):
        v = _eval(e.expr, table)
        if v.matrix is not None:
            return _Value(v.alexander, sf.mirror(v.matrix), None, v.notes)
        sig = _neg_source(v.sig) if v.sig else None
        return _Value(v.alexander, None, sig, v.notes)
    if isinstance(e, Sum):
        a, b = _eval(e.left, table), _eval(e.right, table)
        alex = a.alexander * b.alexander
        notes = a.notes + b.notes
        if a.matrix is not None and b.matrix is not None:
            return _Value(alex, sf.block_sum(a.matrix, b.matrix), None, notes)
        sa, sb = _source_of(a), _source_of(b)
        sig = _sum_source(sa, sb) if sa and sb else None
        return _Value(alex, None, sig, notes)
    if isinstance(e, Cable):
        v = _eval(e.expr, table)
        src = _source_of(v)
        sig = _pullback_source(src, e.n) if src else None
        return _Value(v.alexander.substitute_power(e.n), None, sig, v.notes)
    raise TypeError(f"not a knot expression: {e!r}")


def _source_of(v: _Value) -> Optional[_SigSource]:
    if v.matrix is not None:
        return _matrix_source(v.matrix)
    return v.sig


@dataclass
class InvariantReport:
    expression: str
    alexander: LaurentPoly
    determinant: int
    signature_function: Optional[SignatureStepFunction]
    seifert_matrix: Optional[SeifertMatrix] = None
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def signature_available(self) -> bool:
        return self.signature_function is not None


def evaluate(e: KnotExpr, table: Optional[KnotTable] = None, signature: bool = True) -> InvariantReport:
    v = _eval(e, table)
    alex = v.alexander
    det = abs(alex.value_at_minus_one())
    notes: dict[str, str] = {}
    if v.matrix is not None:
        det_m = sf.determinant(v.matrix)
        if det_m != det:
            raise ArithmeticError("determinant disagrees with the Alexander polynomial")
        notes["alexander"] = "det(tV - V^T) of the Seifert matrix, symmetrized"
        notes["determinant"] = "|det(V + V^T)|"
    else:
        notes["alexander"] = "assembled from cable/sum/mirror rules"
        notes["determinant"] = "|Delta(-1)|"
    sfun = None
    if signature:
        if v.matrix is not None:
            sfun = sf.signature_function(v.matrix)
            notes["signature_function"] = "exact, from the Seifert matrix"
        elif v.sig is not None:
            sfun = sf.build_step_function(v.sig.poly, v.sig.at, v.sig.at_minus_one)
            notes["signature_function"] = "exact, via mirror/sum/cable rules"
        else:
            notes["signature_function"] = "unavailable: " + "; ".join(v.notes or ("no Seifert matrix",))
    return InvariantReport(to_text(e), alex, det, sfun, v.matrix, notes)


def signature_at_expr(e: KnotExpr, s, table: Optional[KnotTable] = None) -> int:
    """Exact signature of ``e`` at parameter ``s`` (off the jump locus)."""
    v = _eval(e, table)
    src = _source_of(v)
    if src is None:
        raise ValueError("signature unavailable for this expression")
    return src.at(Fraction(s))
