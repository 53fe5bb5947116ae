"""Kirby calculus on framed unknots, tracked at the level of linking matrices.

A :class:`SurgeryDiagram` records a rational framing for every component and
the pairwise linking numbers.  Components are unknots in the complement of a
knot ``K`` that they do not link homologically, so linking with ``K`` is not
stored.  Moves act on this data by the usual formulas; anything that is a
purely geometric statement (an isotopy, a component becoming unlinked) is
logged as an annotation rather than checked.

An ``m``-twist in the sense of surgery description is surgery on such an
unknot with coefficient ``1/m`` (a ``+1`` surgery inserts one left-handed
full twist).  Procedures 1 and 2 below rewrite a single ``1/m`` component
into components of framing ``+-1``, i.e. into single twists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union


class KirbyError(ValueError):
    pass


def _frac(x) -> Fraction:
    # accepts ints, Fractions and "p/q" strings
    return Fraction(x)


@dataclass(frozen=True)
class SurgeryDiagram:
    framings: tuple[Fraction, ...]
    linking: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.framings)
        object.__setattr__(self, "framings", tuple(_frac(f) for f in self.framings))
        object.__setattr__(self, "linking", tuple(tuple(int(x) for x in row) for row in self.linking))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"U{i + 1}" for i in range(n)))
        if len(self.linking) != n or any(len(r) != n for r in self.linking) or len(self.labels) != n:
            raise KirbyError("framings, linking matrix and labels disagree in size")
        for i in range(n):
            if self.linking[i][i] != 0:
                raise KirbyError("linking matrix must have zero diagonal")
            for j in range(i):
                if self.linking[i][j] != self.linking[j][i]:
                    raise KirbyError("linking matrix must be symmetric")

    @classmethod
    def single(cls, framing, label: str = "U1") -> "SurgeryDiagram":
        return cls((_frac(framing),), ((0,),), (label,))

    def __len__(self):
        return len(self.framings)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KirbyError(f"no component named {label}") from None

    def lk(self, i: int, j: int) -> int:
        return self.linking[i][j]

    def framing_multiset(self) -> list[Fraction]:
        return sorted(self.framings)

    def is_unlinked(self) -> bool:
        return all(x == 0 for row in self.linking for x in row)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "framings": [str(f) for f in self.framings],
            "linking": [list(r) for r in self.linking],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SurgeryDiagram":
        return cls(tuple(_frac(f) for f in data["framings"]),
                   tuple(tuple(r) for r in data["linking"]),
                   tuple(data.get("labels") or ()))


# ---------------------------------------------------------------------------
# moves


def _check(d: SurgeryDiagram, *idx: int):
    for i in idx:
        if not 0 <= i < len(d):
            raise KirbyError(f"component index {i} out of range")


def handle_slide(d: SurgeryDiagram, i: int, j: int, sign: int) -> SurgeryDiagram:
    """Slide component ``i`` over component ``j`` (band sum with sign ``sign``)."""
    _check(d, i, j)
    if i == j:
        raise KirbyError("cannot slide a component over itself")
    if sign not in (1, -1):
        raise KirbyError("slide sign must be +1 or -1")
    fj = d.framings[j]
    if fj.denominator != 1:
        raise KirbyError(f"cannot slide over {d.labels[j]}: framing {fj} is not an integer")
    lij = d.lk(i, j)
    framings = list(d.framings)
    framings[i] = framings[i] + fj + 2 * sign * lij
    lk = [list(r) for r in d.linking]
    for k in range(len(d)):
        if k in (i, j):
            continue
        lk[i][k] = lk[k][i] = d.lk(i, k) + sign * d.lk(j, k)
    lk[i][j] = lk[j][i] = lij + sign * int(fj)
    return SurgeryDiagram(tuple(framings), tuple(map(tuple, lk)), d.labels)


def reverse_slam_dunk(d: SurgeryDiagram, component: int, n: int,
                      leaf_label: Optional[str] = None) -> SurgeryDiagram:
    """Rewrite framing ``p/q = n - 1/r`` as framing ``n`` plus an ``r``-framed meridian."""
    _check(d, component)
    pq = d.framings[component]
    p, q = pq.numerator, pq.denominator
    denom = n * q - p
    if denom == 0:
        raise KirbyError(f"framing {pq} equals {n}: residual framing undefined")
    r = Fraction(q, denom)
    size = len(d)
    framings = list(d.framings)
    framings[component] = Fraction(n)
    framings.append(r)
    lk = [list(row) + [0] for row in d.linking]
    lk.append([0] * (size + 1))
    lk[component][size] = lk[size][component] = 1
    labels = list(d.labels) + [leaf_label or _fresh_label(d.labels)]
    return SurgeryDiagram(tuple(framings), tuple(map(tuple, lk)), tuple(labels))


def slam_dunk(d: SurgeryDiagram, leaf: int) -> SurgeryDiagram:
    """Remove a meridian ``leaf`` of framing ``r``; its neighbour's framing drops by ``1/r``."""
    _check(d, leaf)
    nbrs = [k for k in range(len(d)) if k != leaf and d.lk(leaf, k) != 0]
    if len(nbrs) != 1:
        raise KirbyError(f"{d.labels[leaf]} must link exactly one other component, links {len(nbrs)}")
    nb = nbrs[0]
    if abs(d.lk(leaf, nb)) != 1:
        raise KirbyError("slam dunk needs linking number +-1")
    r = d.framings[leaf]
    if r == 0:
        raise KirbyError("cannot slam dunk a 0-framed leaf")
    if d.framings[nb].denominator != 1:
        raise KirbyError("slam dunk target must have integer framing")
    framings = list(d.framings)
    framings[nb] = framings[nb] - 1 / r
    keep = [k for k in range(len(d)) if k != leaf]
    return SurgeryDiagram(tuple(framings[k] for k in keep),
                          tuple(tuple(d.linking[a][b] for b in keep) for a in keep),
                          tuple(d.labels[k] for k in keep))


def _fresh_label(labels: Sequence[str]) -> str:
    k = len(labels) + 1
    while f"U{k}" in labels:
        k += 1
    return f"U{k}"


def expand_chain(x) -> list[int]:
    """Negative continued fraction ``x = a0 - 1/(a1 - 1/(...))``.

    Each ``a_i`` is the ceiling of the running remainder, so the expansion
    terminates; it describes the linear chain of unknots obtained by
    repeated reverse slam dunks.
    """
    x = Fraction(x)
    out = []
    while True:
        a = -((-x.numerator) // x.denominator)  # ceil
        out.append(a)
        if x == a:
            return out
        x = 1 / (a - x)


def chain_matrix(terms: Sequence[int]) -> list[list[int]]:
    """Framing-weighted linking matrix of a linear chain (framings on the diagonal)."""
    n = len(terms)
    M = [[0] * n for _ in range(n)]
    for i, a in enumerate(terms):
        M[i][i] = a
        if i + 1 < n:
            M[i][i + 1] = M[i + 1][i] = 1
    return M


# ---------------------------------------------------------------------------
# logs


@dataclass(frozen=True)
class KirbyMove:
    kind: str  # "reverse_slam_dunk" | "slam_dunk" | "handle_slide" | "isotopy"
    component: Optional[str] = None
    over: Optional[str] = None
    sign: int = 1
    framing: Optional[int] = None
    leaf: Optional[str] = None
    note: str = ""

    def apply(self, d: SurgeryDiagram) -> SurgeryDiagram:
        if self.kind == "reverse_slam_dunk":
            return reverse_slam_dunk(d, d.index(self.component), self.framing, self.leaf)
        if self.kind == "slam_dunk":
            return slam_dunk(d, d.index(self.component))
        if self.kind == "handle_slide":
            return handle_slide(d, d.index(self.component), d.index(self.over), self.sign)
        if self.kind == "isotopy":
            return d
        raise KirbyError(f"unknown move kind {self.kind!r}")

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("component", "over", "framing", "leaf"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.kind == "handle_slide":
            out["sign"] = self.sign
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, data: dict) -> "KirbyMove":
        return cls(kind=data["kind"], component=data.get("component"), over=data.get("over"),
                   sign=int(data.get("sign", 1)), framing=data.get("framing"),
                   leaf=data.get("leaf"), note=data.get("note", ""))


def isotopy(note: str) -> KirbyMove:
    return KirbyMove("isotopy", note=note)


@dataclass
class MoveLog:
    initial: SurgeryDiagram
    moves: list[KirbyMove] = field(default_factory=list)
    states: list[SurgeryDiagram] = field(default_factory=list)

    @property
    def final(self) -> SurgeryDiagram:
        return self.states[-1] if self.states else self.initial

    def push(self, move: KirbyMove) -> SurgeryDiagram:
        d = move.apply(self.final)
        self.moves.append(move)
        self.states.append(d)
        return d

    def slide_count(self) -> int:
        return sum(m.kind == "handle_slide" for m in self.moves)

    def replay(self) -> SurgeryDiagram:
        d = self.initial
        for m in self.moves:
            d = m.apply(d)
        return d

    def to_json(self) -> dict:
        return {
            "initial": self.initial.to_json(),
            "moves": [dict(m.to_json(), after=s.to_json()) for m, s in zip(self.moves, self.states)],
            "final": self.final.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    divergent_move: Optional[int] = None  # index into moves; len(moves) means "final"
    message: str = ""


def replay_json(data: dict) -> ReplayResult:
    """Re-execute a serialized log and compare every recorded state."""
    try:
        d = SurgeryDiagram.from_json(data["initial"])
        moves = data["moves"]
    except (KeyError, TypeError, ValueError) as exc:
        return ReplayResult(False, 0, f"malformed log: {exc}")
    for idx, raw in enumerate(moves):
        try:
            d = KirbyMove.from_json(raw).apply(d)
        except (KirbyError, KeyError, TypeError, ValueError) as exc:
            return ReplayResult(False, idx, f"move {idx} cannot be applied: {exc}")
        if "after" in raw:
            try:
                recorded = SurgeryDiagram.from_json(raw["after"])
            except (KeyError, TypeError, ValueError) as exc:
                return ReplayResult(False, idx, f"move {idx}: malformed state: {exc}")
            if recorded != d:
                return ReplayResult(False, idx, f"state after move {idx} does not match replay")
    try:
        final = SurgeryDiagram.from_json(data["final"])
    except (KeyError, TypeError, ValueError) as exc:
        return ReplayResult(False, len(moves), f"malformed final diagram: {exc}")
    if final != d:
        return ReplayResult(False, len(moves), "final diagram does not match replay")
    return ReplayResult(True)


# ---------------------------------------------------------------------------
# Procedures 1 and 2


def _sgn(x) -> int:
    return 1 if x > 0 else -1


def _reduce_and_unlink(log: MoveLog, u1: str, u2: str) -> None:
    """Slide ``u2`` over the 0-framed ``u1`` until ``u2`` has framing +-1,
    then slide ``u1`` over ``u2`` so that their linking number vanishes."""
    d = log.final
    i, j = d.index(u2), d.index(u1)
    while abs(d.framings[i]) > 1:
        # each slide changes the framing of u2 by 2*eps*lk; push it toward 0
        eps = -_sgn(d.framings[i]) * _sgn(d.lk(i, j))
        d = log.push(KirbyMove("handle_slide", component=u2, over=u1, sign=eps,
                               note="framing of %s moves by %+d" % (u2, 2 * eps * d.lk(i, j))))
        d = log.push(isotopy("pull the band back near %s; %s and %s still link once" % (u1, u1, u2)))
    f2 = d.framings[i]
    eps = -_sgn(d.lk(i, j)) * _sgn(f2)
    log.push(KirbyMove("handle_slide", component=u1, over=u2, sign=eps,
                       note="linking of %s and %s becomes 0" % (u1, u2)))
    log.push(isotopy("%s and %s are unlinked (asserted)" % (u1, u2)))


def procedure1(k: int, sign: int) -> MoveLog:
    """Replace a ``sign/(2k+1)``-framed unknot by a ``+1`` and a ``-1`` framed unknot."""
    if k < 1:
        raise KirbyError("procedure 1 needs k >= 1")
    if sign not in (1, -1):
        raise KirbyError("sign must be +1 or -1")
    log = MoveLog(SurgeryDiagram.single(Fraction(sign, 2 * k + 1), "U1"))
    log.push(isotopy("surgery on U1 effects %d full twists" % (2 * k + 1)))
    log.push(KirbyMove("reverse_slam_dunk", component="U1", framing=0, leaf="U2"))
    _reduce_and_unlink(log, "U1", "U2")
    return log


def procedure2(k: int, sign: int, helper_sign: Optional[int] = None) -> MoveLog:
    """Replace ``sign/(2k)``- and ``helper``-framed unknots by three +-1 framed ones.

    The helper ``U3`` keeps its framing and ends unlinked from the other
    two.  ``helper_sign`` defaults to ``sign``; the opposite sign works as
    well since either choice makes the framing of ``U2`` odd.
    """
    if k < 1:
        raise KirbyError("procedure 2 needs k >= 1")
    if sign not in (1, -1):
        raise KirbyError("sign must be +1 or -1")
    h = sign if helper_sign is None else helper_sign
    if h not in (1, -1):
        raise KirbyError("helper sign must be +1 or -1")
    start = SurgeryDiagram((Fraction(sign, 2 * k), Fraction(h)), ((0, 0), (0, 0)), ("U1", "U3"))
    log = MoveLog(start)
    log.push(isotopy("surgery on U1 effects %d full twists, U3 a single twist" % (2 * k)))
    d = log.push(KirbyMove("reverse_slam_dunk", component="U1", framing=0, leaf="U2"))
    d = log.push(KirbyMove("handle_slide", component="U2", over="U3", sign=1,
                           note="framing of U2 changes by %+d" % h))
    i3, i1, i2 = d.index("U3"), d.index("U1"), d.index("U2")
    eps = -_sgn(d.lk(i3, i2)) * _sgn(d.lk(i1, i2))
    log.push(KirbyMove("handle_slide", component="U3", over="U1", sign=eps,
                       note="linking of U3 with U2 becomes 0"))
    log.push(isotopy("U3 is unlinked from U1 and U2 (asserted)"))
    _reduce_and_unlink(log, "U1", "U2")
    return log


# ---------------------------------------------------------------------------
# twist counting


def _check_moves(moves: Sequence[int]) -> None:
    if not moves:
        raise ValueError("need at least one move")
    for m in moves:
        if m == 0:
            raise ValueError("moves must be nonzero")


def untwist_upper_bound(moves: Sequence[int]) -> int:
    """Single twists sufficient to realize the multi-twists ``moves``."""
    _check_moves(moves)
    if all(m % 2 == 0 for m in moves):
        return 2 * len(moves) + 1
    return sum(1 if abs(m) == 1 else 2 for m in moves)


@dataclass
class UntwistPlan:
    """Single twists (as surgery signs) realizing a list of multi-twists."""

    moves: list[int]
    twists: list[int] = field(default_factory=list)
    logs: list[MoveLog] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.twists)


def untwist_plan(moves: Sequence[int]) -> UntwistPlan:
    """Constructively convert multi-twists into single twists via the procedures.

    Odd moves go through Procedure 1; even moves use Procedure 2 with an
    existing single twist as helper, or, when none exists yet, are split as
    ``+-1`` plus an odd remainder.
    """
    _check_moves(moves)
    plan = UntwistPlan(list(moves))

    def odd(m: int) -> None:
        s = _sgn(m)
        if abs(m) == 1:
            plan.twists.append(s)
            return
        log = procedure1((abs(m) - 1) // 2, s)
        plan.logs.append(log)
        plan.twists.extend(int(f) for f in log.final.framings)

    for m in moves:
        if m % 2:
            odd(m)
    for m in moves:
        if m % 2:
            continue
        s = _sgn(m)
        if plan.twists:
            log = procedure2(abs(m) // 2, s, helper_sign=plan.twists[0])
            plan.logs.append(log)
            d = log.final
            plan.twists.extend(int(d.framings[d.index(u)]) for u in ("U1", "U2"))
        else:
            plan.twists.append(s)
            odd(m - s)
    return plan
