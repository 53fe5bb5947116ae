"""``knotcalc`` command line.

Exit codes: 0 success, 1 negative mathematical verdict (an obstruction was
found, or a verification failed), 2 usage error, 3 data error.  Machine
output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Callable, Optional

from . import kirby, knotspec, obstruct, plotting
from .knotspec import InvalidParameters, KnotTable, ParseError, TableError, UnknownKnot
from .seifert import SignatureStepFunction
from .twobridge import TwoBridgeFraction, bf_obstruction, mod5_shortcut

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(obj) -> None:
    # exact numbers are strings; anything else slipping through is a bug
    text = json.dumps(obj, indent=2, allow_nan=False)
    _check_no_floats(json.loads(text))
    sys.stdout.write(text + "\n")


def _check_no_floats(obj) -> None:
    if isinstance(obj, float):
        raise TypeError("float in JSON output")
    if isinstance(obj, dict):
        for v in obj.values():
            _check_no_floats(v)
    elif isinstance(obj, list):
        for v in obj:
            _check_no_floats(v)


def signature_json(sfn: SignatureStepFunction) -> dict:
    """Segments with their bounding jumps given as exact ``s`` brackets.

    ``t`` approximations are decimal strings for reading convenience.
    """
    segs = []
    for (left, right, value), (t_lo, t_hi, _) in zip(sfn.segments(), plotting.t_segments(sfn)):
        segs.append({
            "s_from": None if left is None else [_frac(left.lo), _frac(left.hi)],
            "s_to": None if right is None else [_frac(right.lo), _frac(right.hi)],
            "t_from": f"{t_lo:.10f}",
            "t_to": f"{t_hi:.10f}",
            "value": value,
        })
    return {
        "parameter": "omega = ((1 - s^2) + 2 s i) / (1 + s^2), t = atan(s)/pi",
        "segments": segs,
        "jumps": [{"s_bracket": [_frac(j.interval.lo), _frac(j.interval.hi)], "left": j.left,
                   "right": j.right, "value_at_jump": _frac(j.value_at_jump)} for j in sfn.jumps],
        "value_at_minus_one": sfn.value_at_minus_one,
        "nullity_at_minus_one": sfn.nullity_at_minus_one,
        "takes_positive": sfn.takes_positive(),
        "takes_negative": sfn.takes_negative(),
    }


def report_json(r: knotspec.InvariantReport) -> dict:
    return {
        "expression": r.expression,
        "alexander": {"text": str(r.alexander), "terms": r.alexander.to_json()},
        "determinant": r.determinant,
        "signature_function": signature_json(r.signature_function) if r.signature_function else "unavailable",
        "notes": r.notes,
    }


def _load_table(path: Optional[str]) -> KnotTable:
    try:
        return knotspec.load_table(path) if path else knotspec.default_table()
    except (OSError, TableError) as exc:
        raise CliError(f"cannot load knot table: {exc}", EXIT_DATA) from None


def _evaluate(text: str, table: KnotTable, signature: bool = True) -> knotspec.InvariantReport:
    try:
        e = knotspec.parse(text, table)
    except (ParseError, InvalidParameters) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    except UnknownKnot as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    return knotspec.evaluate(e, table, signature=signature)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    table = _load_table(args.table)
    r = _evaluate(args.expr, table)
    if args.csv:
        if r.signature_function is None:
            raise CliError("signature function unavailable for " + r.expression, EXIT_DATA)
        sys.stdout.write(plotting.segments_csv(r.signature_function))
    else:
        _emit(report_json(r))
    return EXIT_OK


def cmd_bf(args) -> int:
    p, q = args.p, args.q
    if p <= 1 or p % 2 == 0 or gcd(p, q) != 1:
        raise CliError("need an odd p > 1 and q coprime to p", EXIT_USAGE)
    f = TwoBridgeFraction.normalized(p, q)
    v = bf_obstruction(f)
    short = mod5_shortcut(f.p, f.q)
    out = {"p": f.p, "q": f.q, **v.to_json(),
           "mod5_shortcut": "inconclusive" if short is None else short.tag}
    if not v.obstructed:
        out["self_linking"] = f"{v.target}/{f.p}"
    _emit(out)
    return EXIT_NEGATIVE if v.obstructed else EXIT_OK


def cmd_kirby(args) -> int:
    if args.action == "replay":
        try:
            data = json.loads(Path(args.file).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read move log: {exc}", EXIT_DATA) from None
        res = kirby.replay_json(data)
        _emit({"ok": res.ok, "divergent_move": res.divergent_move, "message": res.message})
        if not res.ok:
            print(f"replay diverges at move {res.divergent_move}: {res.message}", file=sys.stderr)
        return EXIT_OK if res.ok else EXIT_DATA
    if args.k is None or args.k < 1:
        raise CliError("--k must be a positive integer", EXIT_USAGE)
    sign = 1 if args.sign == "+" else -1
    proc = kirby.procedure1 if args.action == "proc1" else kirby.procedure2
    _emit(proc(args.k, sign).to_json())
    return EXIT_OK


def cmd_plot(args) -> int:
    if not args.output and not args.csv:
        raise CliError("give -o FILE and/or --csv", EXIT_USAGE)
    table = _load_table(args.table)
    r = _evaluate(args.expr, table)
    if r.signature_function is None:
        raise CliError("signature function unavailable for " + r.expression, EXIT_DATA)
    if args.output:
        plotting.render_svg(r.signature_function, args.output, title=r.expression)
        print(f"wrote {args.output}", file=sys.stderr)
    if args.csv:
        sys.stdout.write(plotting.segments_csv(r.signature_function))
    return EXIT_OK


REQUIRED_ENTRIES = ("10_32", "10_82", "whitehead_double")


def verification_checks(table: KnotTable, n_max: int,
                        figures: Optional[Path] = None) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    """Named checks, each returning ``(passed, detail)``."""

    def family():
        bad = []
        for n in range(1, n_max + 1):
            rep = obstruct.certify_family(n)
            if not rep.ok:
                bad.append(f"n={n}: {rep.failed_stage}")
        return not bad, "; ".join(bad) if bad else f"sd=1, tu=2, sd_a=1, u_a=tu_a=2 for n=1..{n_max}"

    def signs():
        k = table_sig("10_32")
        k2 = table_sig("-10_82")
        j = table_sig("10_32 # -10_82")
        ok = k.takes_positive() and k2.takes_negative() and obstruct.hslice_sign_test(j) is obstruct.SignClass.BOTH_SIGNS
        if figures is not None:
            figures.mkdir(parents=True, exist_ok=True)
            plotting.render_svg(k, figures / "signature_10_32.svg", "10_32")
            plotting.render_svg(k2, figures / "signature_minus_10_82.svg", "-10_82")
            plotting.render_svg(j, figures / "signature_sum.svg", "10_32 # -10_82")
        return ok, f"10_32 {sorted(k.all_values())}, -10_82 {sorted(k2.all_values())}, sum {sorted(j.all_values())}"

    def sign_ledger():
        j = knotspec.evaluate(knotspec.parse("10_32 # -10_82", table), table)
        led = obstruct.signature_ledger(j.signature_function, j.alexander == 1, g_alg_hi=1)
        ok = led["g_alg"].exact == 1 and led["sd_a"].exact == 2 and led["u_a"].exact == 2
        return ok, f"with g_alg <= 1 asserted: {led}"

    def cables():
        bad = [n for n in range(2, 6)
               if obstruct.hslice_sign_test(table_sig(f"cable({n}, 10_32 # -10_82)"))
               is not obstruct.SignClass.BOTH_SIGNS]
        return not bad, f"both signs for n=2..5" if not bad else f"fails for n={bad}"

    def whitehead():
        led = obstruct.whitehead_ledger(2, table)
        ok = led["tu_a"].exact == 0 and led["u_a"].exact == 0 and led["sd"].lo >= 1
        return ok, str(led)

    def procedures():
        bad = []
        for k in range(1, 51):
            for s in (1, -1):
                f1 = kirby.procedure1(k, s).final
                if sorted(f1.framings) != [-1, 1] or not f1.is_unlinked():
                    bad.append(f"proc1 k={k} sign={s}")
                f2 = kirby.procedure2(k, s).final
                if sorted(f2.framings) != sorted([s, s, -s]) or not f2.is_unlinked():
                    bad.append(f"proc2 k={k} sign={s}")
        return not bad, "; ".join(bad) if bad else "endpoints correct for k=1..50, both signs"

    def untwist_bound():
        rng = random.Random(20241018)
        for _ in range(10_000):
            moves = [rng.choice([-1, 1]) * rng.randint(1, 9) for _ in range(rng.randint(1, 6))]
            b = kirby.untwist_upper_bound(moves)
            all_even = all(m % 2 == 0 for m in moves)
            if b > 2 * len(moves) + 1 or (b == 2 * len(moves) + 1) != all_even:
                return False, f"counterexample {moves} -> {b}"
        return True, "bound <= 2L+1, equality exactly on all-even lists (10000 samples)"

    def table_sig(text):
        return knotspec.evaluate(knotspec.parse(text, table), table).signature_function

    return [
        ("family", family),
        ("signature signs", signs),
        ("sign ledger", sign_ledger),
        ("cables", cables),
        ("whitehead double", whitehead),
        ("procedures", procedures),
        ("untwist bound", untwist_bound),
    ]


def cmd_verify(args) -> int:
    if args.n_max < 1:
        raise CliError("--n-max must be positive", EXIT_USAGE)
    table = _load_table(args.table)
    missing = [name for name in REQUIRED_ENTRIES if name not in table]
    if missing:
        raise CliError("knot table lacks required entries: " + ", ".join(missing), EXIT_DATA)
    figures = Path(args.figures) if args.figures else None
    rows = []
    for name, check in verification_checks(table, args.n_max, figures):
        t0 = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # a crash inside a check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append((name, ok, detail, time.perf_counter() - t0))
    sys.stdout.write("check\tresult\tseconds\tdetail\n")
    for name, ok, detail, dt in rows:
        sys.stdout.write(f"{name}\t{'PASS' if ok else 'FAIL'}\t{dt:.2f}\t{detail}\n")
    failed = [r[0] for r in rows if not r[1]]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knotcalc", description="Exact knot invariants and twisting bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="invariants of a knot expression")
    p.add_argument("expr")
    p.add_argument("--table", help="knot table JSON (default: $KNOTCALC_TABLE or the bundled table)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--csv", action="store_true", help="signature segments as CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bf", help="linking form test for unknotting number one of b(p,q)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_bf)

    p = sub.add_parser("kirby", help="twist-reduction procedures and log replay")
    p.add_argument("action", choices=["proc1", "proc2", "replay"])
    p.add_argument("file", nargs="?", help="move log for replay")
    p.add_argument("--k", type=int)
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.set_defaults(func=cmd_kirby)

    p = sub.add_parser("verify-paper", help="run the full verification table")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--table")
    p.add_argument("--figures", help="directory for signature plots")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="signature function plot")
    p.add_argument("expr")
    p.add_argument("-o", "--output")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--table")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "kirby" and args.action == "replay" and not args.file:
        ap.error("kirby replay needs a FILE")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"knotcalc: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
