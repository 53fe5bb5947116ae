import json
import math
import random
from fractions import Fraction

import pytest

from knotcalc import exactalg as ea
from knotcalc import knotspec as ks
from knotcalc import seifert as sf
from knotcalc.knotspec import Cable, Mirror, Named, Pretzel, SeifertLiteral, Sum, TwoBridge
from knotcalc.poly import LaurentPoly

from oracles import float_lt_signature

TABLE = ks.default_table()


def test_parse_examples():
    assert ks.parse("P(13,1,3)") == Pretzel(13, 1, 3)
    assert ks.parse("cable(2, 10_32 # -10_82)") == Cable(2, Sum(Named("10_32"), Mirror(Named("10_82"))))
    assert ks.parse(" - 3_1 # 4_1 ") == Sum(Mirror(Named("3_1")), Named("4_1"))
    assert ks.parse("a # b # c") == Sum(Sum(Named("a"), Named("b")), Named("c"))
    assert ks.parse("P(-1, 1, 3)") == Pretzel(-1, 1, 3)
    assert ks.parse("TB(13, 1, 3)") == TwoBridge((13, 1, 3))
    assert ks.parse("seifert([[-1,1],[0,-1]])") == SeifertLiteral(((-1, 1), (0, -1)))
    assert ks.parse("--3_1") == Mirror(Mirror(Named("3_1")))


def test_mirror_binds_tighter_than_sum():
    assert ks.parse("-a # b") == Sum(Mirror(Named("a")), Named("b"))
    assert ks.parse("-(a # b)") == Mirror(Sum(Named("a"), Named("b")))


@pytest.mark.parametrize("text,position", [
    ("3_1 #", 5),
    ("P(1,1", 5),
    ("cable(2 3_1)", 8),
    ("3_1 $ 4_1", 4),
    ("", 0),
    ("# 3_1", 0),
])
def test_syntax_errors_report_position(text, position):
    with pytest.raises(ks.ParseError) as info:
        ks.parse(text)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["P(2,1,3)", "cable(1, 3_1)", "TB(2)", "seifert([[1]])", "TB(4)"])
def test_invalid_parameters(text):
    with pytest.raises(ks.InvalidParameters):
        ks.parse(text)


def test_unknown_name():
    with pytest.raises(ks.UnknownKnot):
        ks.parse("3_1 # nosuchknot", TABLE)
    assert ks.parse("nosuchknot") == Named("nosuchknot")


ROUND_TRIP = [
    "unknot", "3_1", "-3_1", "--3_1", "3_1 # 4_1", "3_1 # -4_1", "-(3_1 # 4_1)",
    "3_1 # (4_1 # 10_32)", "(3_1 # 4_1) # 10_32", "P(13,1,3)", "P(-1,1,3)", "P(1003,1,3)",
    "-P(3,5,7)", "TB(13,1,3)", "TB(3)", "TB(5,-2)", "cable(2, 3_1)", "cable(5, 10_32 # -10_82)",
    "cable(2, cable(3, 3_1))", "-cable(2, 4_1)", "cable(2, -(3_1 # 3_1))",
    "seifert([[-1,1],[0,-1]])", "seifert([])", "-seifert([[1,1],[0,-1]])",
    "seifert([[-1,1],[0,-1]]) # P(3,3,-3)", "10_68 # 11a_103", "whitehead_double",
    "cable(3, whitehead_double)", "P(3,1,3) # TB(7,2) # -4_1", "-(-(3_1))", "cable(4, P(5,1,3))",
    "10_32 # -10_82",
]


@pytest.mark.parametrize("text", ROUND_TRIP)
def test_round_trip(text):
    e = ks.parse(text)
    assert ks.parse(ks.to_text(e)) == e


def test_round_trip_corpus_size():
    assert len(ROUND_TRIP) >= 30


def test_pretzel_seifert():
    assert ks.pretzel_seifert(13, 1, 3).tolist() == [[7, 1], [0, 2]]
    assert sf.determinant(ks.pretzel_seifert(13, 1, 3)) == 55
    assert sf.determinant(ks.pretzel_seifert(-1, 1, 3)) == 1
    assert sf.alexander(ks.pretzel_seifert(-1, 1, 3)) == 1
    with pytest.raises(ks.InvalidParameters):
        ks.pretzel_seifert(2, 1, 3)


def test_pretzel_determinant_formula():
    rng = random.Random(5)
    for _ in range(200):
        p, q, r = (2 * rng.randint(-30, 30) + 1 for _ in range(3))
        assert sf.determinant(ks.pretzel_seifert(p, q, r)) == abs(p * q + q * r + r * p)


def test_family_determinants():
    for n in range(1, 51):
        assert sf.determinant(ks.pretzel_seifert(10 * n + 3, 1, 3)) == 40 * n + 15


# ---------------------------------------------------------------------------
# table


def test_bundled_table():
    for name in ("10_32", "10_82", "3_1", "whitehead_double"):
        assert name in TABLE
    published = {"3_1": 3, "4_1": 5, "10_32": 69, "10_82": 63, "10_68": 57, "11a_103": 81, "unknot": 1}
    for name, det in published.items():
        V = TABLE[name].matrix
        assert sf.determinant(V) == det
        assert ea.integer_determinant(V.antisymmetrized()) == 1 or V.size == 0
    assert TABLE["10_32"].matrix.size == 6 and TABLE["10_82"].matrix.size == 8
    assert TABLE["10_68"].certificate["status"] == "asserted, not verified"


def test_empty_table(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    assert len(ks.load_table(p)) == 0


def test_table_errors_name_entries(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps([
        {"name": "ok", "seifert_matrix": [[-1, 1], [0, -1]]},
        {"name": "broken", "seifert_matrix": [[1, 0], [0, 1]]},
    ]))
    with pytest.raises(ks.TableError, match="broken"):
        ks.load_table(p)
    p.write_text(json.dumps([{"name": "x", "seifert_matrix": []}, {"name": "x", "seifert_matrix": []}]))
    with pytest.raises(ks.TableError, match="duplicate"):
        ks.load_table(p)
    p.write_text("{not json")
    with pytest.raises(ks.TableError):
        ks.load_table(p)


def test_table_env_override(tmp_path, monkeypatch):
    p = tmp_path / "t.json"
    p.write_text(json.dumps([{"name": "only", "seifert_matrix": [[-1, 1], [0, -1]]}]))
    monkeypatch.setenv(ks.TABLE_ENV, str(p))
    assert ks.default_table().names() == ["only"]


# ---------------------------------------------------------------------------
# evaluation


def ev(text, **kw):
    return ks.evaluate(ks.parse(text, TABLE), TABLE, **kw)


def test_cable_alexander():
    assert ev("cable(3, 3_1)").alexander == LaurentPoly({-3: 1, 0: -1, 3: 1})


def test_sum_with_mirror_is_zero():
    for name in ("3_1", "10_32", "10_82"):
        assert ev(f"{name} # -{name}").signature_function.is_zero()


def test_two_bridge_unavailable():
    r = ev("TB(13,1,3)")
    assert r.determinant == 55
    assert r.signature_function is None
    assert "unavailable" in r.notes["signature_function"]
    assert r.alexander == ev("P(13,1,3)").alexander
    assert ev("TB(13,1,3) # 3_1").signature_function is None


def test_sum_commutes():
    for a, b in [("3_1", "4_1"), ("10_32", "-10_82"), ("cable(2, 3_1)", "P(13,1,3)"), ("TB(7,2)", "3_1")]:
        x, y = ev(f"{a} # {b}"), ev(f"{b} # {a}")
        assert x.alexander == y.alexander and x.determinant == y.determinant
        if x.signature_function is None:
            assert y.signature_function is None
        else:
            assert x.signature_function.equivalent(y.signature_function)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cable_determinant_two_ways(n):
    for name in ("3_1", "4_1", "10_32", "P(13,1,3)"):
        base = ev(name)
        r = ev(f"cable({n}, {name})")
        direct = abs(base.alexander.evaluate((-1) ** n, (-1) ** n).re)
        assert r.determinant == direct
        assert r.determinant == (1 if n % 2 == 0 else base.determinant)


def test_determinant_is_alexander_at_minus_one():
    for text in ROUND_TRIP:
        if text.startswith("P(3,1,3)"):
            continue
        try:
            r = ks.evaluate(ks.parse(text, TABLE), TABLE, signature=False)
        except ks.UnknownKnot:
            continue
        assert r.determinant == abs(r.alexander.value_at_minus_one())


def _image_parameter(s, n):
    """Parameter of omega(s)^n computed straight from Gaussian arithmetic."""
    w = ea.circle_point(s).omega ** n
    if w.re == -1:
        return None
    return w.im / (1 + w.re)


def test_cable_pullback_random_points():
    rng = random.Random(2024)
    e = ks.parse("10_32 # -10_82", TABLE)
    V = ks.evaluate(e, TABLE).seifert_matrix
    for n in (2, 3, 5):
        f = ks.evaluate(Cable(n, e), TABLE).signature_function
        for _ in range(50):
            s = Fraction(rng.randint(1, 5000), rng.randint(1, 2000))
            if ea.poly_eval(f.poly, s) == 0:
                continue
            x = _image_parameter(s, n)
            expect = sf.signature_at(V, sf.MINUS_ONE)[0] if x is None else (
                0 if x == 0 else sf.signature_at(V, abs(x))[0])
            assert f.value_at(s) == expect
            assert ks.signature_at_expr(Cable(n, e), s, TABLE) == expect
            t = math.atan(float(s)) / math.pi
            assert expect == float_lt_signature(V.tolist(), (n * t) % 1.0) or _near_jump(V, n * t)


def _near_jump(V, t):
    return len({float_lt_signature(V.tolist(), (t + d) % 1.0) for d in (-1e-6, 1e-6)}) > 1


def test_cable_value_at_minus_one():
    assert ev("cable(2, 3_1)").signature_function.value_at_minus_one == 0
    assert ev("cable(3, 3_1)").signature_function.value_at_minus_one == -2


def test_cables_take_both_signs():
    for n in range(2, 6):
        f = ev(f"cable({n}, 10_32 # -10_82)").signature_function
        assert f.takes_positive() and f.takes_negative()


def test_whitehead_cable_is_algebraically_trivial():
    for p in (2, 3, 4):
        r = ev(f"cable({p}, whitehead_double)")
        assert r.alexander == 1
        assert r.signature_function.is_zero()
