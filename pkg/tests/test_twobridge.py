import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotcalc import seifert as sf
from knotcalc.knotspec import pretzel_seifert
from knotcalc.twobridge import (LinkingValue, NotAGenerator, TwoBridgeFraction, bf_obstruction,
                                cf_to_fraction, linking_self, mod5_shortcut, two_bridge_alexander)


def residue_oracle(p, q):
    """Obstructed iff +-2 is not q times a unit square mod p (set based)."""
    squares = {t * t % p for t in range(1, p) if gcd(t, p) == 1}
    qs = {s * q % p for s in squares}
    return (2 % p) not in qs and (-2 % p) not in qs


def test_cf_examples():
    assert cf_to_fraction([13, 1, 3]) == Fraction(55, 4)
    for n in range(1, 101):
        assert cf_to_fraction([10 * n + 3, 1, 3]) == Fraction(40 * n + 15, 4)
    assert cf_to_fraction([3]) == 3
    with pytest.raises(ValueError):
        cf_to_fraction([])
    with pytest.raises(ZeroDivisionError):
        cf_to_fraction([1, 0])


def test_fraction_validation():
    with pytest.raises(ValueError):
        TwoBridgeFraction(4, 1)
    with pytest.raises(ValueError):
        TwoBridgeFraction(15, 5)
    assert TwoBridgeFraction.normalized(-55, 59) == TwoBridgeFraction(55, 4)
    assert TwoBridgeFraction(55, 4).mirror() == TwoBridgeFraction(55, 51)


def test_linking_form():
    f = TwoBridgeFraction(55, 4)
    assert linking_self(f, 1) == LinkingValue.of(4, 55)
    assert str(linking_self(f, 2)) == "16/55"
    with pytest.raises(NotAGenerator):
        linking_self(f, 5)


def test_bf_examples():
    v = bf_obstruction(TwoBridgeFraction(55, 4))
    assert v.obstructed and v.tag == "Obstructed"
    w = bf_obstruction(TwoBridgeFraction(3, 1))
    assert not w.obstructed and w.witness == 1 and w.target == -2
    assert w.to_json() == {"verdict": "Satisfiable", "checked_modulus": 3, "witness": 1, "target": -2}


def test_family_obstructed():
    for n in range(1, 101):
        p = 40 * n + 15
        assert bf_obstruction(TwoBridgeFraction(p, 4)).obstructed
        assert residue_oracle(p, 4)
        assert mod5_shortcut(p, 4).obstructed


def test_witness_is_valid():
    for p in range(3, 200, 2):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            v = bf_obstruction(TwoBridgeFraction(p, q))
            assert v.obstructed == residue_oracle(p, q)
            if not v.obstructed:
                assert (v.witness ** 2 * q - v.target) % p == 0


def test_mod5_shortcut_sound_up_to_5000():
    # exhaustive over every odd p <= 5000 divisible by 5 and every unit q:
    # t^2 q = +-2 has a unit solution iff +-2/q is a unit square mod p
    checked = 0
    for p in range(5, 5001, 10):
        squares = {t * t % p for t in range(1, p) if gcd(t, p) == 1}
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            short = mod5_shortcut(p, q)
            if short is not None:
                inv = pow(q, -1, p)
                assert (2 * inv) % p not in squares and (-2 * inv) % p not in squares
                checked += 1
    assert checked > 400_000


def test_mod5_agrees_with_search_on_samples():
    rng = random.Random(9)
    for _ in range(300):
        p = 5 * (2 * rng.randint(0, 400) + 1)
        q = rng.randrange(1, p)
        if gcd(p, q) != 1:
            continue
        short = mod5_shortcut(p, q)
        if short is not None:
            assert bf_obstruction(TwoBridgeFraction(p, q)).obstructed


def test_mod5_inconclusive_cases():
    assert mod5_shortcut(21, 4) is None
    assert mod5_shortcut(15, 2) is None  # 2 * inv(2) = 1 is a square mod 5
    assert mod5_shortcut(15, 1).obstructed  # 2 and 3 are both non-squares mod 5


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 400).map(lambda k: 2 * k + 1), st.integers(1, 10**4))
def test_bf_invariant_under_q_shift(p, q):
    if gcd(p, q) != 1:
        return
    a = bf_obstruction(TwoBridgeFraction.normalized(p, q))
    b = bf_obstruction(TwoBridgeFraction.normalized(p, q + p))
    assert a.obstructed == b.obstructed


def test_two_bridge_alexander_matches_pretzel():
    for n in range(1, 21):
        V = pretzel_seifert(10 * n + 3, 1, 3)
        assert two_bridge_alexander(TwoBridgeFraction(40 * n + 15, 4)) == sf.alexander(V)


def test_two_bridge_alexander_basics():
    tref = two_bridge_alexander(TwoBridgeFraction(3, 1))
    assert str(tref) == "t^-1 - 1 + t"
    assert two_bridge_alexander(TwoBridgeFraction(5, 2)) == two_bridge_alexander(TwoBridgeFraction(5, 3))
    for p in range(3, 60, 2):
        for q in range(1, p):
            if gcd(p, q) == 1:
                d = two_bridge_alexander(TwoBridgeFraction(p, q))
                assert abs(d.value_at_minus_one()) == p
                assert d.is_symmetric() and d.value_at_one() == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 1500).map(lambda k: 2 * k + 1), st.integers(1, 10**4))
def test_bf_verdict_same_for_mirror_orientation(p, q):
    q %= p
    if q == 0 or gcd(p, q) != 1:
        return
    f = TwoBridgeFraction.normalized(p, q)
    assert bf_obstruction(f).obstructed == bf_obstruction(f.mirror()).obstructed
