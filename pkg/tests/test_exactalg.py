import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotcalc import exactalg as ea
from knotcalc.exactalg import GaussianRational, HermitianMatrix, I

from oracles import float_signature, random_hermitian

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
gaussians = st.builds(GaussianRational, fractions, fractions)


def test_gaussian_basics():
    z = GaussianRational(1, 2)
    assert z * z.conjugate() == 5
    assert z.norm() == 5
    assert z * z.inverse() == 1
    assert I * I == -1
    assert (z / z) == 1
    assert z ** 3 == z * z * z
    assert z ** -2 == (z * z).inverse()


def test_float_complex_rejected():
    with pytest.raises(TypeError):
        GaussianRational.coerce(1.5 + 2j)
    with pytest.raises(TypeError):
        GaussianRational.coerce(0.5)


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a * b).norm() == a.norm() * b.norm()
    if b != 0:
        assert (a / b) * b == a


@given(fractions)
def test_circle_point_on_unit_circle(s):
    p = ea.circle_point(s)
    assert p.omega.norm() == 1


def test_circle_point_landmarks():
    assert ea.circle_point(0).omega == 1
    assert ea.circle_point(1).omega == I
    assert ea.circle_point(Fraction(1, 2)).omega == GaussianRational(Fraction(3, 5), Fraction(4, 5))


def test_hermitian_validation():
    with pytest.raises(ValueError):
        HermitianMatrix([[GaussianRational(0, 1)]])
    with pytest.raises(ValueError):
        HermitianMatrix([[1, GaussianRational(1, 1)], [GaussianRational(1, 1), 1]])


def test_signature_small_cases():
    assert ea.ldlstar_signature(HermitianMatrix([])) == (0, 0)
    assert ea.ldlstar_signature(HermitianMatrix([[0, 1], [1, 0]])) == (0, 0)
    assert ea.ldlstar_signature(HermitianMatrix([[0, 0], [0, 0]])) == (0, 2)
    assert ea.ldlstar_signature(HermitianMatrix([[-2, 1], [1, -2]])) == (-2, 0)
    assert ea.ldlstar_signature(HermitianMatrix([[1, 1], [1, 1]])) == (1, 1)


def test_signature_matches_float_oracle_with_nullity():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 6)
        k = rng.randint(1, n)
        # rank-k Hermitian B B^* with integer Gaussian B
        B = [[complex(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(k)] for _ in range(n)]
        signs = [rng.choice([-1, 1]) for _ in range(k)]
        F = np.array(B) @ np.diag(signs) @ np.array(B).conj().T
        H = HermitianMatrix([[GaussianRational(int(round(F[i, j].real)), int(round(F[i, j].imag)))
                              for j in range(n)] for i in range(n)])
        sig, null = ea.ldlstar_signature(H)
        w = np.linalg.eigvalsh(F)
        assert sig == int(np.sum(w > 1e-7) - np.sum(w < -1e-7))
        assert null == int(np.sum(np.abs(w) <= 1e-7))


def test_signature_random_against_eigenvalues():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 8)
        A, F = random_hermitian(rng, n)
        H = HermitianMatrix([[GaussianRational(*A[i][j]) for j in range(n)] for i in range(n)])
        assert ea.ldlstar_signature(H) == (float_signature(F), 0)


def test_determinants():
    assert ea.integer_determinant([]) == 1
    assert ea.integer_determinant([[2, 1], [1, 2]]) == 3
    M = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    assert ea.integer_determinant(M) == round(np.linalg.det(np.array(M)))
    Z = [[GaussianRational(1, 1), 2], [3, GaussianRational(0, -1)]]
    assert ea.determinant(Z) == GaussianRational(1, 1) * GaussianRational(0, -1) - 6


def test_poly_helpers():
    p = [-1, 0, 1]  # s^2 - 1
    assert ea.poly_eval(p, 3) == 8
    assert ea.poly_derivative(p) == [0, 2]
    assert ea.poly_mul([1, 1], [-1, 1]) == p
    assert ea.poly_gcd([-1, 0, 1], [1, 1]) in ([1, 1], [-1, -1])
    assert ea.square_free_part(ea.poly_mul(p, p)) in (p, [1, 0, -1])
    assert ea.poly_exact_div(p, [1, 1]) == [-1, 1]


def _float_positive_roots(p):
    r = np.roots(list(reversed(p)))
    return sorted(x.real for x in r if abs(x.imag) < 1e-9 and x.real > 1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0 and any(c[:-1])))
def test_sturm_isolation_matches_numpy(coeffs):
    sq = ea.square_free_part(coeffs)
    roots = ea.sturm_isolate_roots(coeffs)
    expected = _float_positive_roots(sq)
    assert len(roots) == len(expected)
    for iv, x in zip(roots, expected):
        fine = iv.refine(Fraction(1, 10**9))
        assert float(fine.lo) - 1e-6 <= x <= float(fine.hi) + 1e-6
        assert ea.poly_eval(sq, iv.lo) != 0 and ea.poly_eval(sq, iv.hi) != 0
    for a, b in zip(roots, roots[1:]):
        assert a.hi <= b.lo


def test_isolation_exact_rational_root():
    roots = ea.sturm_isolate_roots([-1, 3])  # root 1/3
    assert len(roots) == 1
    assert roots[0].contains(Fraction(1, 3))
    with pytest.raises(ValueError):
        roots[0].avoid(Fraction(1, 3))
    assert not roots[0].avoid(Fraction(1, 4)).contains(Fraction(1, 4))


def test_isolation_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        ea.sturm_isolate_roots([0])


def test_interval_refinement_keeps_root():
    iv = ea.sturm_isolate_roots([-2, 0, 1])[0]  # sqrt 2
    fine = iv.refine(Fraction(1, 10**12))
    assert fine.width <= Fraction(1, 10**12)
    assert fine.lo ** 2 < 2 < fine.hi ** 2


def test_gaussian_integer_determinant_matches_fraction_elimination():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(0, 6)
        M = [[(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        if n and rng.random() < 0.2:
            M[rng.randrange(n)] = [(0, 0)] * n
        expect = ea.determinant([[GaussianRational(a, b) for a, b in row] for row in M])
        assert ea.gaussian_integer_determinant(M) == (expect.re, expect.im)
