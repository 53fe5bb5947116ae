"""Independent float oracles and random generators shared by the tests.

Nothing here imports the exact machinery except to build inputs; the
oracles use numpy eigenvalues and plain float evaluation.
"""

import cmath
import math
import random

import numpy as np


def float_signature(H, tol=1e-9):
    """Signature of a complex Hermitian matrix from numpy eigenvalues."""
    if len(H) == 0:
        return 0
    w = np.linalg.eigvalsh(np.array(H, dtype=complex))
    return int(np.sum(w > tol) - np.sum(w < -tol))


def float_lt_signature(V, t):
    """Levine-Tristram signature at omega = exp(2 pi i t), float arithmetic."""
    n = len(V)
    if n == 0:
        return 0
    Vm = np.array(V, dtype=float)
    w = cmath.exp(2j * math.pi * t)
    H = (1 - w) * Vm + (1 - w.conjugate()) * Vm.T
    return float_signature(H)


def float_alexander_value(V, t):
    Vm = np.array(V, dtype=float)
    return np.linalg.det(t * Vm - Vm.T) if len(V) else 1.0


def random_seifert(rng, genus, spread=3):
    """Random integer V with V - V^T the standard symplectic form.

    V = M + J with M symmetric and J having 1 at (2i, 2i+1).
    """
    n = 2 * genus
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rng.randint(-spread, spread)
    for i in range(genus):
        M[2 * i][2 * i + 1] += 1
    return M


def random_unimodular(rng, n, steps=6):
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-1, 1])
        for r in range(n):
            P[r][i] += c * P[r][j]
    return P


def random_hermitian(rng, n, spread=5):
    """Random rational Hermitian matrix with a well-separated spectrum.

    Returns (entries as (re, im) integer pairs, float matrix); rejected
    if any eigenvalue is within 1e-6 of zero.
    """
    while True:
        A = [[None] * n for _ in range(n)]
        for i in range(n):
            A[i][i] = (rng.randint(-spread, spread), 0)
            for j in range(i + 1, n):
                a, b = rng.randint(-spread, spread), rng.randint(-spread, spread)
                A[i][j] = (a, b)
                A[j][i] = (a, -b)
        F = np.array([[complex(*A[i][j]) for j in range(n)] for i in range(n)])
        w = np.linalg.eigvalsh(F) if n else np.array([])
        if n == 0 or np.min(np.abs(w)) > 1e-6:
            return A, F
