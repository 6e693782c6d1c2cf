"""Shared construction helpers for randomized tests.

Everything takes an explicit random.Random so failures reproduce; seeds are
fixed per test.
"""

from __future__ import annotations

import random
from fractions import Fraction

from reidzeta.arith import IntMat, mat_inverse
from reidzeta.groups import EndoPair, SArithAbelianGroup


def rand_int_mat(rng: random.Random, d: int, lo: int = -3, hi: int = 3) -> IntMat:
    return IntMat.from_rows(
        [[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)]
    )


def rand_unimodular(rng: random.Random, d: int, steps: int = 6) -> IntMat:
    """Random product of elementary shear and swap matrices (det +-1)."""
    m = [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if d == 1:
            break
        op = rng.random()
        if op < 0.7:
            c = rng.randint(-2, 2)
            for col in range(d):
                m[i][col] += c * m[j][col]
        else:
            m[i], m[j] = m[j], m[i]
    return IntMat.from_rows(m)


def s_unit(rng: random.Random, s_primes: tuple[int, ...]) -> Fraction:
    """A random element of Z[1/S]: small integer over an S-smooth denominator."""
    num = rng.randint(-6, 6)
    den = 1
    for p in s_primes:
        den *= p ** rng.randint(0, 1)
    return Fraction(num, den)


def commuting_rational_pair(
    rng: random.Random,
    d: int,
    s_primes: tuple[int, ...] = (),
    tame: bool = True,
) -> tuple[SArithAbelianGroup, EndoPair, list[tuple[Fraction, Fraction]]]:
    """A commuting pair with rational spectra: conjugated diagonal matrices.

    Returns (group, pair, aligned diagonal eigenvalue pairs).  With tame=True
    the diagonal entries are chosen with xi != +-eta slotwise.
    """
    p_mat = rand_unimodular(rng, d)
    p_inv = mat_inverse(p_mat)
    while True:
        d1 = [s_unit(rng, s_primes) for _ in range(d)]
        d2 = [s_unit(rng, s_primes) for _ in range(d)]
        if not tame:
            break
        if all(x != y and x != -y for x, y in zip(d1, d2)):
            break
    diag1 = IntMat.from_rows(
        [[d1[i] if i == j else 0 for j in range(d)] for i in range(d)]
    )
    diag2 = IntMat.from_rows(
        [[d2[i] if i == j else 0 for j in range(d)] for i in range(d)]
    )
    phi = p_mat * diag1 * p_inv
    psi = p_mat * diag2 * p_inv
    group = SArithAbelianGroup(d, s_primes)
    return group, EndoPair(phi, psi), list(zip(d1, d2))
