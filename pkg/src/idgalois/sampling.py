"""Seeded random samplers for rational functions, matrices and systems."""
from __future__ import annotations

import random

from .field_arith.ratfunc import RatFunc
from .matrices import Matrix


def random_poly(F, rng: random.Random, degree: int, var: str = "t", step: int = 1, monic: bool = False) -> RatFunc:
    """Random polynomial of degree <= degree in var^step."""
    coeffs = [0] * (degree * step + 1)
    for k in range(degree + 1):
        coeffs[k * step] = rng.randrange(F.q)
    if monic:
        coeffs[degree * step] = 1
    return RatFunc.poly(F, coeffs, var)


def random_ratfunc(F, rng: random.Random, max_deg: int = 4, var: str = "t", step: int = 1) -> RatFunc:
    """num/den with a nonzero monic denominator; both in var^step."""
    num = random_poly(F, rng, rng.randint(0, max_deg), var, step)
    den = random_poly(F, rng, rng.randint(0, max_deg), var, step, monic=True)
    return num / den


def random_matrix(F, rng: random.Random, n: int, max_deg: int = 2, var: str = "t", step: int = 1,
                  invertible: bool = True, tries: int = 100) -> Matrix:
    for _ in range(tries):
        M = Matrix([[random_ratfunc(F, rng, max_deg, var, step) for _ in range(n)] for _ in range(n)])
        if not invertible or not M.det().is_zero():
            return M
    raise ValueError("could not draw an invertible matrix")


def random_projective_D(F, rng: random.Random, n: int, L: int, max_deg: int = 2) -> list:
    """D_0..D_L with D_l over K(t^(p^l))."""
    return [random_matrix(F, rng, n, max_deg, "t", F.p**l) for l in range(L + 1)]
