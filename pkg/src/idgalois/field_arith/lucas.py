"""Binomial coefficients modulo a prime, digit by digit."""
from __future__ import annotations

from functools import lru_cache
from math import comb


def lucas_binom(n: int, k: int, p: int) -> int:
    """C(n, k) mod p as the product of C(n_i, k_i) over base-p digits."""
    if n < 0 or k < 0:
        raise ValueError("lucas_binom needs nonnegative arguments")
    result = 1
    while k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        result = result * comb(ni, ki) % p
    return result


@lru_cache(maxsize=4096)
def _row(nmax: int, k: int, p: int) -> tuple:
    return tuple(lucas_binom(n, k, p) for n in range(nmax + 1))


def binom_row(nmax: int, k: int, p: int) -> tuple:
    """(C(0,k), ..., C(nmax,k)) mod p; rows are cached with power-of-two lengths."""
    size = 16
    while size <= nmax:
        size *= 2
    return _row(size, k, p)
