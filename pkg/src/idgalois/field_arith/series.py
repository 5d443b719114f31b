"""Truncated power series in a formal variable T with coefficients in a field."""
from __future__ import annotations


class TruncSeries:
    """Coefficients c_0..c_N; products drop every term of degree > N.

    Coefficients only need ``+``, ``-``, ``*`` and ``is_zero()`` (RatFunc
    qualifies).  ``zero`` is a coefficient used for padding.
    """

    __slots__ = ("coeffs", "N", "zero")

    def __init__(self, coeffs, N: int, zero):
        cs = list(coeffs)[: N + 1]
        cs.extend([zero] * (N + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.N = N
        self.zero = zero

    @classmethod
    def constant(cls, c, N: int, zero):
        return cls([c], N, zero)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return self.N + 1

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            raise TypeError("expected a TruncSeries")
        if other.N != self.N:
            raise ValueError(f"truncation orders differ: {self.N} vs {other.N}")

    def __add__(self, other):
        self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.N, self.zero)

    def __sub__(self, other):
        self._check(other)
        return TruncSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.N, self.zero)

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.N, self.zero)

    def scale(self, c):
        return TruncSeries([c * a for a in self.coeffs], self.N, self.zero)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._check(other)
        N = self.N
        out = [self.zero] * (N + 1)
        a, b = self.coeffs, other.coeffs
        for i in range(N + 1):
            if a[i].is_zero():
                continue
            for j in range(N + 1 - i):
                if not b[j].is_zero():
                    out[i + j] = out[i + j] + a[i] * b[j]
        return TruncSeries(out, N, self.zero)

    __rmul__ = scale

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative series exponent")
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        if result is None:
            one = self.coeffs[0] - self.coeffs[0] + 1
            return TruncSeries.constant(one, self.N, self.zero)
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            cs = str(c)
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({cs})*{mono}")
        return " + ".join(terms) if terms else "0"

    __str__ = __repr__


def hensel_root(c: TruncSeries, m: int, inv_m) -> TruncSeries:
    """The unique g with g^m = c and g_0 = 1, for c_0 = 1.

    ``inv_m`` is the inverse of m in the coefficient field.  Each step solves
    m * g_k = c_k - [T^k] (g_0 + ... + g_{k-1} T^{k-1})^m.
    """
    N = c.N
    if not (c.coeffs[0] - 1).is_zero():
        raise ValueError("Hensel lifting needs constant term 1")
    one = c.coeffs[0]
    g = [one] + [c.zero] * N
    for k in range(1, N + 1):
        partial = TruncSeries(g[:k], k, c.zero) ** m
        g[k] = (c.coeffs[k] - partial.coeffs[k]) * inv_m
    return TruncSeries(g, N, c.zero)
