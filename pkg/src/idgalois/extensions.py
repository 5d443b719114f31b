"""Cyclic extensions L = K(s) of F = K(t) with their Galois action and d*.

Elements of L are rational functions in ``s`` (var tag ``"s"``); the base
variable is eliminated through t = s^m (Kummer) or t = s^p - s
(Artin-Schreier).  :class:`BaseField` presents F itself through the same
interface (Galois group of order 1), so matrix code can run over either.
"""
from __future__ import annotations

import re
from math import gcd as igcd

from .field_arith import poly as P
from .field_arith.gf import FieldError, FiniteField
from .field_arith.parser import parse_expr
from .field_arith.ratfunc import RatFunc
from .field_arith.series import TruncSeries
from .hasse_schmidt import DEFAULT_N, TruncationError, hs_derive, in_level, taylor_vector

KUMMER = "kummer"
ARTIN_SCHREIER = "artin-schreier"


class ExtensionError(ValueError):
    pass


class BaseField:
    """F = K(t) with the trivial Galois group."""

    kind = "base"
    var = "t"
    order = 1

    def __init__(self, field: FiniteField, N: int = DEFAULT_N):
        self.field = field
        self.N = N
        self.p = field.p

    def designator(self) -> str:
        return "base"

    def zero(self) -> RatFunc:
        return RatFunc.const(self.field, 0, "t")

    def one(self) -> RatFunc:
        return RatFunc.const(self.field, 1, "t")

    def scalar(self, c: int) -> RatFunc:
        return RatFunc.const(self.field, c, "t")

    def parse(self, text: str) -> RatFunc:
        return parse_expr(text, self.field, "t")

    def embed(self, f: RatFunc) -> RatFunc:
        return f

    def derive(self, x: RatFunc, k: int) -> RatFunc:
        return hs_derive(x, k, self.N)

    def in_level(self, x: RatFunc, l: int) -> bool:
        return in_level(x, l)

    def galois_apply(self, j: int, x: RatFunc) -> RatFunc:
        return x

    def fixed_by(self, x: RatFunc) -> bool:
        return True

    def to_base(self, x: RatFunc) -> RatFunc:
        return x


class Extension:
    """A cyclic extension with precomputed theta(s) up to order N."""

    def __init__(self, kind: str, field: FiniteField, N: int = DEFAULT_N, m: int | None = None):
        if N < 1:
            raise ExtensionError("N must be at least 1")
        self.kind = kind
        self.field = field
        self.N = N
        self.p = p = field.p
        self.var = "s"
        s = RatFunc.gen(field, "s")
        zero = RatFunc.const(field, 0, "s")
        if kind == KUMMER:
            if m is None or m < 2:
                raise ExtensionError("Kummer extension needs m >= 2")
            if igcd(m, p) != 1:
                raise ExtensionError(f"Kummer degree m={m} must be prime to p={p}")
            self.m = m
            self.order = m
            self.zeta = field.root_of_unity(m)
            self.t_image = s**m
            self.relation = P.monomial(field, m)  # t = s^m
            # g^m = 1 + T/t is homogeneous in T/t: g = sum gamma_k (T/t)^k with
            # gamma^m = 1 + T over the prime field, lifted one coefficient at a time.
            gamma = _scalar_root(field, m, N)
            inv_t = self.t_image.inverse()
            coeffs = []
            pw = s
            for k in range(N + 1):
                coeffs.append(pw * RatFunc.const(field, gamma[k], "s"))
                pw = pw * inv_t
            self.theta_s = TruncSeries(coeffs, N, zero)
        elif kind == ARTIN_SCHREIER:
            self.m = p
            self.order = p
            self.zeta = None
            self.t_image = s**p - s
            self.relation = P.sub(field, P.monomial(field, p), P.monomial(field, 1))
            coeffs = [s] + [zero] * N
            q = 1
            minus_one = RatFunc.const(field, field.neg(1), "s")
            while q <= N:
                coeffs[q] = minus_one
                q *= p
            self.theta_s = TruncSeries(coeffs, N, zero)
        else:
            raise ExtensionError(f"unknown extension kind {kind!r}")
        self._h = self.theta_s - TruncSeries.constant(s, N, zero)
        hp = [TruncSeries.constant(RatFunc.const(field, 1, "s"), N, zero)]
        for _ in range(N):
            hp.append(hp[-1] * self._h)
        # _hcoef[k] lists (i, [T^k] h^i) for the nonzero entries, i <= k
        self._hcoef = [
            [(i, hp[i][k]) for i in range(k + 1) if not hp[i][k].is_zero()] for k in range(N + 1)
        ]
        self._zero = zero
        if not self.relation_holds():
            raise AssertionError("theta(s) violates the defining relation")

    # -- identification
    def designator(self) -> str:
        return f"kummer(m={self.m})" if self.kind == KUMMER else ARTIN_SCHREIER

    def __repr__(self):
        return f"Extension({self.designator()}, {self.field!r}, N={self.N})"

    def relation_holds(self) -> bool:
        """theta(s)^m = t + T, resp. theta(s)^p - theta(s) = t + T, to order N."""
        N = self.N
        target = TruncSeries([self.t_image, RatFunc.const(self.field, 1, "s")], N, self._zero)
        th = self.theta_s
        if self.kind == KUMMER:
            return th**self.m == target and th[0] == RatFunc.gen(self.field, "s")
        return th**self.p - th == target and th[0] == RatFunc.gen(self.field, "s")

    # -- elements
    def zero(self) -> RatFunc:
        return self._zero

    def one(self) -> RatFunc:
        return RatFunc.const(self.field, 1, "s")

    def scalar(self, c: int) -> RatFunc:
        return RatFunc.const(self.field, c, "s")

    def gen(self) -> RatFunc:
        return RatFunc.gen(self.field, "s")

    def parse(self, text: str) -> RatFunc:
        """Parse an element written in s (``t`` is accepted and rewritten)."""
        return parse_expr(text, self.field, "s", symbols={"t": self.t_image})

    def embed(self, f: RatFunc) -> RatFunc:
        """The image of f in K(t) inside L."""
        if f.var == "s":
            return f
        return f.substitute(self.t_image)

    def _coerce(self, x: RatFunc) -> RatFunc:
        if x.field is not self.field:
            raise ExtensionError("element lives over a different constant field")
        return self.embed(x) if x.var == "t" else x

    # -- Galois action
    def galois_apply(self, j: int, x: RatFunc) -> RatFunc:
        """eta^j(x) with eta: s -> zeta*s (Kummer) or s -> s + 1."""
        if x.var == "t":
            return x
        F = self.field
        j %= self.order
        if j == 0:
            return x
        if self.kind == KUMMER:
            c = F.pow(self.zeta, j)
            num, den = P.scale_variable(F, x.num, c), P.scale_variable(F, x.den, c)
        else:
            c = F.from_int(j)
            num, den = P.taylor_shift(F, x.num, c), P.taylor_shift(F, x.den, c)
        return RatFunc(F, num, den, "s", reduced=False)

    def fixed_by(self, x: RatFunc) -> bool:
        return self.galois_apply(1, x) == x

    # -- derivations
    def ext_derive(self, x: RatFunc, k: int) -> RatFunc:
        """[T^k] theta(x), theta(x) = sum_i D_s^(i)(x) (theta(s) - s)^i."""
        if k < 0:
            raise ValueError("derivation order must be nonnegative")
        if k > self.N:
            raise TruncationError(f"order {k} exceeds truncation bound N={self.N}")
        if x.var == "t":
            return self.embed(hs_derive(x, k, self.N))
        if k == 0:
            return x
        ds = taylor_vector(x, k)
        acc = self._zero
        for i, c in self._hcoef[k]:
            if not ds[i].is_zero():
                acc = acc + ds[i] * c
        return acc

    derive = ext_derive

    def taylor(self, x: RatFunc, n: int | None = None) -> TruncSeries:
        n = self.N if n is None else n
        x = self._coerce(x)
        return TruncSeries([self.ext_derive(x, k) for k in range(n + 1)], n, self._zero)

    def level_membership(self, x: RatFunc, l: int) -> bool:
        """x in L_l, i.e. d^(p^j)(x) = 0 for all j < l."""
        if l <= 0:
            return True
        if self.p ** (l - 1) > self.N:
            raise TruncationError(f"level {l} needs order p^{l - 1} > N={self.N}")
        if x.is_constant():
            return True
        x = self._coerce(x)
        q = 1
        for _ in range(l):
            if not self.ext_derive(x, q).is_zero():
                return False
            q *= self.p
        return True

    in_level = level_membership

    # -- coordinates over F
    def reduce_poly(self, a) -> list:
        """Coefficients c_0..c_{d-1} in K[t] with a(s) = sum c_i(t) s^i."""
        F, d = self.field, self.order
        if self.kind == KUMMER:
            out = [[] for _ in range(d)]
            for n, c in enumerate(a):
                if c:
                    q, r = divmod(n, d)
                    row = out[r]
                    row.extend([0] * (q + 1 - len(row)))
                    row[q] = F.add(row[q], c)
            return [P.strip(r) for r in out]
        # s^n = s^(n-p) (s + t) for n >= p
        coeffs = [P.const(F, c) for c in a]
        for n in range(len(coeffs) - 1, d - 1, -1):
            cn = coeffs[n]
            if not cn:
                continue
            coeffs[n - d + 1] = P.add(F, coeffs[n - d + 1], cn)
            coeffs[n - d] = P.add(F, coeffs[n - d], P.shift(cn, 1))
            coeffs[n] = ()
        coeffs.extend([()] * (d - len(coeffs)))
        return coeffs[:d]

    def to_basis(self, x: RatFunc) -> list:
        """[c_0, ..., c_{d-1}] in K(t) with x = sum c_i s^i."""
        x = self._coerce(x)
        F = self.field
        conj = RatFunc.const(F, 1, "s")
        den = RatFunc(F, x.den, (1,), "s", reduced=True)
        for j in range(1, self.order):
            conj = conj * self.galois_apply(j, den)
        norm = self.reduce_poly((den * conj).num)
        if any(norm[1:]):
            raise AssertionError("norm of the denominator is not in K(t)")
        numer = self.reduce_poly((RatFunc(F, x.num, (1,), "s", reduced=True) * conj).num)
        normf = RatFunc(F, norm[0], (1,), "t")
        scale = conj.den  # conj is a polynomial
        assert scale == (1,)
        return [RatFunc(F, c, (1,), "t") / normf for c in numer]

    def to_base(self, x: RatFunc) -> RatFunc:
        """Rewrite an element of F (given in s) as a rational function of t."""
        cs = self.to_basis(x)
        if any(not c.is_zero() for c in cs[1:]):
            raise ExtensionError(f"{x} does not lie in K(t)")
        return cs[0]


def _scalar_root(F: FiniteField, m: int, N: int) -> list:
    """gamma_0..gamma_N over GF(p) with gamma^m = 1 + T and gamma_0 = 1."""
    p = F.p
    inv_m = pow(m, p - 2, p) if p > 2 else 1
    g = [1] + [0] * N
    target = [1, 1] + [0] * (N - 1)
    for k in range(1, N + 1):
        # [T^k] of (g_0 + ... + g_{k-1} T^{k-1})^m
        acc = [1] + [0] * k
        for _ in range(m):
            nxt = [0] * (k + 1)
            for i, a in enumerate(acc):
                if a:
                    for j in range(k + 1 - i):
                        if g[j] and j < k:
                            nxt[i + j] = (nxt[i + j] + a * g[j]) % p
            acc = nxt
        g[k] = (target[k] - acc[k]) * inv_m % p
    return [F.from_int(c) for c in g]


def build_extension(kind: str, field: FiniteField, N: int = DEFAULT_N, m: int | None = None) -> Extension:
    try:
        return Extension(kind, field, N, m)
    except FieldError as exc:
        raise ExtensionError(str(exc)) from exc


_DESIG = re.compile(r"^\s*(?:kummer\s*\(\s*m\s*=\s*(\d+)\s*\)|(artin-schreier))\s*$", re.I)


def parse_extension(text: str, field: FiniteField, N: int = DEFAULT_N):
    """``kummer(m=2)``, ``artin-schreier`` or ``base``."""
    if text.strip().lower() == "base":
        return BaseField(field, N)
    mt = _DESIG.match(text)
    if not mt:
        raise ExtensionError(f"bad extension designator {text!r}")
    if mt.group(1):
        return build_extension(KUMMER, field, N, int(mt.group(1)))
    return build_extension(ARTIN_SCHREIER, field, N)
