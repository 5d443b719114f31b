"""Finite fields GF(p^m) with elements encoded as integers.

An element of GF(p^m) is the integer ``sum(d_i * p**i)`` where ``d_i`` are the
coefficients of its representative polynomial in the generator ``a`` (the class
of ``x`` modulo the defining polynomial).  For ``m == 1`` this is just the
residue mod p.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _pmod_mul(a, b, p):
    """Multiply coefficient lists over GF(p) (low degree first)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _pmod_rem(a, b, p):
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv_lead % p
        if c:
            shift = len(a) - 1 - db
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - c * y) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def is_irreducible_mod_p(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = list(poly)
    n = len(poly) - 1
    if n < 1 or poly[-1] % p == 0:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _pmod_rem(poly, list(low) + [1], p):
                return False
    return True


def conway_like_modulus(p: int, m: int):
    """Lexicographically least monic irreducible of degree m over GF(p)."""
    for low in itertools.product(range(p), repeat=m):
        cand = list(reversed(low)) + [1]
        if cand[0] and is_irreducible_mod_p(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


class FiniteField:
    """GF(p^m).  Instances are interned: build them through :func:`GF`."""

    def __init__(self, p: int, m: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("degree m must be positive")
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = conway_like_modulus(p, m)
            modulus = tuple(int(c) % p for c in modulus)
            while modulus and modulus[-1] == 0:
                modulus = modulus[:-1]
            if len(modulus) - 1 != m or modulus[-1] != 1:
                raise FieldError(f"modulus must be monic of degree {m}")
            if m > 8:
                raise FieldError("irreducibility check is limited to degree <= 8")
            if not is_irreducible_mod_p(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over GF({p})")
            self.modulus = modulus
            self._build_tables()

    # -- construction helpers for GF(p^m), m > 1
    def _digits(self, a: int):
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _from_digits(self, ds) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _poly_mulmod(self, x: int, y: int) -> int:
        prod = _pmod_mul(self._digits(x), self._digits(y), self.p)
        rem = _pmod_rem(prod, self.modulus, self.p) if len(prod) > self.m else prod
        return self._from_digits(rem + [0] * (self.m - len(rem)))

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            exp = [1] * (q - 1)
            x = 1
            ok = True
            for i in range(1, q - 1):
                x = self._poly_mulmod(x, g)
                if x == 1:
                    ok = False
                    break
                exp[i] = x
            if ok:
                break
        else:  # pragma: no cover - a cyclic unit group always has a generator
            raise FieldError("no primitive element found")
        self._gen = g
        self._exp = exp + exp
        self._log = [0] * q
        for i, v in enumerate(exp):
            self._log[v] = i
        digits = [self._digits(a) for a in range(q)]
        p = self.p
        if q <= 1024:
            self._add = [
                [self._from_digits([(u + v) % p for u, v in zip(digits[a], digits[b])]) for b in range(q)]
                for a in range(q)
            ]
        else:
            self._add = None
        self._digit_cache = digits

    # -- element arithmetic
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        if self.p == 2:
            return a ^ b
        da, db = self._digit_cache[a], self._digit_cache[b]
        return self._from_digits([(u + v) % self.p for u, v in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self._from_digits([-d % self.p for d in self._digit_cache[a]])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in " + self.designator())
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.m == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(q)."""
        return n % self.p

    def elements(self):
        return range(self.q)

    def generator(self) -> int:
        """The class of x (printed ``a``); for prime fields this is 1."""
        return self.p if self.m > 1 else 1

    def element_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
        return k

    def primitive_element(self) -> int:
        if self.m > 1:
            return self._gen
        for g in range(1, self.p):
            if self.element_order(g) == self.p - 1:
                return g
        raise FieldError("unreachable")

    def root_of_unity(self, order: int) -> int:
        """A primitive ``order``-th root of unity, or FieldError naming a field that has one."""
        if (self.q - 1) % order:
            r = minimal_root_of_unity_degree(self.p, order)
            raise FieldError(
                f"{self.designator()} has no primitive {order}-th root of unity; "
                f"smallest field containing one is GF({self.p}^{r})"
            )
        return self.pow(self.primitive_element(), (self.q - 1) // order)

    # -- printing
    def fmt(self, a: int) -> str:
        if self.m == 1:
            return str(a)
        terms = []
        for i, d in reversed(list(enumerate(self._digit_cache[a]))):
            if not d:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(d))
            elif d == 1:
                terms.append(mono)
            else:
                terms.append(f"{d}*{mono}")
        if not terms:
            return "0"
        s = "+".join(terms)
        return s if len(terms) == 1 and "*" not in s else f"({s})"

    def designator(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        terms = []
        for i, c in reversed(list(enumerate(self.modulus))):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return f"GF({self.p}^{self.m}; modulus={'+'.join(terms)})"

    def __repr__(self):
        return self.designator()

    def __reduce__(self):
        return (GF, (self.p, self.m, self.modulus))


def minimal_root_of_unity_degree(p: int, order: int) -> int:
    """Least r with order | p^r - 1."""
    if order % p == 0:
        raise FieldError(f"no primitive {order}-th roots of unity in characteristic {p}")
    r, x = 1, p % order
    while x != 1 % order:
        x = x * p % order
        r += 1
    return r


@lru_cache(maxsize=None)
def _gf(p: int, m: int, modulus) -> FiniteField:
    return FiniteField(p, m, modulus)


def GF(p: int, m: int = 1, modulus=None) -> FiniteField:
    if m > 1 and modulus is None:
        modulus = conway_like_modulus(p, m) if is_prime(p) else None
    elif modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
    return _gf(p, m, modulus if m > 1 else None)


_DESIGNATOR = re.compile(
    r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?(?:;\s*modulus\s*=\s*([^)]*))?\)\s*$"
)


def parse_field(text: str) -> FiniteField:
    """Parse ``GF(p)`` or ``GF(p^m; modulus=<poly in x>)``."""
    mt = _DESIGNATOR.match(text)
    if not mt:
        raise FieldError(f"bad field designator {text!r}")
    p = int(mt.group(1))
    m = int(mt.group(2) or 1)
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    modulus = None
    if mt.group(3):
        from .parser import parse_int_poly

        modulus = parse_int_poly(mt.group(3), p, "x")
    return GF(p, m, modulus)
