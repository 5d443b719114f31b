"""Reduced rational functions in one variable over GF(p^m)."""
from __future__ import annotations

from . import poly as P
from .gf import FiniteField


class FieldMismatch(TypeError):
    pass


class RatFunc:
    """A fraction num/den with gcd 1 and monic den.

    Equality is structural because the form is canonical.  ``var`` tags the
    indeterminate (``"t"`` for F = K(t), ``"s"`` for the generator of a cyclic
    extension).
    """

    __slots__ = ("field", "num", "den", "var", "_hash")

    def __init__(self, field: FiniteField, num, den=(1,), var: str = "t", *, reduced: bool = False):
        num = P.strip(num)
        den = P.strip(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            if not num:
                den = (1,)
            else:
                g = P.gcd(field, num, den)
                if g != (1,):
                    num = P.exact_div(field, num, g)
                    den = P.exact_div(field, den, g)
            lead = den[-1]
            if lead != 1:
                inv = field.inv(lead)
                num = P.scale(field, num, inv)
                den = P.scale(field, den, inv)
        self.field = field
        self.num = num
        self.den = den
        self.var = var
        self._hash = None

    # -- constructors
    @classmethod
    def const(cls, field, c: int, var: str = "t") -> "RatFunc":
        return cls(field, (c % field.q,) if c % field.q else (), (1,), var, reduced=True)

    @classmethod
    def from_int(cls, field, n: int, var: str = "t") -> "RatFunc":
        c = field.from_int(n)
        return cls(field, (c,) if c else (), (1,), var, reduced=True)

    @classmethod
    def gen(cls, field, var: str = "t") -> "RatFunc":
        return cls(field, (0, 1), (1,), var, reduced=True)

    @classmethod
    def poly(cls, field, coeffs, var: str = "t") -> "RatFunc":
        return cls(field, coeffs, (1,), var, reduced=True)

    @classmethod
    def over_power(cls, field, num, base, e: int, var: str = "t") -> "RatFunc":
        """num / base^e, reduced using only gcds against ``base`` (cheap for small base)."""
        base = P.monic(field, base)
        num = P.strip(num)
        den = P.power(field, base, e)
        if not num:
            return cls(field, (), (1,), var, reduced=True)
        while len(den) > 1:
            h = P.gcd(field, base, P.rem(field, den, base))
            if h == (1,):
                break
            g = P.gcd(field, h, P.rem(field, num, h))
            if g == (1,):
                break
            num = P.exact_div(field, num, g)
            den = P.exact_div(field, den, g)
        return cls(field, num, den, var, reduced=True)

    # -- predicates
    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == (1,) and self.den == (1,)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == (1,)

    def is_poly(self) -> bool:
        return self.den == (1,)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0] if self.num else 0

    def degree_bound(self) -> int:
        """deg(num) + deg(den) + 1."""
        return max(len(self.num) - 1, 0) + len(self.den) - 1 + 1

    # -- arithmetic
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.field is not self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            if other.var != self.var:
                raise FieldMismatch(f"variables {self.var!r} vs {other.var!r}")
            return other
        if isinstance(other, int):
            return RatFunc.from_int(self.field, other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not self.num:
            return other
        if not other.num:
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            num = P.add(F, a, c)
            if not num:
                return RatFunc(F, (), (1,), self.var, reduced=True)
            if b == (1,):
                return RatFunc(F, num, b, self.var, reduced=True)
            g = P.gcd(F, num, b)
            if g != (1,):
                num, b = P.exact_div(F, num, g), P.exact_div(F, b, g)
            return RatFunc(F, num, b, self.var, reduced=True)
        g = P.gcd(F, b, d)
        if g == (1,):
            num = P.add(F, P.mul(F, a, d), P.mul(F, c, b))
            return RatFunc(F, num, P.mul(F, b, d), self.var, reduced=True)
        b1, d1 = P.exact_div(F, b, g), P.exact_div(F, d, g)
        num = P.add(F, P.mul(F, a, d1), P.mul(F, c, b1))
        den = P.mul(F, b, d1)
        if not num:
            return RatFunc(F, (), (1,), self.var, reduced=True)
        h = P.gcd(F, num, g)
        if h != (1,):
            num, den = P.exact_div(F, num, h), P.exact_div(F, den, h)
        return RatFunc(F, num, den, self.var, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, P.neg(self.field, self.num), self.den, self.var, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if not self.num or not other.num:
            return RatFunc(F, (), (1,), self.var, reduced=True)
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == (1,) and d == (1,):
            return RatFunc(F, P.mul(F, a, c), (1,), self.var, reduced=True)
        g1 = P.gcd(F, a, d) if d != (1,) else (1,)
        g2 = P.gcd(F, c, b) if b != (1,) else (1,)
        if g1 != (1,):
            a, d = P.exact_div(F, a, g1), P.exact_div(F, d, g1)
        if g2 != (1,):
            c, b = P.exact_div(F, c, g2), P.exact_div(F, b, g2)
        num = P.mul(F, a, c)
        den = P.mul(F, b, d)
        lead = den[-1]
        if lead != 1:
            inv = F.inv(lead)
            num, den = P.scale(F, num, inv), P.scale(F, den, inv)
        return RatFunc(F, num, den, self.var, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by zero rational function")
        F = self.field
        num, den = self.den, self.num
        if den[-1] != 1:
            inv = F.inv(den[-1])
            num, den = P.scale(F, num, inv), P.scale(F, den, inv)
        return RatFunc(F, num, den, self.var, reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(F, P.power(F, self.num, e), P.power(F, self.den, e), self.var, reduced=True)

    # -- structural
    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.from_int(self.field, other, self.var)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (
            self.field is other.field
            and self.var == other.var
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.p, self.field.m, self.var, self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __str__(self):
        F = self.field
        n = P.to_str(F, self.num, self.var)
        if self.den == (1,):
            return n
        d = P.to_str(F, self.den, self.var)
        if " + " in n:
            n = f"({n})"
        if " + " in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self}, {self.field!r})"

    # -- substitutions
    def substitute(self, value: "RatFunc") -> "RatFunc":
        """self(value): replace the variable by a rational function (possibly in another variable)."""
        F = self.field

        def ev(coeffs):
            acc = RatFunc(F, (), (1,), value.var, reduced=True)
            for c in reversed(coeffs):
                acc = acc * value + RatFunc.const(F, c, value.var)
            return acc

        return ev(self.num) / ev(self.den)

    def with_var(self, var: str) -> "RatFunc":
        return RatFunc(self.field, self.num, self.den, var, reduced=True)


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Dispatch ``op`` in {add, sub, mul, div}."""
    if a.field is not b.field or a.var != b.var:
        raise FieldMismatch("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
