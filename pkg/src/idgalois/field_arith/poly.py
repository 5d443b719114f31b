"""Dense univariate polynomials over a :class:`FiniteField`.

Polynomials are tuples of field elements, lowest degree first, with no trailing
zeros; the zero polynomial is ``()``.  Every function takes the field first.
Prime fields get integer fast paths; products of long operands over GF(p) use
Kronecker substitution so the inner loop runs in C.
"""
from __future__ import annotations

from array import array

from .lucas import binom_row

ZERO = ()

_KRONECKER_MIN = 24


def strip(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(F, c: int) -> tuple:
    return (c,) if c else ()


def monomial(F, k: int, c: int = 1) -> tuple:
    return (0,) * k + (c,) if c else ()


def degree(a) -> int:
    return len(a) - 1


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    if F.m == 1:
        p = F.p
        out = [(x + y) % p for x, y in zip(a, b)]
    else:
        out = [F.add(x, y) for x, y in zip(a, b)]
    out.extend(a[len(b):])
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def neg(F, a):
    if F.m == 1:
        p = F.p
        return tuple(-x % p for x in a)
    return tuple(F.neg(x) for x in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c: int):
    if c == 0:
        return ()
    if F.m == 1:
        p = F.p
        return tuple(x * c % p for x in a)
    return tuple(F.mul(x, c) for x in a)


def shift(a, k: int):
    return (0,) * k + tuple(a) if a else ()


def _kronecker_mul(a, b, p):
    bound = min(len(a), len(b)) * (p - 1) ** 2
    for code, size in (("B", 1), ("H", 2), ("I", 4), ("Q", 8)):
        if bound < 1 << (8 * size):
            break
    else:  # pragma: no cover - degrees far beyond desk scale
        return None
    if array(code).itemsize != size:  # pragma: no cover - exotic platforms
        return None
    x = int.from_bytes(array(code, a).tobytes(), "little")
    y = int.from_bytes(array(code, b).tobytes(), "little")
    n = len(a) + len(b) - 1
    raw = (x * y).to_bytes(n * size, "little")
    return [c % p for c in memoryview(raw).cast(code)]


def mul(F, a, b):
    if not a or not b:
        return ()
    if F.m == 1:
        p = F.p
        if len(a) >= _KRONECKER_MIN and len(b) >= _KRONECKER_MIN:
            out = _kronecker_mul(a, b, p)
            if out is not None:
                while out and out[-1] == 0:
                    out.pop()
                return tuple(out)
        if len(a) < len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a, j):
                    out[i] += x * y
        out = [c % p for c in out]
    else:
        out = [0] * (len(a) + len(b) - 1)
        fm, fa = F.mul, F.add
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a, j):
                    if x:
                        out[i] = fa(out[i], fm(x, y))
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def power(F, a, e: int):
    if e < 0:
        raise ValueError("negative polynomial exponent")
    result = (1,)
    base = a
    while e:
        if e & 1:
            result = mul(F, result, base)
        e >>= 1
        if e:
            base = mul(F, base, base)
    return result


def divmod_(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), tuple(a)
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    if F.m == 1:
        p = F.p
        inv = pow(b[-1], p - 2, p)
        blow = b[:-1]
        # reduce lazily: entries are only taken mod p when they are read
        for k in range(len(a) - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            q[k] = c
            if c:
                for i, y in enumerate(blow, k):
                    r[i] -= c * y
        r = [x % p for x in r[:db]]
    else:
        inv = F.inv(b[-1])
        for k in range(len(a) - 1 - db, -1, -1):
            c = F.mul(r[k + db], inv)
            q[k] = c
            if c:
                for i, y in enumerate(b[:-1], k):
                    r[i] = F.sub(r[i], F.mul(c, y))
        r = r[:db]
    while r and r[-1] == 0:
        r.pop()
    while q and q[-1] == 0:
        q.pop()
    return tuple(q), tuple(r)


def rem(F, a, b):
    return divmod_(F, a, b)[1]


def exact_div(F, a, b):
    q, r = divmod_(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(F, a):
    if not a or a[-1] == 1:
        return tuple(a)
    return scale(F, a, F.inv(a[-1]))


def _gcd_prime(a, b, p):
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        b = [x * inv % p for x in b]
        db = len(b) - 1
        blow = b[:-1]
        r = a
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] % p
            if c:
                for i, y in enumerate(blow, k):
                    r[i] -= c * y
        r = [x % p for x in r[:db]]
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    if a and a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return tuple(a)


def gcd(F, a, b):
    """Monic gcd (``()`` when both are zero)."""
    if F.m == 1:
        return _gcd_prime(a, b, F.p)
    while b:
        a, b = b, rem(F, a, b)
    return monic(F, a)


def evaluate(F, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def compose(F, a, b):
    """a(b(x)) by Horner's rule."""
    acc = ()
    for c in reversed(a):
        acc = add(F, mul(F, acc, b), const(F, c))
    return acc


def scale_variable(F, a, c: int):
    """a(c*x)."""
    out, pw = [], 1
    for x in a:
        out.append(F.mul(x, pw))
        pw = F.mul(pw, c)
    return strip(out)


def taylor_shift(F, a, c: int):
    """a(x + c) via synthetic division."""
    if not a or c == 0:
        return tuple(a)
    coeffs = list(a)
    n = len(coeffs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            coeffs[j] = F.add(coeffs[j], F.mul(c, coeffs[j + 1]))
    return strip(coeffs)


def inflate(a, e: int):
    """a(x^e)."""
    if e == 1 or not a:
        return tuple(a)
    out = [0] * ((len(a) - 1) * e + 1)
    for i, c in enumerate(a):
        out[i * e] = c
    return tuple(out)


def hasse_derivative(F, a, k: int):
    """The k-th Hasse derivative: x^n -> C(n, k) x^(n-k)."""
    if k == 0:
        return tuple(a)
    if len(a) <= k:
        return ()
    row = binom_row(len(a) - 1, k, F.p)
    if F.m == 1:
        p = F.p
        out = [a[n] * row[n] % p for n in range(k, len(a))]
    else:
        out = [F.mul(a[n], F.from_int(row[n])) for n in range(k, len(a))]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def to_str(F, a, var: str) -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = F.fmt(c)
        if not mono:
            terms.append(cs)
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return " + ".join(terms)


def frobenius_power(F, a, Q: int):
    """a^Q for Q a power of p, as a(x)^Q = sum a_i^Q x^(iQ)."""
    if not a:
        return ()
    out = [0] * ((len(a) - 1) * Q + 1)
    for i, c in enumerate(a):
        if c:
            out[i * Q] = F.pow(c, Q)
    return tuple(out)


def pth_root(F, a):
    """The polynomial r with r^p = a; a must be a polynomial in x^p."""
    p = F.p
    if any(c for i, c in enumerate(a) if i % p):
        raise ArithmeticError("not a p-th power")
    e = F.q // p
    return strip(F.pow(a[i], e) for i in range(0, len(a), p))


def squarefree_decomposition(F, a):
    """Pairs (s, mult) with monic a = prod s^mult, each s squarefree, pairwise coprime."""
    a = monic(F, a)
    out = []

    def walk(f, scale):
        if len(f) <= 1:
            return
        fp = hasse_derivative(F, f, 1)
        if not fp:
            walk(pth_root(F, f), scale * F.p)
            return
        c = gcd(F, f, fp)
        w = exact_div(F, f, c)
        i = 1
        while len(w) > 1:
            y = gcd(F, w, c)
            z = exact_div(F, w, y)
            if len(z) > 1:
                out.append((z, i * scale))
            i += 1
            w = y
            c = exact_div(F, c, y)
        if len(c) > 1:
            walk(pth_root(F, c), scale * F.p)

    walk(a, 1)
    return out


def radical(F, a):
    r = (1,)
    for s, _ in squarefree_decomposition(F, a):
        r = mul(F, r, s)
    return r


def cancel_parts(F, num, parts):
    """Cancel num / prod u^e over pairwise coprime squarefree monic u.

    Returns (num', [(u, k), ...]) with the quotient in lowest terms.  Only
    divisions by divisors of the u are performed.
    """
    pending = [(tuple(u), e) for u, e in parts]
    left = []
    while pending:
        u, k = pending.pop()
        if len(u) <= 1 or k == 0:
            continue
        r = ()
        while k:
            q, r = divmod_(F, num, u)
            if r:
                break
            num = q
            k -= 1
        if k == 0:
            continue
        g = gcd(F, u, r)
        if g == (1,):
            left.append((u, k))
        else:
            pending.append((g, k))
            pending.append((exact_div(F, u, g), k))
    return num, left


def strip_power(F, num, c, e: int):
    """cancel_parts for a single squarefree monic base c."""
    return cancel_parts(F, num, [(c, e)])


def exact_div_known(F, a, b):
    """a / b when b | a is known in advance; no remainder check.

    Solves a = q*b from the low end, so the cost is O(deg(q)^2) rather than
    O(deg(q) * deg(b)); worthwhile when b is much longer than q.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    z = 0
    while b[z] == 0:
        z += 1
    if z:
        a, b = a[z:], b[z:]
    dq = len(a) - len(b)
    if dq < 0:
        raise ArithmeticError("inexact polynomial division")
    q = [0] * (dq + 1)
    if F.m == 1:
        p = F.p
        inv = pow(b[0], p - 2, p)
        for i in range(dq + 1):
            acc = a[i]
            for j in range(1, min(i, len(b) - 1) + 1):
                acc -= b[j] * q[i - j]
            q[i] = acc * inv % p
    else:
        inv = F.inv(b[0])
        for i in range(dq + 1):
            acc = a[i]
            for j in range(1, min(i, len(b) - 1) + 1):
                acc = F.sub(acc, F.mul(b[j], q[i - j]))
            q[i] = F.mul(acc, inv)
    return strip(q)

