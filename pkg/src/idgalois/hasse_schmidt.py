"""The iterative derivation d* on K(t) with d^(k)(t^n) = C(n, k) t^(n-k).

Quotients are differentiated by lifting to a polynomial: for c = rad(den) and
Q a power of p above the requested order, c^Q is killed by every d^(k) with
0 < k < Q.  The Leibniz recurrence
``d^(k)(f) * b = d^(k)(a) - sum_{j=1..k} d^(k-j)(f) d^(j)(b)`` is kept as a
second, independent route (:func:`taylor_vector_leibniz`).
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from math import comb
from threading import Lock

from .field_arith import poly as P
from .field_arith.ratfunc import RatFunc
from .field_arith.series import TruncSeries

DEFAULT_N = 32
ALL_LEVELS = "all-levels"


class TruncationError(ValueError):
    """A derivative of order above the configured bound N was requested."""


class _Memo:
    """Bounded LRU map; results are pure so eviction never changes answers."""

    def __init__(self, size: int = 4096):
        self.size = size
        self.data: OrderedDict = OrderedDict()
        self.lock = Lock()

    def get(self, key):
        with self.lock:
            v = self.data.get(key)
            if v is not None:
                self.data.move_to_end(key)
            return v

    def put(self, key, value):
        with self.lock:
            self.data[key] = value
            self.data.move_to_end(key)
            if len(self.data) > self.size:
                self.data.popitem(last=False)


_memo = _Memo()


def _poly_taylor(F, a, n: int):
    return [P.hasse_derivative(F, a, k) for k in range(n + 1)]


def taylor_vector_leibniz(f: RatFunc, n: int) -> tuple:
    """(d^(0) f, ..., d^(n) f) by the Leibniz recurrence on numerators.

    With d^(k)(a/b) = P_k / b^(k+1) the recurrence reads
    P_k = a_k b^k - sum_{j=1..k} P_{k-j} b_j b^(j-1).
    """
    F, var = f.field, f.var
    a, b = f.num, f.den
    da = _poly_taylor(F, a, n)
    if b == (1,):
        return tuple(RatFunc(F, c, (1,), var, reduced=True) for c in da)
    db = _poly_taylor(F, b, n)
    bpow = [(1,)]
    for _ in range(n):
        bpow.append(P.mul(F, bpow[-1], b))
    nums = [a]
    for k in range(1, n + 1):
        acc = P.mul(F, da[k], bpow[k])
        for j in range(1, k + 1):
            if db[j]:
                acc = P.sub(F, acc, P.mul(F, nums[k - j], P.mul(F, db[j], bpow[j - 1])))
        nums.append(acc)
    return (f,) + tuple(RatFunc.over_power(F, nums[k], b, k + 1, var) for k in range(1, n + 1))


def _compute_taylor(f: RatFunc, n: int) -> tuple:
    # With c = rad(den) and Q a power of p above n, c^Q is a constant for every
    # d^(k) with k < Q, so d^(k)(num/den) = H_k(num * c^Q/den) / c^Q with H_k
    # the polynomial Hasse derivative.  Results agree with the recurrence in
    # taylor_vector_leibniz (cross-checked in the tests).
    F, var = f.field, f.var
    a, b = f.num, f.den
    if b == (1,):
        return tuple(RatFunc(F, c, (1,), var, reduced=True) for c in _poly_taylor(F, a, n))
    parts = P.squarefree_decomposition(F, b)
    top = max(e for _, e in parts)
    Q = F.p
    while Q <= n or Q < top:
        Q *= F.p
    c = (1,)
    for u, _ in parts:
        c = P.mul(F, c, u)
    lifted = P.mul(F, a, P.exact_div(F, P.frobenius_power(F, c, Q), b))
    # A pole of order e gains at most k under d^(k) (d^(k)(x-r)^-e is a
    # binomial multiple of (x-r)^(-e-k)), so h_k is divisible by u^(Q-e-k)
    # for each squarefree part u of multiplicity e.  Those powers are peeled
    # off first.  upow[i][j] = u_i^j covers both peeling and denominators.
    upow = []
    for u, e in parts:
        table = [(1,)]
        for _ in range(max(Q - e - 1, e + n)):
            table.append(P.mul(F, table[-1], u))
        upow.append(table)
    index = {u: i for i, (u, _) in enumerate(parts)}
    out = [f]
    for k in range(1, n + 1):
        h = P.hasse_derivative(F, lifted, k)
        if not h:
            out.append(RatFunc(F, (), (1,), var, reduced=True))
            continue
        for i, (u, e) in enumerate(parts):
            if Q - e - k > 0:
                h = P.exact_div_known(F, h, upow[i][Q - e - k])
        num, left = P.cancel_parts(F, h, [(u, min(e + k, Q)) for u, e in parts])
        den = (1,)
        for u, j in left:
            table = upow[index[u]] if u in index else ()
            den = P.mul(F, den, table[j] if j < len(table) else P.power(F, u, j))
        out.append(RatFunc(F, num, den, var, reduced=True))
    return tuple(out)


def taylor_vector(f: RatFunc, n: int) -> tuple:
    """(d^(0) f, ..., d^(n) f), memoized."""
    if n < 0:
        raise ValueError("negative order")
    vec = _memo.get(f)
    if vec is None or len(vec) <= n:
        vec = _compute_taylor(f, n)
        _memo.put(f, vec)
    return vec[: n + 1]


def hs_derive(f: RatFunc, k: int, N: int = DEFAULT_N) -> RatFunc:
    """d^(k)(f) for 0 <= k <= N."""
    if k < 0:
        raise ValueError("derivation order must be nonnegative")
    if k > N:
        raise TruncationError(f"order {k} exceeds truncation bound N={N}")
    if k == 0:
        return f
    if f.den == (1,):
        return RatFunc(f.field, P.hasse_derivative(f.field, f.num, k), (1,), f.var, reduced=True)
    return taylor_vector(f, k)[k]


def taylor_expand(f: RatFunc, N: int, bound: int = DEFAULT_N) -> TruncSeries:
    """theta(f) = sum_k d^(k)(f) T^k truncated at T^N."""
    if N > bound:
        raise TruncationError(f"order {N} exceeds truncation bound N={bound}")
    zero = RatFunc(f.field, (), (1,), f.var, reduced=True)
    return TruncSeries(taylor_vector(f, N), N, zero)


@dataclass(frozen=True)
class HSDerivation:
    """The family d^(k) on one rational function field, up to order N."""

    field: object
    N: int = DEFAULT_N
    var: str = "t"

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")

    def derive(self, f: RatFunc, k: int) -> RatFunc:
        return hs_derive(f, k, self.N)

    def taylor(self, f: RatFunc, n: int | None = None) -> TruncSeries:
        return taylor_expand(f, self.N if n is None else n, self.N)

    def level(self, f: RatFunc):
        return subfield_level(f)

    def t(self) -> RatFunc:
        return RatFunc.gen(self.field, self.var)


def derivative_vanishes(f: RatFunc, k: int) -> bool:
    """d^(k)(f) == 0, tested as d^(k)(a) b == a d^(k)(b).

    Only valid when d^(i)(f) = 0 for 0 < i < k (as in the level ladder, where
    k = p^j and f already lies in F_j); the Leibniz expansion then collapses.
    """
    F = f.field
    a, b = f.num, f.den
    lhs = P.mul(F, P.hasse_derivative(F, a, k), b)
    rhs = P.mul(F, a, P.hasse_derivative(F, b, k))
    return lhs == rhs


def subfield_level(f: RatFunc):
    """Largest l with f in F_l = K(t^(p^l)), or ``ALL_LEVELS`` for constants (and 0)."""
    if f.is_constant():
        return ALL_LEVELS
    p = f.field.p
    bound = f.degree_bound()
    j, q = 0, 1
    while q <= bound:
        if not derivative_vanishes(f, q):
            return j
        j += 1
        q *= p
    raise AssertionError(f"nonconstant {f} passed every level up to the degree bound")


def level_report(f: RatFunc) -> dict:
    lvl = subfield_level(f)
    return {"level": lvl, "zero": f.is_zero(), "constant": lvl == ALL_LEVELS}


def in_level(f: RatFunc, l: int) -> bool:
    lvl = subfield_level(f)
    return lvl == ALL_LEVELS or lvl >= l


# -- axiom verification -------------------------------------------------------


def _compose_power(f: RatFunc, k: int, times: int, N: int) -> RatFunc:
    for _ in range(times):
        f = hs_derive(f, k, N)
        if f.is_zero():
            break
    return f


def verify_axioms(sample, N: int) -> dict:
    """Check the four axioms and trivial p-curvature on ``sample``.

    Pairs are formed as (f_i, f_{i+1}) cyclically together with (f_i, f_i).
    Returns a report dict; ``holds`` is False with a ``witness`` on the first
    violation.
    """
    sample = list(sample)
    if not sample:
        return {"holds": True, "checked": {}, "witness": None}
    F = sample[0].field
    var = sample[0].var
    for f in sample:
        if f.field is not F or f.var != var:
            raise ValueError("samples must share one field")
    p = F.p
    counts = {"identity": 0, "additivity": 0, "leibniz": 0, "composition": 0, "p_curvature": 0}

    def fail(axiom, f, g=None, i=None, j=None, detail=""):
        return {
            "holds": False,
            "checked": counts,
            "witness": {
                "axiom": axiom,
                "f": str(f),
                "g": None if g is None else str(g),
                "i": i,
                "j": j,
                "detail": detail,
            },
        }

    # Sums of products are compared over a common denominator so the checks
    # need polynomial products only: d^(k)(f) = nf[k] / den(f)^(N+1).  The
    # Leibniz convolution over k is one packed product (Kronecker in T).
    def cleared(vec, M):
        return [P.mul(F, v.num, P.exact_div(F, M, v.den)) for v in vec]

    def packed(vec, width):
        out = []
        for v in vec:
            out.extend(v)
            out.extend([0] * (width - len(v)))
        return P.strip(out)

    def same(v, num, M):
        # v == num / M, cross-multiplied
        return P.mul(F, v.num, M) == P.mul(F, num, v.den)

    tv = {f: taylor_vector(f, N) for f in sample}
    dpow, ncache = {}, {}
    for f in sample:
        if f.den not in dpow:
            dpow[f.den] = P.power(F, f.den, N + 1)

    def numerators(f):
        if f not in ncache:
            ncache[f] = cleared(tv[f], dpow[f.den])
        return ncache[f]

    for idx, f in enumerate(sample):
        vf = tv[f]
        if vf[0] != f:
            return fail("identity", f, i=0)
        counts["identity"] += 1
        Mf = dpow[f.den]
        nf = numerators(f)
        partners = [sample[(idx + 1) % len(sample)], f]
        for g in partners:
            Mg = dpow[g.den]
            ng = numerators(g)
            M = P.mul(F, Mf, Mg)
            vs = taylor_vector(f + g, N)
            vp = taylor_vector(f * g, N)
            width = max(map(len, nf)) + max(map(len, ng))
            conv = P.mul(F, packed(nf, width), packed(ng, width))
            for k in range(N + 1):
                if not same(vs[k], P.add(F, P.mul(F, nf[k], Mg), P.mul(F, ng[k], Mf)), M):
                    return fail("additivity", f, g, i=k)
                counts["additivity"] += 1
                if not same(vp[k], P.strip(conv[k * width:(k + 1) * width]), M):
                    return fail("leibniz", f, g, i=k)
                counts["leibniz"] += 1
        for i in range(N + 1):
            inner = taylor_vector(vf[i], N - i)
            for j in range(N - i + 1):
                c = comb(i + j, i) % p
                rhs = vf[i + j] * c if c else None
                if (rhs is None and inner[j]) or (rhs is not None and inner[j] != rhs):
                    return fail("composition", f, i=i, j=j)
                counts["composition"] += 1
        for k in range(1, N // p + 1):
            if _compose_power(f, k, p, N):
                return fail("p_curvature", f, i=k, j=p)
            counts["p_curvature"] += 1
    return {"holds": True, "checked": counts, "witness": None}
