"""ID-modules as projective systems D_0, ..., D_L and their IDE coefficients.

An ID-module of dimension n is encoded by transition matrices D_l whose
entries lie in the level F_l (or L_l over an extension).  The associated
system reads d^(p^l)(y) = A_l y with A_l = d^(p^l)(P_l) P_l^{-1},
P_l = D_0 ... D_l.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .hasse_schmidt import TruncationError
from .matrices import Matrix, SingularMatrix, embed_matrix


class ProjSystemError(ValueError):
    def __init__(self, msg, level=None, entry=None):
        super().__init__(msg)
        self.level = level
        self.entry = entry


def derive_matrix(M: Matrix, k: int, ambient) -> Matrix:
    return M.map(lambda x: ambient.derive(x, k))


def _matrix_in_level(M: Matrix, l: int, ambient):
    for i, j, x in M.entries():
        if not ambient.in_level(x, l):
            return (i, j)
    return None


@dataclass
class ProjSystem:
    """D_0..D_L over ``ambient`` (a BaseField or an Extension)."""

    ambient: object
    D: list
    validate: bool = True

    def __post_init__(self):
        self.D = [embed_matrix(d, self.ambient) for d in self.D]
        if not self.D:
            raise ProjSystemError("a projective system needs at least D_0")
        n = self.D[0].n
        if any(d.n != n for d in self.D):
            raise ProjSystemError("matrices of different sizes")
        if self.validate:
            rep = check_projective_system(self)
            if not rep["valid"]:
                f = rep["failure"]
                raise ProjSystemError(f["reason"], f["level"], f.get("entry"))

    @property
    def n(self) -> int:
        return self.D[0].n

    @property
    def L(self) -> int:
        return len(self.D) - 1

    def partial_products(self) -> list:
        out = []
        acc = None
        for d in self.D:
            acc = d if acc is None else acc * d
            out.append(acc)
        return out


@dataclass
class IDECoefficients:
    A: list
    ambient: object = field(repr=False, default=None)

    @property
    def L(self) -> int:
        return len(self.A) - 1


def check_projective_system(sys: ProjSystem) -> dict:
    """Invertibility and level membership of every D_l; first failure reported."""
    amb = sys.ambient
    for l, d in enumerate(sys.D):
        if d.det().is_zero():
            return {"valid": False, "failure": {"level": l, "entry": None, "reason": f"D_{l} is singular"}}
        bad = _matrix_in_level(d, l, amb)
        if bad is not None:
            i, j = bad
            return {
                "valid": False,
                "failure": {
                    "level": l,
                    "entry": [i, j],
                    "value": str(d[i, j]),
                    "reason": f"entry ({i},{j}) of D_{l} is not in level {l}",
                },
            }
    return {"valid": True, "failure": None, "levels": len(sys.D)}


def ide_from_projective(sys: ProjSystem) -> IDECoefficients:
    """A_l = d^(p^l)(P_l) P_l^{-1} entry-exactly."""
    amb = sys.ambient
    p = amb.p
    if p**sys.L > amb.N:
        raise TruncationError(f"p^L = {p ** sys.L} exceeds truncation bound N={amb.N}")
    A = []
    for l, Pl in enumerate(sys.partial_products()):
        A.append(derive_matrix(Pl, p**l, amb) * Pl.inverse())
    return IDECoefficients(A, amb)


def product_derivative_leibniz(D: list, k: int, ambient) -> Matrix:
    """d^(k)(D_0 ... D_l) expanded by the Leibniz rule over the factors.

    The factor D_j sits in level j, so only orders k_j divisible by p^j can
    contribute; the expansion runs over those compositions of k.
    """
    p = ambient.p
    l = len(D) - 1
    choices = []
    for j in range(l + 1):
        step = p**j
        choices.append(range(0, k + 1, step))
    total = None
    cache = {}
    for ks in iproduct(*choices):
        if sum(ks) != k:
            continue
        term = None
        for j, kj in enumerate(ks):
            key = (j, kj)
            if key not in cache:
                cache[key] = derive_matrix(D[j], kj, ambient) if kj else D[j]
            term = cache[key] if term is None else term * cache[key]
        total = term if total is None else total + term
    if total is None:
        return Matrix.zeros(D[0].field, D[0].n, D[0].var)
    return total


def verify_ide_identity(sys: ProjSystem, A: IDECoefficients | None = None) -> dict:
    """d^(p^l)(P_l) = A_l P_l with the left side from the factor-wise expansion."""
    if A is None:
        A = ide_from_projective(sys)
    amb = sys.ambient
    for l, Pl in enumerate(sys.partial_products()):
        lhs = product_derivative_leibniz(sys.D[: l + 1], amb.p**l, amb)
        if lhs != A.A[l] * Pl:
            return {"holds": False, "level": l}
    return {"holds": True, "level": None}


def check_fundamental(Y: Matrix, A: IDECoefficients, ambient) -> dict:
    """d^(p^l)(Y) = A_l Y for every l covered by A."""
    Y = embed_matrix(Y, ambient)
    if Y.det().is_zero():
        raise SingularMatrix("Y is singular")
    p = ambient.p
    per_level = []
    for l, Al in enumerate(A.A):
        if p**l > ambient.N:
            raise TruncationError(f"level {l} needs order {p ** l} > N={ambient.N}")
        lhs = derive_matrix(Y, p**l, ambient)
        rhs = embed_matrix(Al, ambient) * Y
        if lhs != rhs:
            for i, j, x in lhs.entries():
                if x != rhs[i, j]:
                    return {
                        "holds": False,
                        "levels": per_level + [False],
                        "failure": {"level": l, "entry": [i, j], "lhs": str(x), "rhs": str(rhs[i, j])},
                    }
        per_level.append(True)
    return {"holds": True, "levels": per_level, "failure": None}


def gauge_transform(sys: ProjSystem, C: list) -> ProjSystem:
    """D~_l = C_l D_l C_{l+1}^{-1}; C has length L+2, or L+1 with C_{L+1} = I."""
    amb = sys.ambient
    C = [embed_matrix(c, amb) for c in C]
    L = sys.L
    if len(C) == L + 1:
        C = C + [Matrix.identity(amb.field, sys.n, amb.var)]
    if len(C) != L + 2:
        raise ProjSystemError(f"gauge needs L+1 or L+2 matrices, got {len(C)}")
    for l, c in enumerate(C):
        if c.n != sys.n:
            raise ProjSystemError("gauge matrix of the wrong size", l)
        if c.det().is_zero():
            raise ProjSystemError(f"C_{l} is singular", l)
        bad = _matrix_in_level(c, min(l, L + 1), amb)
        if bad is not None:
            raise ProjSystemError(f"entry {bad} of C_{l} is not in level {l}", l, list(bad))
    D = [C[l] * sys.D[l] * C[l + 1].inverse() for l in range(L + 1)]
    return ProjSystem(amb, D)


def pv_equivalent(U: list, U2: list, L: int, member) -> bool:
    """(U_0...U_l)^{-1} (U'_0...U'_l) passes ``member(g, l + 1)`` for all l <= L."""
    return pv_equivalence_report(U, U2, L, member)["equivalent"]


def pv_equivalence_report(U: list, U2: list, L: int, member) -> dict:
    if len(U) < L + 1 or len(U2) < L + 1:
        raise ValueError(f"sequences shorter than L+1 = {L + 1}")
    acc1 = acc2 = None
    for l in range(L + 1):
        if U[l].n != U2[l].n:
            raise ValueError(f"shape mismatch at level {l}")
        acc1 = U[l] if acc1 is None else acc1 * U[l]
        acc2 = U2[l] if acc2 is None else acc2 * U2[l]
        g = acc1.inverse() * acc2
        try:
            ok = member(g, l + 1)
        except Exception as exc:  # propagate with the level attached
            raise ProjSystemError(f"membership predicate failed at level {l}: {exc}", l) from exc
        if not ok:
            return {"equivalent": False, "level": l, "witness": g.to_strings()}
    return {"equivalent": True, "level": None, "witness": None}
