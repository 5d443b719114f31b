"""Galois-equivariant projective systems over a cyclic extension L/F.

chi sends the Galois generator eta to a constant matrix C; everything here
is phrased through C:

* equivariance      eta(D_l) = C^-1 D_l C
* twisted action    eta * g = C eta(g) C^-1
* cocycle           eta(Z) = Z C            (so C = Z^-1 eta(Z))
* descent           D~_l = Z_l D_l Z_{l+1}^-1 lies in GL_n(F_l)
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .extensions import ARTIN_SCHREIER, KUMMER, BaseField
from .field_arith.ratfunc import RatFunc
from .id_modules import ProjSystem, check_fundamental, ide_from_projective
from .matrices import Matrix, SingularMatrix, embed_matrix

H90_RETRIES = 64


class EquivarianceError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NonConstructiveInput(EquivarianceError):
    pass


# -- group containers ---------------------------------------------------------

def _is_diag(M):
    return all(x.is_zero() for i, j, x in M.entries() if i != j)


def _is_upper(M):
    return all(x.is_zero() for i, j, x in M.entries() if i > j)


PREDICATES = {
    "gl": lambda M: not M.det().is_zero(),
    "diagonal": lambda M: _is_diag(M) and not M.det().is_zero(),
    "diagonal-sl": lambda M: _is_diag(M) and M.det().is_one(),
    "upper": lambda M: _is_upper(M) and not M.det().is_zero(),
    "unitriangular": lambda M: _is_upper(M) and all(M[i, i].is_one() for i in range(M.n)),
}


def membership_predicate(group):
    """A tag from PREDICATES or a callable Matrix -> bool."""
    if callable(group):
        return group
    try:
        return PREDICATES[group]
    except KeyError:
        raise EquivarianceError(f"unknown group container {group!r}; expected one of {sorted(PREDICATES)}") from None


def u_matrix(ambient, u) -> Matrix:
    """The unipotent [[1, u], [0, 1]] for a coordinate u (RatFunc or expression)."""
    if isinstance(u, str):
        u = ambient.parse(u)
    elif isinstance(u, int):
        u = ambient.scalar(u)
    u = ambient.embed(u)
    return Matrix([[ambient.one(), u], [ambient.zero(), ambient.one()]])


def galois_matrix(ambient, j: int, M: Matrix) -> Matrix:
    return M.map(lambda x: ambient.galois_apply(j, x))


def matrix_in_level(ambient, M: Matrix, l: int):
    """First entry (i, j) of M outside level l, or None."""
    for i, j, x in M.entries():
        if not ambient.in_level(x, l):
            return (i, j)
    return None


# -- chi ----------------------------------------------------------------------

class ChiMap:
    """eta^j -> C^j for the cyclic Galois group of ``ambient``; C has constant entries."""

    def __init__(self, ambient, C: Matrix, container: str = "gl"):
        self.ambient = ambient
        C = embed_matrix(C, ambient)
        for i, j, x in C.entries():
            if not x.is_constant():
                raise EquivarianceError(f"chi(eta) must have constant entries; entry ({i},{j}) is {x}")
        if C.det().is_zero():
            raise EquivarianceError("chi(eta) is singular")
        self.C = C
        self.n = C.n
        self.order = ambient.order
        self.container = container
        self._powers = [Matrix.identity(ambient.field, self.n, ambient.var)]
        for _ in range(self.order):
            self._powers.append(self._powers[-1] * C)
        self._inv = C.inverse()
        if not self._powers[self.order].is_identity():
            raise EquivarianceError(f"chi is not a homomorphism: C^{self.order} != I")

    def matrix(self, j: int) -> Matrix:
        return self._powers[j % self.order]

    def inverse_matrix(self, j: int) -> Matrix:
        return self._powers[(-j) % self.order]

    def homomorphism_report(self) -> dict:
        """C_{i+j} = C_i C_j over the whole cyclic group."""
        for i in range(self.order):
            for j in range(self.order):
                if self.matrix(i + j) != self.matrix(i) * self.matrix(j):
                    return {"holds": False, "pair": [i, j]}
        return {"holds": True, "pair": None}

    def is_trivial(self) -> bool:
        return self.C.is_identity()

    def image_is_faithful(self) -> bool:
        return len({self.matrix(j) for j in range(self.order)}) == self.order


# -- systems ------------------------------------------------------------------

@dataclass
class EquivariantSystem:
    sys: ProjSystem
    chi: ChiMap
    group: object = "gl"
    predicate: object = field(init=False, repr=False)

    def __post_init__(self):
        if self.sys.ambient is not self.chi.ambient:
            raise EquivarianceError("system and chi live over different fields")
        if self.sys.n != self.chi.n:
            raise EquivarianceError(f"shape mismatch: system is {self.sys.n}x{self.sys.n}, chi is {self.chi.n}x{self.chi.n}")
        self.predicate = membership_predicate(self.group)
        for l, d in enumerate(self.sys.D):
            if not self.predicate(d):
                raise EquivarianceError(f"D_{l} is not in the declared group {self.group!r}", {"level": l})

    @property
    def ambient(self):
        return self.sys.ambient


def _first_difference(A: Matrix, B: Matrix):
    for i, j, x in A.entries():
        if x != B[i, j]:
            return [i, j], str(x), str(B[i, j])
    return None


def equivariance_defect(ambient, chi: ChiMap, D: Matrix, j: int = 1):
    """None if eta^j(D) = C^-j D C^j, else the first differing entry."""
    lhs = galois_matrix(ambient, j, D)
    rhs = chi.inverse_matrix(j) * D * chi.matrix(j)
    return _first_difference(lhs, rhs)


def check_equivariant(esys: EquivariantSystem) -> dict:
    """Per-level verdict on eta(D_l) = C^-1 D_l C; every power of eta is checked as well."""
    amb, chi = esys.ambient, esys.chi
    levels, failure = [], None
    for l, D in enumerate(esys.sys.D):
        bad = equivariance_defect(amb, chi, D, 1)
        ok = bad is None
        all_ok = all(equivariance_defect(amb, chi, D, j) is None for j in range(chi.order))
        if ok and not all_ok:
            raise AssertionError("generator equivariance did not propagate to the whole group")
        levels.append(ok)
        if not ok and failure is None:
            entry, lhs, rhs = bad
            failure = {"level": l, "entry": entry, "eta(D)": lhs, "C^-1 D C": rhs}
    return {"equivariant": all(levels), "levels": levels, "failure": failure}


def star_action(chi: ChiMap, j: int, g: Matrix) -> Matrix:
    """eta^j * g = C^j eta^j(g) C^-j."""
    amb = chi.ambient
    g = embed_matrix(g, amb)
    if g.n != chi.n:
        raise EquivarianceError("shape mismatch in star action")
    return chi.matrix(j) * galois_matrix(amb, j, g) * chi.inverse_matrix(j)


def form_membership(chi: ChiMap, g, l: int, group="gl") -> bool:
    """g in the twisted form at level l: level-l entries, in the container, *-invariant."""
    amb = chi.ambient
    if not isinstance(g, Matrix):
        g = u_matrix(amb, g)
    g = embed_matrix(g, amb)
    if matrix_in_level(amb, g, l) is not None:
        return False
    if not membership_predicate(group)(g):
        return False
    return all(star_action(chi, j, g) == g for j in range(1, chi.order))


# -- Hilbert 90 ---------------------------------------------------------------

def _random_entry(amb, rng, level: int, degree: int) -> RatFunc:
    F = amb.field
    step = amb.p**level
    coeffs = [0] * (degree * step + 1)
    for k in range(degree + 1):
        coeffs[k * step] = rng.randrange(F.q)
    return RatFunc.poly(F, coeffs, amb.var)


def hilbert90_solve(chi: ChiMap, seed=0, level: int = 0, retries: int = H90_RETRIES) -> Matrix:
    """Z in GL_n(L_level) with eta(Z) = Z C, from Z = sum_i eta^i(c) C^-i.

    Entries of the random c are polynomials in s^(p^level), so Z lies in the
    requested level.  Output is verified before it is returned.
    """
    amb = chi.ambient
    kind = getattr(amb, "kind", None)
    if kind not in (KUMMER, ARTIN_SCHREIER, "base"):
        raise NonConstructiveInput("Hilbert 90 is constructive here only for cyclic Galois groups; non-constructive input required")
    rng = random.Random(seed)
    n, order = chi.n, chi.order
    for attempt in range(retries):
        c = Matrix([[_random_entry(amb, rng, level, order) for _ in range(n)] for _ in range(n)])
        Z = None
        for i in range(order):
            term = galois_matrix(amb, i, c) * chi.inverse_matrix(i)
            Z = term if Z is None else Z + term
        if Z.det().is_zero():
            continue
        if galois_matrix(amb, 1, Z) != Z * chi.C:
            raise AssertionError("Hilbert 90 sum violates the cocycle equation")
        if matrix_in_level(amb, Z, level) is not None:
            raise AssertionError("Hilbert 90 output left the requested level")
        return Z
    raise EquivarianceError(f"no invertible Hilbert 90 solution in {retries} draws")


def hilbert90_sequence(chi: ChiMap, L: int, seed=0) -> list:
    """Z_0, ..., Z_{L+1} with Z_l in level l, each solving the cocycle equation."""
    rng = random.Random(seed)
    return [hilbert90_solve(chi, rng.randrange(2**32), level=l) for l in range(L + 2)]


def cocycle_holds(chi: ChiMap, Z: Matrix) -> bool:
    amb = chi.ambient
    Z = embed_matrix(Z, amb)
    return galois_matrix(amb, 1, Z) == Z * chi.C


# -- descent ------------------------------------------------------------------

def compose_solution(Z: list, esys: EquivariantSystem) -> ProjSystem:
    """D~_l = Z_l D_l Z_{l+1}^-1, verified to lie in GL_n(F_l), returned over F."""
    amb, chi, sys = esys.ambient, esys.chi, esys.sys
    rep = check_equivariant(esys)
    if not rep["equivariant"]:
        raise EquivarianceError("system is not equivariant", rep["failure"])
    L = sys.L
    if len(Z) != L + 2:
        raise EquivarianceError(f"need Z_0..Z_{L + 1} ({L + 2} matrices), got {len(Z)}")
    Z = [embed_matrix(z, amb) for z in Z]
    for l, z in enumerate(Z):
        if z.n != sys.n:
            raise EquivarianceError(f"Z_{l} has the wrong size")
        if z.det().is_zero():
            raise EquivarianceError(f"Z_{l} is singular", {"level": l})
        if not cocycle_holds(chi, z):
            raise EquivarianceError(f"Z_{l} violates eta(Z) = Z C", {"level": l})
        bad = matrix_in_level(amb, z, l)
        if bad is not None:
            raise EquivarianceError(f"entry {bad} of Z_{l} is not in level {l}", {"level": l, "entry": list(bad)})
    base = BaseField(amb.field, amb.N) if not isinstance(amb, BaseField) else amb
    out = []
    for l, D in enumerate(sys.D):
        Dt = Z[l] * D * Z[l + 1].inverse()
        for i, j, x in Dt.entries():
            if not amb.fixed_by(x) or not amb.in_level(x, l):
                raise AssertionError(f"descended D~_{l} entry ({i},{j}) = {x} is not in F_{l}")
        out.append(Dt.map(amb.to_base) if base is not amb else Dt)
    return ProjSystem(base, out)


def compose_fundamental(Z: list, Y: list) -> list:
    """Y~_l = Z_l Y_l."""
    return [z * y for z, y in zip(Z, Y)]


def hat_transform(Y: list, U: list, D: list | None = None) -> list:
    """U^_l = Y_l U_l Y_{l+1}^-1, after checking Y_{l+1} = D_l^-1 Y_l when D is given."""
    if len(Y) < len(U) + 1:
        raise EquivarianceError(f"need {len(U) + 1} matrices Y, got {len(Y)}")
    for l, y in enumerate(Y):
        if y.det().is_zero():
            raise EquivarianceError(f"Y_{l} is singular", {"level": l})
    if D is not None:
        if len(D) < len(U):
            raise EquivarianceError("fewer D_l than U_l")
        for l in range(len(U)):
            if Y[l + 1] != D[l].inverse() * Y[l]:
                raise EquivarianceError(f"Y_{l + 1} != D_{l}^-1 Y_{l}", {"level": l})
    return [Y[l] * U[l] * Y[l + 1].inverse() for l in range(len(U))]


def conjugate_membership(U: list, Ytilde: list, chi: ChiMap, group="unitriangular", start_level: int = 0) -> bool:
    """Every Y_l U_l Y_l^-1 passes form_membership at level l.

    ``Ytilde`` are the fundamental matrices on which the Galois generator acts
    by eta(Y) = C^-1 Y C; this is the conjugation under which equivariance of
    U_l becomes *-invariance.
    """
    return conjugate_membership_report(U, Ytilde, chi, group, start_level)["member"]


def conjugate_membership_report(U, Ytilde, chi, group="unitriangular", start_level: int = 0) -> dict:
    amb = chi.ambient
    if len(Ytilde) < len(U):
        raise EquivarianceError("fewer Y~_l than U_l")
    for k, (u, y) in enumerate(zip(U, Ytilde)):
        l = start_level + k
        if not isinstance(u, Matrix):
            u = u_matrix(amb, u)
        y = embed_matrix(y, amb)
        if y.det().is_zero():
            raise SingularMatrix(f"Y~_{l} is singular")
        if y.n != u.n:
            raise EquivarianceError(f"shape mismatch at level {l}")
        conj = y * embed_matrix(u, amb) * y.inverse()
        if not form_membership(chi, conj, l, group):
            return {"member": False, "level": l, "conjugate": conj.to_strings()}
    return {"member": True, "level": None, "conjugate": None}


def direct_equivariance(U: list, chi: ChiMap, group="unitriangular", start_level: int = 0) -> bool:
    """eta(U_l) = C^-1 U_l C with U_l in the container and level l (E = L case)."""
    amb = chi.ambient
    for k, u in enumerate(U):
        l = start_level + k
        if not isinstance(u, Matrix):
            u = u_matrix(amb, u)
        u = embed_matrix(u, amb)
        if matrix_in_level(amb, u, l) is not None or not membership_predicate(group)(u):
            return False
        if any(equivariance_defect(amb, chi, u, j) is not None for j in range(1, chi.order)):
            return False
    return True


# -- H-effectivity ------------------------------------------------------------

def h_effective_check(data: dict) -> dict:
    """Verdicts on the three H-effectivity conditions for a concrete scenario.

    data keys: chi (ChiMap), Z (list), D (list of Matrix), Y (optional; default
    Y_l = D_l ... D_L), group (container tag), alpha (optional {j: Matrix}).
    """
    out = {"conditions": {}, "holds": False}
    missing = [k for k in ("chi", "Z", "D") if k not in data]
    if missing:
        raise EquivarianceError(f"h_effective_check: missing data {missing}")
    chi, Z, D = data["chi"], data["Z"], data["D"]
    amb = chi.ambient
    group = data.get("group", "gl")
    Z = [embed_matrix(z, amb) for z in Z]
    D = [embed_matrix(d, amb) for d in D]

    # (1) eta^j -> Z_0^-1 eta^j(Z_0) is an isomorphism onto <C>
    c1 = {"holds": True, "witness": None}
    Z0inv = Z[0].inverse()
    images = []
    for j in range(chi.order):
        Cj = Z0inv * galois_matrix(amb, j, Z[0])
        images.append(Cj)
        if Cj != chi.matrix(j):
            c1 = {"holds": False, "witness": {"power": j, "got": Cj.to_strings()}}
            break
    if c1["holds"] and len(set(images)) != chi.order:
        c1 = {"holds": False, "witness": {"reason": "map is not injective"}}
    for l, z in enumerate(Z):
        if c1["holds"] and matrix_in_level(amb, z, l) is not None:
            c1 = {"holds": False, "witness": {"reason": f"Z_{l} not in level {l}"}}
    out["conditions"]["1"] = c1

    # (2) D_l in the group over L_l, equivariant, with fundamental matrices
    c2 = {"holds": True, "witness": None}
    pred = membership_predicate(group)
    for l, d in enumerate(D):
        if not pred(d):
            c2 = {"holds": False, "witness": {"level": l, "reason": f"D_{l} not in {group!r}"}}
            break
        bad = matrix_in_level(amb, d, l)
        if bad is not None:
            c2 = {"holds": False, "witness": {"level": l, "entry": list(bad), "reason": "level"}}
            break
        defect = equivariance_defect(amb, chi, d)
        if defect is not None:
            c2 = {"holds": False, "witness": {"level": l, "entry": defect[0], "eta(D)": defect[1], "C^-1 D C": defect[2]}}
            break
    Y = data.get("Y")
    if c2["holds"]:
        sys = ProjSystem(amb, D)
        if Y is None:
            # Y_l = D_l ... D_L solves the truncated system inside L
            Y, acc = [], Matrix.identity(amb.field, sys.n, amb.var)
            for d in reversed(D):
                acc = d * acc
                Y.append(acc)
            Y = list(reversed(Y)) + [Matrix.identity(amb.field, sys.n, amb.var)]
        Y = [embed_matrix(y, amb) for y in Y]
        for l in range(len(D)):
            if Y[l + 1] != D[l].inverse() * Y[l]:
                c2 = {"holds": False, "witness": {"level": l, "reason": "Y_{l+1} != D_l^-1 Y_l"}}
                break
        if c2["holds"]:
            fund = check_fundamental(Y[0], ide_from_projective(sys), amb)
            if not fund["holds"]:
                c2 = {"holds": False, "witness": {"fundamental": fund["failure"]}}
    out["conditions"]["2"] = c2

    # (3) Y~ = Z Y and alpha = iota_{Y~_0} on the supplied generators
    c3 = {"holds": c2["holds"], "witness": None if c2["holds"] else {"reason": "condition 2 failed"}}
    if c2["holds"]:
        Yt = compose_fundamental(Z, Y)
        alpha = data.get("alpha") or {1: chi.C}
        Yt0inv = Yt[0].inverse()
        for j, claim in alpha.items():
            got = Yt0inv * galois_matrix(amb, j, Yt[0])
            # eta(Y_0) = C^-1 Y_0 C gives Y~_0^-1 eta(Y~_0) = C
            if got != embed_matrix(claim, amb):
                c3 = {"holds": False, "witness": {"generator": j, "got": got.to_strings()}}
                break
    out["conditions"]["3"] = c3
    out["holds"] = all(c["holds"] for c in out["conditions"].values())
    return out
