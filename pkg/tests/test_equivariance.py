import random
from pathlib import Path

import pytest

from idgalois import equivariance as eqv
from idgalois.cli import load_system
from idgalois.extensions import ARTIN_SCHREIER, KUMMER, BaseField, build_extension
from idgalois.field_arith import GF, RatFunc
from idgalois.id_modules import ProjSystem
from idgalois.matrices import Matrix

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def kummer(C, p=3, m=2, N=9):
    E = build_extension(KUMMER, GF(p), N=N, m=m)
    return E, eqv.ChiMap(E, Matrix([[E.scalar(x) for x in row] for row in C]))


def diag(E, a, b):
    return Matrix([[a, E.zero()], [E.zero(), b]])


def torus():
    d, F, amb, sys = load_system(SCENARIOS / "torus.json")
    chi = eqv.ChiMap(amb, Matrix([[amb.scalar(x) for x in row] for row in d["chi"]]))
    Z = [Matrix([[amb.parse(x) for x in row] for row in z]) for z in d["Z"]]
    return amb, chi, sys, Z, d["group"]


def test_chi_map():
    E, chi = kummer([[0, 1], [1, 0]])
    assert chi.homomorphism_report()["holds"]
    assert chi.image_is_faithful() and not chi.is_trivial()
    assert chi.matrix(2).is_identity() and chi.inverse_matrix(1) == chi.C
    _, triv = kummer([[1, 0], [0, 1]])
    assert triv.is_trivial() and not triv.image_is_faithful()
    with pytest.raises(eqv.EquivarianceError):
        kummer([[1, 1], [0, 1]])  # order 3, not 2
    with pytest.raises(eqv.EquivarianceError):
        kummer([[1, 1], [1, 1]])
    with pytest.raises(eqv.EquivarianceError):
        eqv.ChiMap(E, Matrix([[E.gen(), E.zero()], [E.zero(), E.one()]]))


def test_star_action_is_a_group_action():
    E, chi = kummer([[0, 1], [1, 0]], p=5, m=4, N=5)
    assert chi.order == 4
    rng = random.Random(0)
    s = E.gen()
    for _ in range(5):
        g = Matrix([[s**rng.randint(0, 3) + rng.randint(0, 4) for _ in range(2)] for _ in range(2)])
        h = Matrix([[s**rng.randint(0, 3) * rng.randint(1, 4) for _ in range(2)] for _ in range(2)])
        for i in range(4):
            assert eqv.star_action(chi, i, g * h) == eqv.star_action(chi, i, g) * eqv.star_action(chi, i, h)
            for j in range(4):
                assert eqv.star_action(chi, i, eqv.star_action(chi, j, g)) == eqv.star_action(chi, i + j, g)
        assert eqv.star_action(chi, 0, g) == g


def test_form_membership_examples():
    E, chi = kummer([[1, 0], [0, -1]])
    s = E.gen()
    assert eqv.form_membership(chi, s, 0)
    assert not eqv.form_membership(chi, 1, 0)
    assert eqv.form_membership(chi, 0, 0)
    assert eqv.form_membership(chi, "s^3", 1)
    assert not eqv.form_membership(chi, s, 1)
    assert not eqv.form_membership(chi, diag(E, s, E.one()), 0, "unitriangular")
    with pytest.raises(eqv.EquivarianceError):
        eqv.form_membership(chi, s, 0, "orthogonal")


def test_hilbert90_examples():
    E, chi = kummer([[0, 1], [1, 0]])
    Z = eqv.hilbert90_solve(chi, seed=3)
    assert eqv.cocycle_holds(chi, Z) and not Z.det().is_zero()
    assert Z.inverse() * eqv.galois_matrix(E, 1, Z) == chi.C
    Zs = eqv.hilbert90_sequence(chi, 1, seed=5)
    assert len(Zs) == 3
    for l, z in enumerate(Zs):
        assert eqv.cocycle_holds(chi, z) and eqv.matrix_in_level(E, z, l) is None
    A = build_extension(ARTIN_SCHREIER, GF(2), N=8)
    chi2 = eqv.ChiMap(A, Matrix([[A.scalar(x) for x in row] for row in [[0, 1], [1, 0]]]))
    assert eqv.cocycle_holds(chi2, eqv.hilbert90_solve(chi2, seed=1))


def test_hilbert90_non_constructive():
    class Opaque:
        kind = "non-cyclic"

    chi = type("Chi", (), {"ambient": Opaque()})()
    with pytest.raises(eqv.NonConstructiveInput):
        eqv.hilbert90_solve(chi)


def test_compose_with_trivial_chi():
    F = GF(3)
    amb = BaseField(F, 9)
    t = RatFunc.gen(F)
    ident = Matrix.identity(F, 2)
    chi = eqv.ChiMap(amb, ident)
    sys = ProjSystem(amb, [diag(amb, t, t.inverse()), diag(amb, t**3, t**-3)])
    es = eqv.EquivariantSystem(sys, chi, "diagonal-sl")
    assert eqv.compose_solution([ident] * 3, es).D == sys.D


def test_torus_descent():
    amb, chi, sys, Z, group = torus()
    es = eqv.EquivariantSystem(sys, chi, group)
    out = eqv.compose_solution(Z, es)
    for l, (Dt, D) in enumerate(zip(out.D, sys.D)):
        again = Z[l] * D * Z[l + 1].inverse()
        assert all(amb.embed(x) == again[i, j] for i, j, x in Dt.entries())
    with pytest.raises(eqv.EquivarianceError):
        eqv.compose_solution(Z[:1], es)
    with pytest.raises(eqv.EquivarianceError) as exc:
        eqv.compose_solution([Z[0], Z[0]], es)
    assert exc.value.witness["level"] == 1
    with pytest.raises(eqv.EquivarianceError):
        eqv.EquivariantSystem(sys, chi, "unitriangular")


def test_hat_transform_examples():
    E, _ = kummer([[1, 0], [0, 1]])
    s = E.gen()
    I = Matrix.identity(E.field, 2, "s")
    U = [eqv.u_matrix(E, s), eqv.u_matrix(E, s**3)]
    assert eqv.hat_transform([I] * 3, U) == U
    D = [diag(E, s, s.inverse()), diag(E, s**3, s**-3)]
    Y = [D[0] * D[1], D[1], I]
    assert eqv.hat_transform(Y, [I, I], D) == [D[0], D[1]]
    with pytest.raises(eqv.EquivarianceError):
        eqv.hat_transform([I, I, I], [I, I], [D[0], D[0]])
    with pytest.raises(eqv.EquivarianceError):
        eqv.hat_transform([I], U)


def test_hat_scenario_two_by_two():
    # U^_l = Y_l U_l Y_{l+1}^-1 is unitriangular exactly when Y_l U_l Y_l^-1 is
    E, chi = kummer([[1, 0], [0, -1]])
    s = E.gen()
    D = [diag(E, s**2, E.one()), Matrix.identity(E.field, 2, "s")]
    Y = [D[0] * D[1], D[1], Matrix.identity(E.field, 2, "s")]
    U = [eqv.u_matrix(E, s), eqv.u_matrix(E, E.zero())]
    hat = eqv.hat_transform(Y, U, D)
    assert hat[0] == Y[0] * U[0] * Y[0].inverse() * D[0]
    assert eqv.conjugate_membership(U[:1], Y[:1], chi)


def test_conjugate_membership_report():
    E, chi = kummer([[1, 0], [0, -1]])
    I = Matrix.identity(E.field, 2, "s")
    rep = eqv.conjugate_membership_report([1], [I], chi)
    assert not rep["member"] and rep["level"] == 0 and rep["conjugate"]
    assert eqv.conjugate_membership(["s"], [I], chi)
    with pytest.raises(eqv.EquivarianceError):
        eqv.conjugate_membership([1, 1], [I], chi)


def test_h_effective_torus():
    amb, chi, sys, Z, group = torus()
    out = eqv.h_effective_check({"chi": chi, "Z": Z, "D": sys.D, "group": group})
    assert out["holds"], out
    assert all(c["holds"] for c in out["conditions"].values())


def test_h_effective_perturbed():
    amb, chi, sys, Z, group = torus()
    s = amb.gen()
    bad = [diag(amb, s, s.inverse())]
    out = eqv.h_effective_check({"chi": chi, "Z": Z, "D": bad, "group": group})
    assert not out["holds"]
    assert out["conditions"]["1"]["holds"]
    assert not out["conditions"]["2"]["holds"] and out["conditions"]["2"]["witness"]["level"] == 0
    assert not out["conditions"]["3"]["holds"]
    out = eqv.h_effective_check({"chi": chi, "Z": [Z[0], Z[0]], "D": sys.D, "group": group})
    assert not out["conditions"]["1"]["holds"]
    with pytest.raises(eqv.EquivarianceError):
        eqv.h_effective_check({"chi": chi, "D": sys.D})


def test_h_effective_trivial():
    amb, chi = kummer([[1, 0], [0, 1]])
    I = Matrix.identity(amb.field, 2, "s")
    out = eqv.h_effective_check({"chi": chi, "Z": [I, I], "D": [I], "group": "gl"})
    # the identity chi is not injective on a group of order 2
    assert not out["conditions"]["1"]["holds"]
    assert out["conditions"]["2"]["holds"] and out["conditions"]["3"]["holds"]
