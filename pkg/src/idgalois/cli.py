"""idgalois command line: every module operation behind one subcommand.

Exit codes: 0 the property holds, 1 it fails (a witness is printed),
2 bad input.  ``--json`` switches to the structured report.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import decomposer as dec
from . import equivariance as eqv
from .extensions import ExtensionError, parse_extension
from .field_arith.gf import FieldError, parse_field
from .field_arith.parser import ParseError, parse_expr
from .finite_groups import (
    FiniteGroup,
    GroupError,
    GroupHom,
    action_from_generators,
    catalogue_group,
    fibre_product,
    find_isomorphism,
    frattini_criterion,
    frattini_subgroup,
    homomorphisms,
    is_frattini_epi,
    semidirect_product,
    supplements,
    trivial_action,
    type_mu_epi,
)
from .hasse_schmidt import DEFAULT_N, TruncationError, subfield_level, taylor_expand, verify_axioms
from .id_modules import (
    IDECoefficients,
    ProjSystem,
    ProjSystemError,
    check_fundamental,
    check_projective_system,
    gauge_transform,
    ide_from_projective,
    pv_equivalence_report,
    verify_ide_identity,
)
from .matrices import Matrix, SingularMatrix, parse_matrix
from .reports import Report
from .sampling import random_ratfunc

COMMANDS = (
    "derive", "taylor", "axioms", "ide", "check-fsm", "gauge", "equivariance", "compose", "hilbert90",
    "form-member", "pv-equal", "frattini", "fibre", "semidirect", "type-mu", "decompose", "plan",
)

INPUT_ERRORS = (
    ParseError, FieldError, ExtensionError, GroupError, dec.DescriptorError, ProjSystemError,
    TruncationError, SingularMatrix, json.JSONDecodeError, OSError, KeyError, TypeError, ValueError,
)


class InputError(ValueError):
    pass


# -- loaders ------------------------------------------------------------------

def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def field_note(F) -> str:
    return f"algebraically closed constants approximated by {F.designator()}"


def load_ambient(field_text: str, ext_text: str | None, N: int):
    F = parse_field(field_text)
    return F, parse_extension(ext_text or "base", F, N)


def load_matrices(rows_list, amb) -> list:
    return [parse_matrix(rows, amb) for rows in rows_list]


def load_system(path, validate: bool = False):
    """System file: field, optional extension/N, D (list of row-major matrices), optional chi/group/Z/Y."""
    d = load_json(path)
    for k in ("field", "D"):
        if k not in d:
            raise InputError(f"system file lacks {k!r}")
    F, amb = load_ambient(d["field"], d.get("extension"), int(d.get("N", DEFAULT_N)))
    D = load_matrices(d["D"], amb)
    if "n" in d and any(m.n != d["n"] for m in D):
        raise InputError("matrix size differs from the declared n")
    if "L" in d and len(D) != d["L"] + 1:
        raise InputError(f"declared L={d['L']} but {len(D)} matrices given")
    return d, F, amb, ProjSystem(amb, D, validate=validate)


def load_group(spec: str) -> FiniteGroup:
    """``catalogue:NAME``, ``cycles:(1 2),(1 2 3)`` or a JSON file with generators/table."""
    if spec.startswith("catalogue:"):
        return catalogue_group(spec.split(":", 1)[1])
    if spec.startswith("cycles:"):
        gens = [g.strip() for g in spec.split(":", 1)[1].split(";") if g.strip()]
        return FiniteGroup.from_cycles(gens, name=spec)
    d = load_json(spec)
    if "table" in d:
        return FiniteGroup(d["table"], d.get("labels"), d.get("name", "G"))
    if "generators" in d:
        return FiniteGroup.from_cycles(d["generators"], name=d.get("name", "G"))
    raise InputError(f"group file {spec} needs 'generators' or 'table'")


def parse_index_list(text: str) -> list:
    return [int(x) for x in text.replace(",", " ").split()]


def pick_hom(G, H, images_text: str | None) -> GroupHom:
    if images_text:
        return GroupHom(G, H, parse_index_list(images_text))
    homs = homomorphisms(G, H, surjective_only=True)
    if not homs:
        raise InputError(f"no surjection {G.name} -> {H.name}")
    return homs[0]


def matrix_strings(M: Matrix):
    return M.to_strings()


# -- handlers -----------------------------------------------------------------

def cmd_derive(a, rep):
    F, amb = load_ambient(a.field, a.ext, a.N)
    f = amb.parse(a.expr)
    val = amb.derive(f, a.k)
    rep.result = {"expr": str(f), "k": a.k, "derivative": str(val)}
    if a.ext is None:
        rep.result["level"] = subfield_level(val)
    rep.notes.append(field_note(F))
    return rep.settle()


def cmd_taylor(a, rep):
    F, amb = load_ambient(a.field, a.ext, a.N)
    f = amb.parse(a.expr)
    order = a.order if a.order is not None else min(a.N, 8)
    if a.ext is None:
        coeffs = list(taylor_expand(f, order, a.N))
    else:
        coeffs = [amb.derive(f, k) for k in range(order + 1)]
    rep.result = {"expr": str(f), "coefficients": [str(c) for c in coeffs]}
    rep.add("theta_0 = f", coeffs[0] == f, "taylor/identity")
    rep.notes.append(field_note(F))
    return rep.settle()


def cmd_axioms(a, rep):
    F = parse_field(a.field)
    if a.expr:
        sample = [parse_expr(e, F) for e in a.expr]
    else:
        rng = random.Random(a.seed)
        sample = [random_ratfunc(F, rng, a.max_deg) for _ in range(a.count)]
    out = verify_axioms(sample, a.N)
    rep.add("iterative-derivation axioms and trivial p-curvature", out["holds"], "hasse-schmidt/axioms", None)
    rep.result = {"samples": len(sample), "N": a.N, "checked": out["checked"]}
    rep.witness = out["witness"]
    rep.notes.append(field_note(F))
    return rep.settle()


def _system_validity(rep, sys):
    v = check_projective_system(sys)
    rep.add("projective system valid", v["valid"], "id-module/levels")
    if not v["valid"]:
        rep.witness = v["failure"]
    return v["valid"]


def cmd_ide(a, rep):
    d, F, amb, sys = load_system(a.system)
    rep.notes.append(field_note(F))
    if not _system_validity(rep, sys):
        return rep.settle()
    A = ide_from_projective(sys)
    rep.result = {"A": [matrix_strings(m) for m in A.A]}
    ident = verify_ide_identity(sys, A)
    rep.add("d^(p^l)(P_l) = A_l P_l (Leibniz path)", ident["holds"], "id-module/ide-identity")
    if not ident["holds"]:
        rep.witness = ident
    return rep.settle()


def cmd_check_fsm(a, rep):
    """Y against A_l from the system's D_l, or against A_l given directly in the file."""
    d = load_json(a.system)
    if "A" in d:
        F, amb = load_ambient(d["field"], d.get("extension"), int(d.get("N", DEFAULT_N)))
        A = IDECoefficients(load_matrices(d["A"], amb), amb)
    else:
        d, F, amb, sys = load_system(a.system)
        if not _system_validity(rep, sys):
            rep.notes.append(field_note(F))
            return rep.settle()
        A = ide_from_projective(sys)
    rep.notes.append(field_note(F))
    if a.Y:
        Y = parse_matrix(json.loads(a.Y) if a.Y.lstrip().startswith("[") else load_json(a.Y), amb)
    elif "Y" in d:
        Y = parse_matrix(d["Y"], amb)
    else:
        raise InputError("check-fsm needs a candidate Y (--Y or 'Y' in the system file)")
    out = check_fundamental(Y, A, amb)
    rep.add("d^(p^l)(Y) = A_l Y", out["holds"], "id-module/fundamental-matrix", out["levels"])
    rep.witness = out["failure"]
    return rep.settle()


def cmd_gauge(a, rep):
    d, F, amb, sys = load_system(a.system)
    rep.notes.append(field_note(F))
    if not _system_validity(rep, sys):
        return rep.settle()
    C = load_matrices(load_json(a.gauge) if not a.gauge.lstrip().startswith("[") else json.loads(a.gauge), amb)
    try:
        out = gauge_transform(sys, C)
    except ProjSystemError as exc:
        rep.add("gauge matrices admissible", False, "id-module/gauge", str(exc))
        rep.witness = {"level": exc.level, "entry": exc.entry}
        return rep.settle()
    rep.add("gauge matrices admissible", True, "id-module/gauge")
    rep.add("transformed system valid", check_projective_system(out)["valid"], "id-module/levels")
    rep.result = {"D": [matrix_strings(m) for m in out.D]}
    return rep.settle()


def _equivariant_system(d, amb, sys):
    if "chi" not in d:
        raise InputError("system file lacks 'chi' (the matrix chi(eta))")
    chi = eqv.ChiMap(amb, parse_matrix(d["chi"], amb), d.get("container", "gl"))
    return chi, eqv.EquivariantSystem(sys, chi, d.get("group", "gl"))


def cmd_equivariance(a, rep):
    d, F, amb, sys = load_system(a.system)
    rep.notes.append(field_note(F))
    if not _system_validity(rep, sys):
        return rep.settle()
    chi, es = _equivariant_system(d, amb, sys)
    out = eqv.check_equivariant(es)
    rep.add("eta(D_l) = C^-1 D_l C", out["equivariant"], "equivariance/descent-condition", out["levels"])
    rep.witness = out["failure"]
    return rep.settle()


def cmd_compose(a, rep):
    d, F, amb, sys = load_system(a.system)
    rep.notes.append(field_note(F))
    if not _system_validity(rep, sys):
        return rep.settle()
    chi, es = _equivariant_system(d, amb, sys)
    if a.Z:
        Zrows = load_json(a.Z)
    elif "Z" in d:
        Zrows = d["Z"]
    else:
        Zrows = None
    Z = load_matrices(Zrows, amb) if Zrows else eqv.hilbert90_sequence(chi, sys.L, a.seed)
    try:
        out = eqv.compose_solution(Z, es)
    except eqv.EquivarianceError as exc:
        rep.add("composed system descends to F", False, "equivariance/descent", str(exc))
        rep.witness = exc.witness
        return rep.settle()
    rep.add("composed system descends to F", True, "equivariance/descent")
    rep.add("descended system valid over F", check_projective_system(out)["valid"], "id-module/levels")
    rep.result = {"Z": [matrix_strings(z) for z in Z], "D_tilde": [matrix_strings(m) for m in out.D]}
    return rep.settle()


def _chi_from_args(a):
    F, amb = load_ambient(a.field, a.ext, a.N)
    chi = eqv.ChiMap(amb, parse_matrix(json.loads(a.chi), amb))
    return F, amb, chi


def cmd_hilbert90(a, rep):
    F, amb, chi = _chi_from_args(a)
    Z = eqv.hilbert90_solve(chi, a.seed, a.level)
    rep.add("eta(Z) = Z C", eqv.cocycle_holds(chi, Z), "equivariance/hilbert-90")
    rep.add(f"Z in level {a.level}", eqv.matrix_in_level(amb, Z, a.level) is None, "id-module/levels")
    rep.result = {"Z": matrix_strings(Z), "seed": a.seed}
    rep.notes.append(field_note(F))
    return rep.settle()


def cmd_form_member(a, rep):
    F, amb, chi = _chi_from_args(a)
    if a.u is not None:
        g = eqv.u_matrix(amb, a.u)
    elif a.matrix:
        g = parse_matrix(json.loads(a.matrix), amb)
    else:
        raise InputError("form-member needs --u or --matrix")
    ok = eqv.form_membership(chi, g, a.level, a.group)
    rep.add(f"twisted-form member at level {a.level}", ok, "equivariance/twisted-form")
    if not ok:
        rep.witness = {"g": matrix_strings(g), "eta*g": matrix_strings(eqv.star_action(chi, 1, g))}
    rep.notes.append(field_note(F))
    return rep.settle()


def cmd_pv_equal(a, rep):
    d = load_json(a.pair)
    F, amb = load_ambient(d["field"], d.get("extension"), int(d.get("N", DEFAULT_N)))
    U, U2 = load_matrices(d["U"], amb), load_matrices(d["U2"], amb)
    L = d.get("L", len(U) - 1)
    group = d.get("group", "gl")
    if "chi" in d:
        chi = eqv.ChiMap(amb, parse_matrix(d["chi"], amb))
        member = lambda g, l: eqv.form_membership(chi, g, l, group)  # noqa: E731
    else:
        pred = eqv.membership_predicate(group)
        member = lambda g, l: eqv.matrix_in_level(amb, g, l) is None and pred(g)  # noqa: E731
    out = pv_equivalence_report(U, U2, L, member)
    rep.add("(U_0..U_l)^-1 (U'_0..U'_l) in the form at level l+1", out["equivalent"], "id-module/pv-equivalence")
    if not out["equivalent"]:
        rep.witness = {k: v for k, v in out.items() if k != "equivalent"}
    rep.notes.append(field_note(F))
    return rep.settle()


def _frattini_one(phi):
    crit, brute = frattini_criterion(phi), is_frattini_epi(phi)
    return crit, brute


def cmd_frattini(a, rep):
    G, H = load_group(a.group), load_group(a.onto)
    phis = homomorphisms(G, H, surjective_only=True) if a.all else [pick_hom(G, H, a.map)]
    if not phis:
        raise InputError(f"no surjection {G.name} -> {H.name}")
    Phi = frattini_subgroup(G)
    rows = []
    for phi in phis:
        crit, brute = _frattini_one(phi)
        rows.append((phi, crit, brute))
    agree = all(c == b for _, c, b in rows)
    rep.add("kernel in Phi(G) <=> no proper supplement", agree, "finite-groups/frattini-equivalence")
    if not a.all:
        phi, crit, brute = rows[0]
        rep.add("Frattini epimorphism", brute, "finite-groups/frattini")
        if not brute:
            proper = [sorted(U) for U in supplements(G, phi.kernel()) if len(U) < G.n]
            rep.witness = {"proper_supplement": proper[0], "kernel": sorted(phi.kernel())}
        rep.result = {"criterion": crit, "brute_force": brute, "kernel": sorted(phi.kernel()), "frattini_subgroup": sorted(Phi)}
    else:
        rep.result = {"surjections": len(rows), "frattini": sum(b for _, _, b in rows), "frattini_subgroup": sorted(Phi)}
        bad = [r for r in rows if r[1] != r[2]]
        if bad:
            rep.witness = {"images": bad[0][0].images}
    return rep.settle()


def cmd_fibre(a, rep):
    A, B, C = load_group(a.a), load_group(a.b), load_group(a.c)
    phi1, phi2 = pick_hom(A, C, a.map1), pick_hom(B, C, a.map2)
    P = fibre_product(phi1, phi2)
    expect = A.n * B.n // C.n if phi1.is_surjective() and phi2.is_surjective() else None
    rep.result = {"order": P.group.n, "expected": expect}
    if expect is not None:
        rep.add("|A x_C B| = |A||B|/|C|", P.group.n == expect, "finite-groups/fibre-product-order")
    rep.add("pr_1, pr_2 commute over C", all(phi1(P.pr1(x)) == phi2(P.pr2(x)) for x in range(P.group.n)), "finite-groups/fibre-product")
    m = P.mediator(P.pr1, P.pr2)
    rep.add("mediator of (pr_1, pr_2) is the identity", all(m(x) == x for x in range(P.group.n)), "finite-groups/universal-property")
    return rep.settle()


def cmd_semidirect(a, rep):
    N, H = load_group(a.n), load_group(a.h)
    if a.action:
        raw = json.loads(a.action)
        action = action_from_generators(N, H, {int(k): v for k, v in raw.items()})
    else:
        action = trivial_action(N, H)
    S = semidirect_product(N, H, action)
    G = S.group
    rep.result = {"order": G.n, "abelian": G.is_abelian()}
    rep.add("|N x| H| = |N||H|", G.n == N.n * H.n, "finite-groups/semidirect")
    rep.add("projection o section = id_H", all(S.projection(S.section(h)) == h for h in range(H.n)), "finite-groups/semidirect")
    if a.expect:
        E = load_group(a.expect)
        iso = find_isomorphism(G, E)
        rep.add(f"isomorphic to {E.name}", iso is not None, "finite-groups/isomorphism")
    return rep.settle()


def cmd_type_mu(a, rep):
    G = load_group(a.group)
    N = frozenset(parse_index_list(a.normal)) if a.normal else frozenset(range(G.n))
    H = frozenset(parse_index_list(a.sub)) if a.sub else frozenset(range(G.n))
    try:
        out = type_mu_epi(G, N, H)
    except AssertionError as exc:
        rep.add("kernel = {(g^-1, g) : g in N n H}", False, "finite-groups/type-mu", str(exc))
        return rep.settle()
    rep.add("kernel = {(g^-1, g) : g in N n H}", True, "finite-groups/type-mu")
    rep.add("mu surjective", out.mu.is_surjective(), "finite-groups/type-mu")
    rep.result = {"semidirect_order": out.semidirect.group.n, "kernel_order": len(out.kernel)}
    return rep.settle()


def _tree_report(a, rep, with_plan: bool, with_tree: bool):
    beta = dec.epi_from_dict(load_json(a.descriptor))
    tree = dec.decompose(beta)
    classes = sorted(tree.leaf_classes())
    rep.add("every leaf in a terminal class", all(c in dec.CLASS_NAMES for c in classes), "decomposer/classes")
    rep.add("recomposition reproduces the root", dec.recomposition_holds(tree), "decomposer/recomposition")
    rep.add("measure decreases at every step", all(c < p for _, p, c in tree.measures), "decomposer/termination")
    rep.result = {"leaf_classes": classes}
    if with_tree:
        rep.result["tree"] = tree.to_dict()
    if with_plan:
        rep.result["plan"] = dec.build_solution_plan(tree).to_dict()
    rep.notes.extend(tree.warnings)
    return rep.settle()


def cmd_decompose(a, rep):
    return _tree_report(a, rep, a.plan, True)


def cmd_plan(a, rep):
    return _tree_report(a, rep, True, a.tree)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the structured report")
    p = argparse.ArgumentParser(prog="idgalois", description="Exact iterative-derivation Galois computations.")
    sub = p.add_subparsers(dest="command", metavar="command")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def field_args(sp, ext=True):
        sp.add_argument("--field", required=True, help='e.g. "GF(3)" or "GF(2^2; modulus=x^2+x+1)"')
        if ext:
            sp.add_argument("--ext", help='"kummer(m=2)", "artin-schreier" or "base"')
        sp.add_argument("--N", type=int, default=DEFAULT_N, help="truncation bound")

    sp = add("derive", cmd_derive, "d^(k) of an expression")
    field_args(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--k", type=int, required=True)

    sp = add("taylor", cmd_taylor, "Taylor coefficients d^(k)(f), k <= order")
    field_args(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--order", type=int)

    sp = add("axioms", cmd_axioms, "verify the derivation axioms on a sample")
    sp.add_argument("--field", required=True)
    sp.add_argument("--N", type=int, default=16)
    sp.add_argument("--expr", action="append", help="sample element (repeatable); random if omitted")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-deg", dest="max_deg", type=int, default=3)

    sp = add("ide", cmd_ide, "IDE coefficients A_l of a projective system")
    sp.add_argument("--system", required=True)

    sp = add("check-fsm", cmd_check_fsm, "check a fundamental solution matrix")
    sp.add_argument("--system", required=True)
    sp.add_argument("--Y", help="matrix as JSON rows or a JSON file")

    sp = add("gauge", cmd_gauge, "gauge-transform a projective system")
    sp.add_argument("--system", required=True)
    sp.add_argument("--gauge", required=True, help="list of matrices as JSON or a JSON file")

    sp = add("equivariance", cmd_equivariance, "check H-equivariance of a system")
    sp.add_argument("--system", required=True)

    sp = add("compose", cmd_compose, "descend an equivariant system to F")
    sp.add_argument("--system", required=True)
    sp.add_argument("--Z", help="JSON file with Z_0..Z_{L+1}; Hilbert 90 is used if absent")
    sp.add_argument("--seed", type=int, default=0)

    for name, fn, h in (("hilbert90", cmd_hilbert90, "solve eta(Z) = Z C"),
                        ("form-member", cmd_form_member, "twisted-form membership")):
        sp = add(name, fn, h)
        field_args(sp)
        sp.add_argument("--chi", required=True, help="chi(eta) as JSON rows")
        sp.add_argument("--level", type=int, default=0)
        if name == "hilbert90":
            sp.add_argument("--seed", type=int, default=0)
        else:
            sp.add_argument("--u", help="u-coordinate of [[1,u],[0,1]]")
            sp.add_argument("--matrix", help="matrix as JSON rows")
            sp.add_argument("--group", default="gl")

    sp = add("pv-equal", cmd_pv_equal, "equivalence of two sequences U, U'")
    sp.add_argument("--pair", required=True, help="JSON file with field, U, U2 and optional chi/group/L")

    sp = add("frattini", cmd_frattini, "Frattini test for a surjection G -> H")
    sp.add_argument("--group", required=True)
    sp.add_argument("--onto", required=True)
    sp.add_argument("--map", help="images of 0..|G|-1; first surjection if omitted")
    sp.add_argument("--all", action="store_true", help="check every surjection")

    sp = add("fibre", cmd_fibre, "fibre product A x_C B")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--c", required=True)
    sp.add_argument("--map1")
    sp.add_argument("--map2")

    sp = add("semidirect", cmd_semidirect, "semidirect product N x| H")
    sp.add_argument("--n", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--action", help='JSON {"h": [images of N]} on generators of H; trivial if omitted')
    sp.add_argument("--expect", help="group to compare with up to isomorphism")

    sp = add("type-mu", cmd_type_mu, "multiplication map N x| H -> G")
    sp.add_argument("--group", required=True)
    sp.add_argument("--normal", help="element indices of N (default: all of G)")
    sp.add_argument("--sub", help="element indices of H (default: all of G)")

    sp = add("decompose", cmd_decompose, "decomposition tree of an epimorphism descriptor")
    sp.add_argument("--descriptor", required=True)
    sp.add_argument("--plan", action="store_true")

    sp = add("plan", cmd_plan, "solution plan of an epimorphism descriptor")
    sp.add_argument("--descriptor", required=True)
    sp.add_argument("--tree", action="store_true")
    return p


def run(argv) -> tuple:
    """(exit code, Report or None).  Usage errors print to stderr and give 2."""
    argv = list(argv)
    parser = build_parser()
    if not argv or argv[0] not in COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            parser.print_help()
            return 0, None
        parser.print_usage(sys.stderr)
        print(f"idgalois: unknown command {argv[0]!r}" if argv else "idgalois: missing command", file=sys.stderr)
        return 2, None
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), None
    rep = Report(argv)
    try:
        args.fn(args, rep)
    except (InputError, eqv.EquivarianceError) + INPUT_ERRORS as exc:
        rep.verdict = "error"
        rep.witness = {"error": type(exc).__name__, "message": str(exc)}
    return rep.exit_code, rep


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, rep = run(argv)
    if rep is not None:
        as_json = "--json" in argv
        print(rep.to_json() if as_json else rep.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
