import json
import random
from pathlib import Path

import pytest

import descgen
from idgalois import decomposer as dec
from idgalois.decomposer import (
    CLASS_NAMES,
    PLAN_TAGS,
    DescriptorError,
    EpiDescriptor,
    GroupDescriptor,
    MissingOracle,
    RuleNotApplicable,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def scenario(name):
    return dec.epi_from_dict(json.loads((SCENARIOS / name).read_text()))


def conn(name, dim, *flags, **kw):
    return GroupDescriptor(name, dim, frozenset({"reduced", "connected", *flags}), **kw)


def epi(kernel, flags=(), tdim=2, **kw):
    src = conn("Gt", tdim + kernel.dimension)
    return EpiDescriptor("b", src, conn("G", tdim), kernel, frozenset(flags), **kw)


def test_borel_scenario():
    tree = dec.decompose(scenario("borel.json"))
    assert {4, 5} <= tree.leaf_classes() <= {1, 4, 5}
    assert tree.root.rule == "derived-subgroup"
    assert dec.recomposition_holds(tree)
    plan = dec.build_solution_plan(tree)
    assert {s.leaf_class for s in plan.steps} == tree.leaf_classes()
    assert all(s.tag == PLAN_TAGS[s.leaf_class] for s in plan.steps)
    assert [s.order for s in plan.steps] == list(range(1, len(plan.steps) + 1))


def test_gl_pgl_scenario():
    tree = dec.decompose(scenario("gl_pgl.json"))
    assert {2, 4} <= tree.leaf_classes() <= {1, 2, 4}
    assert tree.root.rule == "minimal-supplement"
    assert tree.root.cover is not None
    plan = dec.build_solution_plan(tree)
    torus = [s for s in plan.steps if s.leaf_class == 4]
    assert torus and all(s.rewritten is not None and s.rewritten.has("subdirect_H_split") for s in torus)


def test_terminal_leaves():
    T = conn("T", 1, "torus", "abelian", "solvable")
    assert dec.leaf_class(epi(T, {"split", "H_split", "H_rigid"}, semidirect_by_H=True)) == 4
    U = conn("U", 1, "unipotent", "abelian", "solvable")
    assert dec.leaf_class(epi(U, {"split", "H_split", "H_rigid"}, semidirect_by_H=True)) == 5
    S = conn("S", 3, "semisimple", "centerless")
    assert dec.leaf_class(epi(S, {"split", "H_split", "H_rigid"}, semidirect_by_H=True)) == 3
    A = GroupDescriptor("A", 0, frozenset({"reduced", "finite"}), order=4)
    assert dec.leaf_class(epi(A, {"split"})) == 1
    assert dec.leaf_class(epi(A, {"frattini", "H_rigid"}, semidirect_by_H=True)) == 2
    assert dec.leaf_class(epi(T, {"split"})) is None
    assert dec.decompose(epi(A, {"split"})).root.is_leaf


def test_missing_oracles():
    S = conn("S", 3, "semisimple")
    with pytest.raises(MissingOracle) as exc:
        dec.decompose(epi(S, {"split"}))
    assert exc.value.field == "center_order"
    B = conn("B", 3, "solvable")
    with pytest.raises(MissingOracle):
        dec.decompose(epi(B, {"split"}))
    with pytest.raises(MissingOracle) as exc:
        dec.decompose(epi(conn("T", 1, "torus", "abelian", "solvable")))
    assert exc.value.field == "supplement_kernel"


def test_rule_not_applicable():
    T = conn("T", 1, "torus", "abelian", "solvable")
    b = epi(T, {"split"})
    for rule in ("identity-component", "center", "derived-subgroup", "unipotent-series", "minimal-supplement"):
        with pytest.raises(RuleNotApplicable):
            dec.elementary_decompose(b, rule)
    U = conn("U", 1, "unipotent", "abelian", "solvable")
    with pytest.raises(RuleNotApplicable):
        dec.subdirect_rewrite(epi(U, {"split", "H_split", "H_rigid"}, semidirect_by_H=True))
    with pytest.raises(RuleNotApplicable):
        dec.subdirect_rewrite(epi(T, {"split"}))
    with pytest.raises(DescriptorError):
        dec.elementary_decompose(b, "no-such-rule")


def test_invalid_descriptors():
    with pytest.raises(DescriptorError):
        dec.decompose(epi(conn("X", 2, "torus", "unipotent")))
    with pytest.raises(DescriptorError):
        GroupDescriptor("X", 2, frozenset({"finite"})).validate()
    T = conn("T", 1, "torus", "abelian", "solvable")
    with pytest.raises(DescriptorError):
        EpiDescriptor("b", conn("Gt", 5), conn("G", 2), T).validate()
    with pytest.raises(DescriptorError):
        epi(T, {"H_rigid"}).validate()
    with pytest.raises(DescriptorError):
        dec.epi_from_dict({"source": "G", "target": "G"})
    with pytest.raises(DescriptorError):
        dec.epi_from_dict({"source": "G", "target": "G", "kernel": "1", "colour": "red"})


def test_serialization_roundtrip():
    for name in ("borel.json", "gl_pgl.json"):
        b = scenario(name)
        assert dec.epi_from_dict(json.loads(json.dumps(dec.epi_to_dict(b)))) == b
    rng = random.Random(4)
    for _ in range(50):
        # loading fills in orders of finite groups, so compare after one pass
        b = dec.epi_from_dict(dec.epi_to_dict(descgen.random_epi(rng)))
        assert dec.epi_from_dict(dec.epi_to_dict(b)) == b
        assert dec.decompose(b).leaf_classes() <= set(CLASS_NAMES)


def test_tree_to_dict():
    d = dec.decompose(scenario("borel.json")).to_dict()
    json.dumps(d)

    def leaves(node):
        if "children" not in node:
            return [node]
        return [x for c in node["children"] for x in leaves(c)]

    assert all(n["class_name"] == CLASS_NAMES[n["class"]] for n in leaves(d["root"]))
    assert d["root"]["cite"] == dec.RULE_CITES[d["root"]["step"]]


def test_compose_and_extension_cancel():
    b = scenario("borel.json")
    outer, inner = dec.elementary_decompose(b, "derived-subgroup")
    comp = dec.compose(outer, inner)
    assert (comp.source, comp.target, comp.kernel) == (b.source, b.target, b.kernel)
    with pytest.raises(DescriptorError):
        dec.compose(inner, inner)


def test_random_sweep():
    rng = random.Random(2024)
    seen = set()
    for _ in range(400):
        b = descgen.random_epi(rng)
        tree = dec.decompose(b)
        classes = tree.leaf_classes()
        assert classes <= set(CLASS_NAMES)
        assert dec.recomposition_holds(tree)
        assert all(child < parent for _, parent, child in tree.measures)
        plan = dec.build_solution_plan(tree)
        assert len(plan.steps) == len(tree.leaves())
        seen |= classes
    assert seen == set(CLASS_NAMES)


def test_kernel_kinds_each_decompose():
    for kind in descgen.KINDS:
        rng = random.Random(kind)
        for _ in range(20):
            b = descgen.random_epi(random.Random(rng.random()), kind)
            assert dec.decompose(b).leaf_classes() <= set(CLASS_NAMES), b.name
