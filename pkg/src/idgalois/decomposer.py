"""Structural decomposition of epimorphisms of algebraic groups.

Groups are described by flags, dimensions and oracle data instead of
coordinate rings.  ``decompose`` rewrites an epimorphism descriptor by nine
ordered rules until every leaf falls into one of five terminal classes, and
``build_solution_plan`` attaches a solving strategy to each leaf.

Descriptors are immutable terms: a child kernel remembers whether it is a
subgroup or a quotient of its parent, so composing the pieces of a node
cancels back to the original terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .finite_groups import GroupError, catalogue_group, minimal_supplement

GROUP_FLAGS = (
    "reduced",
    "connected",
    "finite",
    "abelian",
    "solvable",
    "torus",
    "unipotent",
    "semisimple",
    "centerless",
    "minimal_normal",
)
EPI_FLAGS = ("split", "H_split", "H_rigid", "frattini", "subdirect_H_split", "type_mu", "embedding_epimorphism")
# flags kept by composition: if both factors have one, so does the composite
COMPOSITION_CLOSED = ("split", "H_split", "H_rigid", "frattini")

CLASS_NAMES = {
    1: "finite-kernel",
    2: "H-rigid-Frattini",
    3: "H-split-semisimple-centerless",
    4: "H-split-torus",
    5: "H-split-minimal-unipotent",
}
PLAN_TAGS = {
    1: "ThmFiniteKernel",
    2: "ThmFrattini",
    3: "PropSubdirectSplit+LemmaRewrite",
    4: "PropSubdirectSplit+LemmaRewrite",
    5: "ThmUnipotent",
}
# rule name per step, in application order
RULES = {
    1: "identity-component",
    2: "radical",
    3: "center",
    4: "derived-subgroup",
    5: "unipotent-part",
    6: "unipotent-series",
    7: "minimal-supplement",
    8: "semidirect-split",
    9: "semidirect-frattini",
}
RULE_STEPS = {v: k for k, v in RULES.items()}
RULE_CITES = {
    1: "kernel quotient by the identity component (characteristic subgroup)",
    2: "kernel quotient by the radical",
    3: "kernel quotient by the center",
    4: "kernel quotient by the commutator subgroup",
    5: "kernel quotient by the unipotent part",
    6: "induction on kernel dimension along a unipotent series",
    7: "Frattini/split factorization through a minimal supplement",
    8: "type-mu factor and H-rigid H-split part of a split epimorphism",
    9: "type-mu factor and H-rigid Frattini part of a Frattini epimorphism",
}


class DescriptorError(ValueError):
    pass


class MissingOracle(DescriptorError):
    def __init__(self, fieldname, where):
        super().__init__(f"missing oracle field {fieldname!r} on {where}")
        self.field = fieldname


class RuleNotApplicable(DescriptorError):
    pass


class UnclassifiedLeaf(DescriptorError):
    pass


# -- descriptors --------------------------------------------------------------

@dataclass(frozen=True)
class GroupDescriptor:
    """An algebraic group known through flags, dimensions and oracle fields.

    ``order`` is the order of a finite group, ``component_order`` the order of
    the component group.  ``complemented`` lists subgroup roles (as in RULES)
    whose subgroup has a complement, which keeps the quotient-side factor split.
    ``origin`` records how a derived descriptor was built.
    """

    name: str
    dimension: int = 0
    flags: frozenset = frozenset()
    order: int | None = None
    component_order: int = 1
    component_group: str | None = None
    radical_dim: int | None = None
    center_order: int | None = None
    derived_dims: tuple | None = None
    unipotent_dim: int | None = None
    unipotent_series: tuple | None = None
    complemented: frozenset = frozenset()
    h_action: str | None = None
    origin: tuple = field(default=(), compare=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        object.__setattr__(self, "complemented", frozenset(self.complemented))
        if self.derived_dims is not None:
            object.__setattr__(self, "derived_dims", tuple(self.derived_dims))
        if self.unipotent_series is not None:
            object.__setattr__(self, "unipotent_series", tuple(self.unipotent_series))

    def has(self, f) -> bool:
        return f in self.flags

    @property
    def is_finite(self) -> bool:
        return self.dimension == 0

    @property
    def is_trivial(self) -> bool:
        return self.dimension == 0 and self.order == 1

    @property
    def is_connected(self) -> bool:
        if self.dimension == 0:
            return self.order == 1
        return self.component_order == 1

    def derived_length(self) -> int:
        if self.dimension == 0:
            return 0
        if self.derived_dims is not None:
            return len(self.derived_dims) - 1
        if self.has("abelian") or self.has("torus"):
            return 1
        if self.has("solvable") or self.has("unipotent"):
            return self.dimension
        return self.dimension + 1

    def validate(self) -> list:
        """Raise on contradictions; return a list of warnings."""
        d = self.dimension
        where = f"group {self.name!r}"
        if d < 0:
            raise DescriptorError(f"{where}: negative dimension")
        bad = self.flags - set(GROUP_FLAGS)
        if bad:
            raise DescriptorError(f"{where}: unknown flags {sorted(bad)}")
        if self.has("finite") and d != 0:
            raise DescriptorError(f"{where}: finite but dimension {d}")
        for f in ("torus", "unipotent", "semisimple"):
            if self.has(f) and d > 0 and not self.is_connected:
                raise DescriptorError(f"{where}: {f} requires connected")
        if self.has("connected") and self.component_order != 1:
            raise DescriptorError(f"{where}: connected but component group of order {self.component_order}")
        if d > 0:
            kinds = [f for f in ("torus", "unipotent", "semisimple") if self.has(f)]
            if len(kinds) > 1:
                raise DescriptorError(f"{where}: flags {kinds} are incompatible in positive dimension")
            if self.has("semisimple") and (self.has("solvable") or self.has("abelian")):
                raise DescriptorError(f"{where}: semisimple and solvable in positive dimension")
        if self.has("abelian") and self.has("semisimple") and d > 0:
            raise DescriptorError(f"{where}: abelian semisimple in positive dimension")
        for nm in ("radical_dim", "unipotent_dim"):
            v = getattr(self, nm)
            if v is not None and not 0 <= v <= d:
                raise DescriptorError(f"{where}: {nm}={v} outside [0, {d}]")
        if self.derived_dims is not None:
            dd = self.derived_dims
            if not dd or dd[0] != d or any(b >= a for a, b in zip(dd, dd[1:])) or dd[-1] != 0:
                raise DescriptorError(f"{where}: derived_dims must fall strictly from {d} to 0")
        if self.unipotent_series is not None:
            us = self.unipotent_series
            top = d if self.unipotent_dim is None else self.unipotent_dim
            if not us or us[0] != top or any(b >= a for a, b in zip(us, us[1:])) or us[-1] != 0:
                raise DescriptorError(f"{where}: unipotent_series must fall strictly from {top} to 0")
        if self.center_order is not None and self.center_order < 1:
            raise DescriptorError(f"{where}: center_order must be positive")
        return []

    # -- term builders
    def sub(self, role: str, **kw) -> "GroupDescriptor":
        return GroupDescriptor(origin=("sub", self, role), **kw)

    def quot(self, V: "GroupDescriptor", **kw) -> "GroupDescriptor":
        return GroupDescriptor(origin=("quot", self, V), **kw)


def extension(V: GroupDescriptor, Q: GroupDescriptor) -> GroupDescriptor:
    """The group built from normal subgroup V and quotient Q; cancels quot terms."""
    if Q.origin and Q.origin[0] == "quot" and Q.origin[2] == V:
        return Q.origin[1]
    return GroupDescriptor(
        name=f"{V.name}.{Q.name}",
        dimension=V.dimension + Q.dimension,
        origin=("ext", V, Q),
    )


def semidirect_term(A: GroupDescriptor, B: GroupDescriptor) -> GroupDescriptor:
    return GroupDescriptor(
        name=f"({A.name}):({B.name})",
        dimension=A.dimension + B.dimension,
        origin=("semidirect", A, B),
    )


def trivial_group() -> GroupDescriptor:
    return GroupDescriptor("1", 0, frozenset({"finite", "connected", "reduced", "abelian", "solvable"}), order=1)


@dataclass(frozen=True)
class EpiDescriptor:
    """beta: source -> target with kernel, optional finite supplement H and flags.

    Oracle fields: ``supplement_kernel`` is the kernel of the restriction to a
    minimal supplement (needed by the supplement rule), ``h_cap`` the elements
    of H lying in the identity component (used to check minimality of H).
    """

    name: str
    source: GroupDescriptor
    target: GroupDescriptor
    kernel: GroupDescriptor
    flags: frozenset = frozenset()
    H: str | None = None
    h_cap: tuple | None = None
    supplement_kernel: GroupDescriptor | None = None
    semidirect_by_H: bool = False

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        if self.h_cap is not None:
            object.__setattr__(self, "h_cap", tuple(self.h_cap))

    def has(self, f) -> bool:
        return f in self.flags

    def with_flags(self, add=(), drop=(), **kw) -> "EpiDescriptor":
        return replace(self, flags=(self.flags - set(drop)) | set(add), **kw)

    def validate(self) -> list:
        warnings = []
        where = f"epimorphism {self.name!r}"
        bad = self.flags - set(EPI_FLAGS)
        if bad:
            raise DescriptorError(f"{where}: unknown flags {sorted(bad)}")
        for g in (self.source, self.target, self.kernel):
            warnings += g.validate()
        if self.supplement_kernel is not None:
            self.supplement_kernel.validate()
            sk, K0 = self.supplement_kernel, self.kernel
            if K0.is_finite and K0.order and sk.order and K0.order % sk.order:
                raise DescriptorError(f"{where}: supplement kernel order does not divide the kernel order")
        K = self.kernel
        if self.has("H_rigid") and not self.semidirect_by_H:
            raise DescriptorError(f"{where}: H_rigid needs source and target declared semidirect by H")
        if self.has("frattini") and (self.has("split") or self.has("H_split")) and not K.is_trivial:
            raise DescriptorError(f"{where}: frattini and split are exclusive for a nontrivial kernel")
        if self.has("type_mu") and K.dimension > 0:
            raise DescriptorError(f"{where}: type-mu epimorphisms have finite kernel")
        if self.has("type_mu") and self.has("H_rigid"):
            raise DescriptorError(f"{where}: type_mu and H_rigid cannot both be declared")
        if self.source.dimension and self.target.dimension + K.dimension != self.source.dimension:
            raise DescriptorError(f"{where}: dim source != dim target + dim kernel")
        if "reduced" not in K.flags:
            warnings.append(f"{where}: kernel not flagged reduced; treated as reduced")
        return warnings


# -- classification -----------------------------------------------------------

def _class_predicates(b: EpiDescriptor) -> dict:
    K = b.kernel
    positive = K.dimension > 0 and K.is_connected
    hsplit = b.has("H_rigid") and b.has("H_split")
    return {
        1: K.is_finite and not (b.has("frattini") and b.has("H_rigid")) and (b.has("type_mu") or not b.has("frattini")),
        2: b.has("frattini") and b.has("H_rigid"),
        3: hsplit and positive and K.has("semisimple") and K.has("centerless"),
        4: hsplit and positive and K.has("torus"),
        5: hsplit and positive and K.has("unipotent") and (K.has("minimal_normal") or K.dimension == 1),
    }


def leaf_class(b: EpiDescriptor):
    """The terminal class of b, None if b is not terminal; error if ambiguous."""
    hits = [c for c, ok in _class_predicates(b).items() if ok]
    if len(hits) > 1:
        raise DescriptorError(f"{b.name}: matches several terminal classes {hits}")
    return hits[0] if hits else None


def measure(b: EpiDescriptor) -> tuple:
    """(kernel dim, derived length, component order, pending refinements)."""
    K = b.kernel
    pending = 0
    if K.has("semisimple") and not K.has("centerless") and K.dimension > 0:
        pending += 1
    if not (b.has("split") or b.has("frattini") or b.has("H_split") or b.has("type_mu")):
        pending += 1
    if not (b.has("H_rigid") or b.has("type_mu")):
        pending += 1
    comp = K.order if K.is_finite and K.order is not None else K.component_order
    return (K.dimension, K.derived_length(), comp, pending)


# -- tree ---------------------------------------------------------------------

@dataclass
class Node:
    epi: EpiDescriptor
    step: int | None = None
    rule: str | None = None
    children: list = field(default_factory=list)  # [outer, inner]
    leaf: int | None = None
    cover: EpiDescriptor | None = None  # the replacement beta o beta3 for cover rules
    notes: list = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            for c in self.children:
                yield from c.leaves()

    def to_dict(self) -> dict:
        d = {"epi": epi_to_dict(self.epi)}
        if self.is_leaf:
            d["class"] = self.leaf
            d["class_name"] = CLASS_NAMES.get(self.leaf)
        else:
            d["step"] = self.step
            d["rule"] = self.rule
            d["cite"] = RULE_CITES[self.step]
            if self.cover is not None:
                d["cover"] = epi_to_dict(self.cover)
            d["children"] = [c.to_dict() for c in self.children]
        if self.notes:
            d["notes"] = list(self.notes)
        return d


@dataclass
class DecompTree:
    root: Node
    warnings: list = field(default_factory=list)
    measures: list = field(default_factory=list)  # (parent, child) pairs per step

    def leaves(self) -> list:
        return list(self.root.leaves())

    def leaf_classes(self) -> set:
        return {n.leaf for n in self.leaves()}

    def to_dict(self) -> dict:
        return {"root": self.root.to_dict(), "warnings": list(self.warnings)}


def compose(outer: EpiDescriptor, inner: EpiDescriptor, name: str | None = None) -> EpiDescriptor:
    """outer o inner."""
    if inner.target != outer.source:
        raise DescriptorError(f"cannot compose: {inner.name} lands in {inner.target.name}, {outer.name} starts at {outer.source.name}")
    flags = {f for f in COMPOSITION_CLOSED if outer.has(f) and inner.has(f)}
    return EpiDescriptor(
        name=name or f"{outer.name}*{inner.name}",
        source=inner.source,
        target=outer.target,
        kernel=extension(inner.kernel, outer.kernel),
        flags=frozenset(flags),
        H=outer.H if outer.H == inner.H else None,
    )


# -- rules --------------------------------------------------------------------

def _kernel_factor(b: EpiDescriptor, V: GroupDescriptor, Q: GroupDescriptor, role: str):
    """Factor beta through source/V: inner has kernel V, outer has kernel A/V."""
    mid = b.source.quot(V, name=f"{b.source.name}/{V.name}", dimension=max(b.source.dimension - V.dimension, 0))
    keep = b.flags - {"embedding_epimorphism", "split", "H_split"}
    outer_flags = set(keep) | ({f for f in ("split", "H_split") if b.has(f)})
    inner_flags = set(keep)
    if role in b.kernel.complemented:
        inner_flags |= {f for f in ("split", "H_split") if b.has(f)}
    inner = EpiDescriptor(f"{b.name}|{V.name}", b.source, mid, V, frozenset(inner_flags), b.H, None, None, b.semidirect_by_H)
    outer = EpiDescriptor(f"{b.name}/{V.name}", mid, b.target, Q, frozenset(outer_flags), b.H, b.h_cap, None, b.semidirect_by_H)
    return outer, inner


def _pieces(A: GroupDescriptor, role: str, sub_kw: dict, quot_kw: dict):
    # the complement oracle is declared for the whole characteristic series
    sub_kw.setdefault("complemented", A.complemented)
    quot_kw.setdefault("complemented", A.complemented)
    V = A.sub(role, **sub_kw)
    Q = A.quot(V, **quot_kw)
    return V, Q


def _base_flags(A, *extra):
    return frozenset({"reduced"} | set(extra))


def _connected_kind(A) -> set:
    """Kind flags of a connected group read off the oracle fields."""
    d, u = A.dimension, A.unipotent_dim
    if d == 0:
        return set()
    if u == d:
        out = {"unipotent", "solvable"}
        if d == 1 or (A.unipotent_series is not None and len(A.unipotent_series) == 2):
            out.add("minimal_normal")
        return out
    if u == 0 and A.has("abelian"):
        return {"torus", "solvable"}
    if A.radical_dim == 0:
        return {"semisimple"}
    return set()


def rule_identity_component(b):
    A = b.kernel
    if A.is_finite or A.is_connected:
        raise RuleNotApplicable("kernel is finite or already connected")
    inherited = A.flags & {"abelian", "solvable", "reduced", "centerless"}
    inherited |= _connected_kind(A)
    V, Q = _pieces(
        A,
        "identity-component",
        dict(
            name=f"{A.name}o",
            dimension=A.dimension,
            flags=inherited | {"connected"},
            radical_dim=A.radical_dim,
            center_order=A.center_order,
            derived_dims=A.derived_dims,
            unipotent_dim=A.unipotent_dim,
            unipotent_series=A.unipotent_series,
            complemented=A.complemented,
        ),
        dict(
            name=f"{A.name}/{A.name}o",
            dimension=0,
            flags=_base_flags(A, "finite"),
            order=A.component_order,
            component_order=A.component_order,
            component_group=A.component_group,
        ),
    )
    return _kernel_factor(b, V, Q, "identity-component")


def _radical_kind(r, uni) -> set:
    if uni == 0:
        return {"torus", "abelian"}
    if uni == r:
        return {"unipotent"} | ({"minimal_normal"} if r == 1 else set())
    return set()


def rule_radical(b):
    A = b.kernel
    if A.has("solvable") or A.has("semisimple") or A.dimension == 0:
        raise RuleNotApplicable("kernel is solvable or semisimple")
    if A.radical_dim is None:
        raise MissingOracle("radical_dim", A.name)
    r = A.radical_dim
    if not 0 < r < A.dimension:
        raise DescriptorError(
            f"{A.name}: radical_dim={r} means the kernel should be flagged "
            + ("semisimple" if r == 0 else "solvable")
        )
    uni = A.unipotent_dim if A.unipotent_dim is not None and A.unipotent_dim <= r else None
    V, Q = _pieces(
        A,
        "radical",
        dict(
            name=f"R({A.name})",
            dimension=r,
            flags=_base_flags(A, "connected", "solvable", *_radical_kind(r, uni)),
            unipotent_dim=uni,
        ),
        dict(name=f"{A.name}/R({A.name})", dimension=A.dimension - r, flags=_base_flags(A, "connected", "semisimple"), center_order=A.center_order),
    )
    return _kernel_factor(b, V, Q, "radical")


def rule_center(b):
    A = b.kernel
    if not A.has("semisimple") or A.has("centerless") or A.dimension == 0:
        raise RuleNotApplicable("kernel is not a semisimple group with center")
    if A.center_order is None:
        raise MissingOracle("center_order", A.name)
    if A.center_order == 1:
        raise DescriptorError(f"{A.name}: trivial center, flag it centerless")
    V, Q = _pieces(
        A,
        "center",
        dict(name=f"Z({A.name})", dimension=0, flags=_base_flags(A, "finite", "abelian"), order=A.center_order, component_order=A.center_order),
        dict(name=f"{A.name}/Z({A.name})", dimension=A.dimension, flags=_base_flags(A, "connected", "semisimple", "centerless")),
    )
    return _kernel_factor(b, V, Q, "center")


def rule_derived(b, warnings):
    A = b.kernel
    if not A.has("solvable") or A.has("abelian") or A.has("torus") or A.dimension == 0:
        raise RuleNotApplicable("kernel is not a non-abelian solvable group")
    if A.derived_dims is None:
        raise MissingOracle("derived_dims", A.name)
    dd = A.derived_dims
    if len(dd) <= 2:
        raise DescriptorError(f"{A.name}: derived_dims {list(dd)} say abelian, flag it abelian")
    d1 = dd[1]
    warnings.append(
        f"{b.name}: commutator rule reads 'reduced' as qualifying the kernel, not the epimorphism"
    )
    # the commutator subgroup of a connected solvable group is unipotent
    v_flags = {"connected", "solvable", "unipotent"} | ({"abelian"} if len(dd) == 3 else set())
    if A.unipotent_dim is not None and A.unipotent_dim < d1:
        raise DescriptorError(f"{A.name}: unipotent_dim {A.unipotent_dim} below commutator dimension {d1}")
    qu = A.unipotent_dim - d1 if A.unipotent_dim is not None else None
    q_flags = {"connected", "abelian", "solvable"}
    if qu == 0:
        q_flags.add("torus")
    elif qu == A.dimension - d1:
        q_flags.add("unipotent")
        hs = _head_series(A.unipotent_series, d1)
        if qu == 1 or (hs is not None and len(hs) == 2):
            q_flags.add("minimal_normal")
    V, Q = _pieces(
        A,
        "derived-subgroup",
        dict(
            name=f"[{A.name},{A.name}]",
            dimension=d1,
            flags=_base_flags(A, *v_flags),
            derived_dims=dd[1:],
            unipotent_dim=d1,
            unipotent_series=_tail_series(A.unipotent_series, d1),
        ),
        dict(
            name=f"{A.name}ab",
            dimension=A.dimension - d1,
            flags=_base_flags(A, *q_flags),
            unipotent_dim=qu,
            unipotent_series=_head_series(A.unipotent_series, d1) if "unipotent" in q_flags else None,
        ),
    )
    return _kernel_factor(b, V, Q, "derived-subgroup")


def _tail_series(series, d):
    if series is None or d not in series:
        return None
    return series[series.index(d):]


def _head_series(series, d):
    """Series of the quotient by the step of dimension d."""
    if series is None or d not in series:
        return None
    return tuple(x - d for x in series[: series.index(d) + 1])


def rule_unipotent_part(b):
    A = b.kernel
    if not A.has("abelian") or A.has("torus") or A.has("unipotent") or A.dimension == 0:
        raise RuleNotApplicable("kernel is not a mixed connected abelian group")
    if A.unipotent_dim is None:
        raise MissingOracle("unipotent_dim", A.name)
    u = A.unipotent_dim
    if u in (0, A.dimension):
        raise DescriptorError(f"{A.name}: unipotent_dim={u}, flag it " + ("torus" if u == 0 else "unipotent"))
    V, Q = _pieces(
        A,
        "unipotent-part",
        dict(
            name=f"{A.name}_u",
            dimension=u,
            flags=_base_flags(
                A, "connected", "abelian", "solvable", "unipotent",
                *(("minimal_normal",) if u == 1 or (A.unipotent_series and len(A.unipotent_series) == 2) else ()),
            ),
            unipotent_dim=u,
            unipotent_series=A.unipotent_series,
        ),
        dict(name=f"{A.name}/{A.name}_u", dimension=A.dimension - u, flags=_base_flags(A, "connected", "abelian", "solvable", "torus"), unipotent_dim=0),
    )
    return _kernel_factor(b, V, Q, "unipotent-part")


def rule_unipotent_series(b):
    A = b.kernel
    if not A.has("unipotent") or A.has("minimal_normal") or A.dimension <= 1:
        raise RuleNotApplicable("kernel is not a non-minimal unipotent group")
    if A.unipotent_series is None:
        raise MissingOracle("unipotent_series", A.name)
    s = A.unipotent_series
    if len(s) == 2:
        raise DescriptorError(f"{A.name}: series {list(s)} has one step, flag it minimal_normal")
    s1 = s[1]
    ab = {"abelian"} if A.has("abelian") else set()
    v_flags = {"connected", "solvable", "unipotent"} | ab | ({"minimal_normal"} if len(s) == 3 else set())
    V, Q = _pieces(
        A,
        "unipotent-series",
        dict(name=f"{A.name}[{s1}]", dimension=s1, flags=_base_flags(A, *v_flags), unipotent_dim=s1, unipotent_series=s[1:]),
        dict(
            name=f"{A.name}/{A.name}[{s1}]",
            dimension=A.dimension - s1,
            flags=_base_flags(A, "connected", "solvable", "unipotent", "minimal_normal", *ab),
            unipotent_dim=A.dimension - s1,
        ),
    )
    return _kernel_factor(b, V, Q, "unipotent-series")


def rule_supplement(b):
    """beta o psi = beta|_U o pr_U with psi: A x| U -> source."""
    A = b.kernel
    if b.has("split") or b.has("frattini") or b.has("H_split") or b.has("type_mu"):
        raise RuleNotApplicable("epimorphism is already split or Frattini")
    if b.supplement_kernel is None:
        raise MissingOracle("supplement_kernel", b.name)
    K = b.supplement_kernel
    if A.dimension > 0 and K.dimension >= A.dimension:
        raise DescriptorError(f"{b.name}: supplement kernel must have smaller dimension than the kernel")
    udim = b.target.dimension + K.dimension
    uorder = None
    if udim == 0 and b.target.order is not None and K.order is not None:
        uorder = b.target.order * K.order
    U = b.source.sub("minimal-supplement", name=f"U({b.name})", dimension=udim, order=uorder,
                     component_order=uorder if uorder is not None else 1)
    AU = semidirect_term(A, U)
    keep = b.flags & {"H_rigid", "subdirect_H_split"}
    split_part = EpiDescriptor(f"pr_U({b.name})", AU, U, A, frozenset(keep | {"split"}), b.H, None, None, b.semidirect_by_H)
    frat_part = EpiDescriptor(f"{b.name}|U", U, b.target, K, frozenset(keep | {"frattini"}), b.H, b.h_cap, None, b.semidirect_by_H)
    return frat_part, split_part


def _H_data(b, component_of: GroupDescriptor, notes):
    """H name and the order of its intersection with the identity component."""
    if b.H is None:
        if component_of.component_order != 1 or (component_of.is_finite and component_of.order != 1):
            raise MissingOracle("H", b.name)
        notes.append("H trivial (connected group)")
        return "1", 1
    order = None
    if b.H.startswith("catalogue:"):
        try:
            Hg = catalogue_group(b.H.split(":", 1)[1])
        except GroupError as exc:
            raise DescriptorError(str(exc)) from exc
        if b.h_cap is not None:
            cap = frozenset(b.h_cap)
            if not Hg.is_subgroup(cap) or not Hg.is_normal(cap):
                raise DescriptorError(f"{b.name}: h_cap is not a normal subgroup of H")
            order = len(cap)
            if Hg.n // order != component_of.component_order and not component_of.is_finite:
                raise DescriptorError(f"{b.name}: |H/(H n G°)| differs from the component group order")
            if minimal_supplement(Hg, cap) != frozenset(range(Hg.n)):
                raise DescriptorError(f"{b.name}: H is not minimal (a proper subgroup supplements H n G°)")
            notes.append("minimality of H verified")
        else:
            notes.append("minimality of H assumed (no h_cap given)")
    else:
        notes.append("minimality of H assumed (H not concrete)")
    return b.H, order


def _mu_kernel(name, order):
    flags = {"finite", "reduced"}
    if order == 1:
        flags |= {"connected", "abelian", "solvable"}
    return GroupDescriptor(name=name, dimension=0, flags=frozenset(flags), order=order, component_order=order or 1)


def rule_semidirect_split(b, notes):
    A = b.kernel
    if not (b.has("split") or b.has("H_split")) or b.has("H_rigid") or A.dimension == 0 or not A.is_connected:
        raise RuleNotApplicable("needs a split, non-H-rigid epimorphism with connected kernel")
    G = b.target
    Hname, cap = _H_data(b, G, notes)
    Go = GroupDescriptor(f"{G.name}o", G.dimension, frozenset({"connected", "reduced"}))
    Hd = GroupDescriptor(Hname, 0, frozenset({"finite", "reduced"}), order=None)
    AGoH = semidirect_term(semidirect_term(A, Go), Hd)
    GoH = semidirect_term(Go, Hd)
    keep = b.flags & {"subdirect_H_split"}
    bar = EpiDescriptor(f"{b.name}bar", AGoH, GoH, A, frozenset(keep | {"split", "H_split", "H_rigid"}), Hname, None, None, True)
    mu = EpiDescriptor(f"mu({G.name})", GoH, G, _mu_kernel(f"{Hname}n{G.name}o", cap), frozenset({"type_mu", "frattini"}), Hname, b.h_cap, None, False)
    return mu, bar


def rule_semidirect_frattini(b, notes):
    A = b.kernel
    if not b.has("frattini") or b.has("H_rigid") or b.has("type_mu"):
        raise RuleNotApplicable("needs a Frattini epimorphism that is not yet H-rigid")
    S, G = b.source, b.target
    Hname, cap = _H_data(b, S, notes)
    So = GroupDescriptor(f"{S.name}o", S.dimension, frozenset({"connected", "reduced"}))
    Go = GroupDescriptor(f"{G.name}o", G.dimension, frozenset({"connected", "reduced"}))
    Hd = GroupDescriptor(Hname, 0, frozenset({"finite", "reduced"}), order=None)
    GoH = semidirect_term(Go, Hd)
    mu_kernel = _mu_kernel(f"ker mu({G.name})", cap)
    bar_kernel = A
    if S.is_finite:
        # finite source: the identity component is trivial and mu carries all of A
        bar_kernel, mu_kernel = trivial_group(), A
        notes.append("finite source: H is the whole source, mu restricts to beta")
    bar = EpiDescriptor(f"{b.name}bar", semidirect_term(So, Hd), GoH, bar_kernel, frozenset({"frattini", "H_rigid"}), Hname, None, None, True)
    mu = EpiDescriptor(f"mu({G.name})", GoH, G, mu_kernel, frozenset({"type_mu", "frattini"}), Hname, b.h_cap, None, False)
    return mu, bar


def finite_bridge(phi) -> dict:
    """Decompose a concrete surjection of finite groups declared Frattini and test its leaves.

    With a finite source the identity components are trivial, so H is the
    whole source: the type-mu leaf is phi itself and the H-rigid leaf is the
    identity of H.  Every leaf is checked with the subset criterion.
    """
    from .finite_groups import GroupHom, frattini_criterion

    G, Q = phi.source, phi.target
    ker = phi.kernel()
    desc = EpiDescriptor(
        name=f"{G.name}->{Q.name}",
        source=GroupDescriptor(G.name, 0, frozenset({"finite", "reduced"}), order=G.n, component_order=G.n),
        target=GroupDescriptor(Q.name, 0, frozenset({"finite", "reduced"}), order=Q.n, component_order=Q.n),
        kernel=GroupDescriptor(f"ker({G.name}->{Q.name})", 0, frozenset({"finite", "reduced"}), order=len(ker), component_order=len(ker)),
        flags=frozenset({"frattini"}),
        H=G.name,
    )
    tree = decompose(desc)
    out = []
    for leaf in tree.leaves():
        b = leaf.epi
        concrete = phi if b.has("type_mu") else GroupHom(G, G, list(range(G.n)), check=False)
        if b.kernel.order is not None and len(concrete.kernel()) != b.kernel.order:
            raise AssertionError(f"{b.name}: concrete kernel order differs from the descriptor")
        out.append({"leaf": b.name, "class": leaf.leaf, "frattini_criterion": frattini_criterion(concrete)})
    return {"leaves": out, "holds": all(r["frattini_criterion"] for r in out)}


def elementary_decompose(b: EpiDescriptor, rule: str, warnings=None, notes=None):
    """Apply one named rule; returns (outer, inner) with outer o inner the (covered) input.

    ``rule`` is a key of RULE_STEPS or "trivial-kernel".
    """
    warnings = [] if warnings is None else warnings
    notes = [] if notes is None else notes
    if rule == "trivial-kernel":
        if not b.kernel.is_trivial:
            raise RuleNotApplicable("kernel is not trivial")
        ident = EpiDescriptor(f"id({b.target.name})", b.target, b.target, trivial_group(), frozenset({"split", "frattini"}))
        return ident, b
    step = RULE_STEPS.get(rule)
    if step is None:
        raise DescriptorError(f"unknown rule {rule!r}")
    if step == 4:
        return rule_derived(b, warnings)
    if step == 8:
        return rule_semidirect_split(b, notes)
    if step == 9:
        return rule_semidirect_frattini(b, notes)
    return {
        1: rule_identity_component,
        2: rule_radical,
        3: rule_center,
        5: rule_unipotent_part,
        6: rule_unipotent_series,
        7: rule_supplement,
    }[step](b)


COVER_STEPS = (7, 8, 9)


def _cover_of(b: EpiDescriptor, outer: EpiDescriptor, inner: EpiDescriptor) -> EpiDescriptor:
    """The replacement beta o beta3 that the factor pair composes to."""
    return EpiDescriptor(
        name=f"{b.name}~",
        source=inner.source,
        target=b.target,
        kernel=extension(inner.kernel, outer.kernel),
        flags=frozenset(f for f in COMPOSITION_CLOSED if outer.has(f) and inner.has(f)),
        H=outer.H if outer.H == inner.H else None,
    )


def decompose(beta: EpiDescriptor, max_nodes: int = 10000) -> DecompTree:
    """Rewrite beta by the nine rules (always the lowest applicable step) until every leaf is terminal."""
    warnings = list(beta.validate())
    tree = DecompTree(Node(beta), warnings)
    count = [0]

    def grow(node: Node):
        count[0] += 1
        if count[0] > max_nodes:
            raise DescriptorError("decomposition did not terminate within the node budget")
        b = node.epi
        cls = leaf_class(b)
        if cls is not None:
            node.leaf = cls
            return
        for step in range(1, 10):
            try:
                outer, inner = elementary_decompose(b, RULES[step], tree.warnings, node.notes)
            except RuleNotApplicable:
                continue
            break
        else:
            raise UnclassifiedLeaf(f"{b.name}: no rule applies and no terminal class matches ({_describe(b)})")
        mb = measure(b)
        for child in (outer, inner):
            child.validate()
            mc = measure(child)
            if not mc < mb:
                raise AssertionError(f"step {step}: measure {mc} of {child.name} not below {mb}")
            tree.measures.append((step, mb, mc))
        node.step, node.rule = step, RULES[step]
        if step in COVER_STEPS:
            node.cover = _cover_of(b, outer, inner)
        node.children = [Node(outer), Node(inner)]
        for c in node.children:
            grow(c)

    grow(tree.root)
    return tree


def _describe(b):
    return f"kernel {b.kernel.name} flags {sorted(b.kernel.flags)}, epi flags {sorted(b.flags)}"


# -- recomposition ------------------------------------------------------------

STRUCTURAL = ("source", "target", "kernel")


def recompose(node: Node) -> EpiDescriptor:
    """Compose the leaves back up; structural fields must reproduce each node.

    Composition-closed flags are checked in the sound direction: if both
    factors carry a flag, the composite carries it.
    """
    if node.is_leaf:
        return node.epi
    outer, inner = (recompose(c) for c in node.children)
    comp = compose(outer, inner)
    target = node.cover if node.cover is not None else node.epi
    for f in STRUCTURAL:
        if getattr(comp, f) != getattr(target, f):
            raise AssertionError(f"recomposition at step {node.step} differs in {f}")
    for f in COMPOSITION_CLOSED:
        if comp.has(f) and not target.has(f) and node.cover is None:
            raise AssertionError(f"recomposition at step {node.step}: composite is {f} but parent is not")
    # a cover node stands for beta itself: beta o beta3 determines beta
    return node.epi


def recomposition_holds(tree: DecompTree) -> bool:
    got = recompose(tree.root)
    return all(getattr(got, f) == getattr(tree.root.epi, f) for f in STRUCTURAL)


# -- rewriting and plans ------------------------------------------------------

def subdirect_rewrite(b: EpiDescriptor) -> EpiDescriptor:
    """H-rigid H-split epimorphism with torus or semisimple centerless kernel -> subdirect form."""
    K = b.kernel
    if not (b.has("H_rigid") and b.has("H_split")):
        raise RuleNotApplicable(f"{b.name}: subdirect rewrite needs an H-rigid, H-split epimorphism")
    if not (K.has("torus") or (K.has("semisimple") and K.has("centerless"))):
        raise RuleNotApplicable(f"{b.name}: subdirect rewrite needs a torus or semisimple centerless kernel")
    Go = GroupDescriptor(f"{b.target.name}_conn", max(b.target.dimension, 0), frozenset({"connected", "reduced"}))
    Hd = GroupDescriptor(b.H or "1", 0, frozenset({"finite", "reduced"}))
    src = GroupDescriptor(
        name=f"({K.name}x{Go.name}):{Hd.name}",
        dimension=K.dimension + Go.dimension,
        origin=("subdirect", K, b.target, Hd),
    )
    return b.with_flags(add={"subdirect_H_split"}, source=src)


@dataclass
class PlanStep:
    order: int
    leaf_class: int
    tag: str
    epi: str
    detail: str
    axioms: list = field(default_factory=list)
    rewritten: EpiDescriptor | None = None

    def to_dict(self) -> dict:
        d = {
            "order": self.order,
            "class": self.leaf_class,
            "tag": self.tag,
            "epi": self.epi,
            "detail": self.detail,
            "axioms": list(self.axioms),
        }
        if self.rewritten is not None:
            d["rewritten_source"] = self.rewritten.source.name
        return d


@dataclass
class SolutionPlan:
    tree: DecompTree
    steps: list

    def tags(self) -> dict:
        return {s.leaf_class: s.tag for s in self.steps}

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "conclusion": "root is an embedding epimorphism once every step is solved (composition of embedding epimorphisms)",
        }


def build_solution_plan(tree: DecompTree) -> SolutionPlan:
    """Tag every leaf; order = solve the outer factor first, then the inner one relative to it."""
    steps = []

    def walk(node):
        if not node.is_leaf:
            for c in node.children:  # outer first
                walk(c)
            return
        b = node.epi
        cls = leaf_class(b)
        if cls is None:
            raise UnclassifiedLeaf(f"{b.name}: leaf matches no terminal class ({_describe(b)})")
        if node.leaf is not None and node.leaf != cls:
            raise UnclassifiedLeaf(f"{b.name}: recorded class {node.leaf} but flags give {cls}")
        tag = PLAN_TAGS[cls]
        axioms, rewritten = [], None
        if cls == 1:
            if b.has("type_mu") or b.has("split"):
                detail = "finite kernel via free profinite fundamental group"
                axioms.append("free-fundamental-group (external, not verified)")
            elif b.has("frattini"):
                detail = "finite kernel, Frattini criterion path"
            else:
                detail = "finite kernel"
                axioms.append("free-fundamental-group (external, not verified)")
        elif cls == 2:
            detail = "H-rigid Frattini: lift preimages of the transition matrices"
        elif cls in (3, 4):
            rewritten = subdirect_rewrite(b)
            detail = "rewritten as subdirect H-split, then solved factor-wise"
        else:
            detail = "H-split with minimal unipotent kernel: equivalence-class count"
        steps.append(PlanStep(len(steps) + 1, cls, tag, b.name, detail, axioms, rewritten))

    walk(tree.root)
    return SolutionPlan(tree, steps)


# -- serialization ------------------------------------------------------------

def group_from_dict(d, name_hint: str = "G") -> GroupDescriptor:
    if isinstance(d, str):
        if d in ("trivial", "1"):
            return trivial_group()
        return GroupDescriptor(d)
    if not isinstance(d, dict):
        raise DescriptorError(f"group descriptor must be an object or a name, got {type(d).__name__}")
    known = {
        "name", "dimension", "flags", "order", "component_group", "component_order", "radical_dim",
        "center_order", "derived_dims", "unipotent_dim", "unipotent_series", "complemented", "h_action",
    }
    extra = set(d) - known
    if extra:
        raise DescriptorError(f"unknown group fields {sorted(extra)}")
    comp = d.get("component_group", "trivial")
    comp_order = d.get("component_order")
    comp_ref = None
    if comp_order is None:
        if comp in (None, "trivial"):
            comp_order = 1
        elif isinstance(comp, int):
            comp_order = comp
        elif isinstance(comp, str) and comp.startswith("catalogue:"):
            comp_ref = comp
            try:
                comp_order = catalogue_group(comp.split(":", 1)[1]).n
            except GroupError as exc:
                raise DescriptorError(str(exc)) from exc
        else:
            raise DescriptorError(f"bad component_group {comp!r}")
    dim = int(d.get("dimension", 0))
    order = d.get("order")
    if dim == 0 and order is None and comp_order:
        order = comp_order
    return GroupDescriptor(
        name=d.get("name", name_hint),
        dimension=dim,
        flags=frozenset(d.get("flags", ())),
        order=order,
        component_order=comp_order if dim > 0 else (order or comp_order),
        component_group=comp_ref,
        radical_dim=d.get("radical_dim"),
        center_order=d.get("center_order"),
        derived_dims=d.get("derived_dims"),
        unipotent_dim=d.get("unipotent_dim"),
        unipotent_series=d.get("unipotent_series"),
        complemented=frozenset(d.get("complemented", ())),
        h_action=d.get("h_action"),
    )


def group_to_dict(g: GroupDescriptor) -> dict:
    d = {"name": g.name, "dimension": g.dimension, "flags": sorted(g.flags)}
    for k in ("order", "radical_dim", "center_order", "unipotent_dim", "h_action"):
        v = getattr(g, k)
        if v is not None:
            d[k] = v
    if g.component_order != 1 and g.dimension > 0:
        d["component_order"] = g.component_order
    if g.component_group:
        d["component_group"] = g.component_group
    for k in ("derived_dims", "unipotent_series"):
        v = getattr(g, k)
        if v is not None:
            d[k] = list(v)
    if g.complemented:
        d["complemented"] = sorted(g.complemented)
    return d


def epi_from_dict(d) -> EpiDescriptor:
    if not isinstance(d, dict):
        raise DescriptorError("epimorphism descriptor must be an object")
    known = {"name", "source", "target", "kernel", "flags", "H", "h_cap", "supplement_kernel", "semidirect_by_H"}
    extra = set(d) - known
    if extra:
        raise DescriptorError(f"unknown epimorphism fields {sorted(extra)}")
    for k in ("source", "target", "kernel"):
        if k not in d:
            raise DescriptorError(f"epimorphism descriptor lacks {k!r}")
    sk = d.get("supplement_kernel")
    return EpiDescriptor(
        name=d.get("name", "beta"),
        source=group_from_dict(d["source"], "Gt"),
        target=group_from_dict(d["target"], "G"),
        kernel=group_from_dict(d["kernel"], "A"),
        flags=frozenset(d.get("flags", ())),
        H=d.get("H"),
        h_cap=d.get("h_cap"),
        supplement_kernel=group_from_dict(sk, "AnU") if sk is not None else None,
        semidirect_by_H=bool(d.get("semidirect_by_H", False)),
    )


def epi_to_dict(b: EpiDescriptor) -> dict:
    d = {
        "name": b.name,
        "source": group_to_dict(b.source),
        "target": group_to_dict(b.target),
        "kernel": group_to_dict(b.kernel),
        "flags": sorted(b.flags),
    }
    if b.H is not None:
        d["H"] = b.H
    if b.h_cap is not None:
        d["h_cap"] = list(b.h_cap)
    if b.supplement_kernel is not None:
        d["supplement_kernel"] = group_to_dict(b.supplement_kernel)
    if b.semidirect_by_H:
        d["semidirect_by_H"] = True
    return d
