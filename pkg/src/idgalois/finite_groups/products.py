"""Semidirect products, fibre products and the multiplication map of type mu."""
from __future__ import annotations

from dataclasses import dataclass

from .group import SIZE_CAP, FiniteGroup, GroupError, GroupHom, direct_product, extend_assignment
from .iso import find_isomorphism


# -- actions ------------------------------------------------------------------

def check_action(N: FiniteGroup, H: FiniteGroup, action) -> None:
    """``action[h]`` is the image list of an automorphism of N, and h -> action[h] is a hom."""
    if len(action) != H.n:
        raise GroupError(f"action needs {H.n} automorphisms, got {len(action)}")
    for h, a in enumerate(action):
        a = list(a)
        if len(a) != N.n or sorted(a) != list(range(N.n)):
            raise GroupError(f"action of {h} is not a bijection of N")
        phi = GroupHom(N, N, a, check=False)
        if phi.violation() is not None:
            raise GroupError(f"action of {h} is not an automorphism of N")
    for h1 in range(H.n):
        for h2 in range(H.n):
            h12 = H.table[h1][h2]
            a1, a2 = action[h1], action[h2]
            if any(action[h12][x] != a1[a2[x]] for x in range(N.n)):
                raise GroupError(f"action is not a homomorphism at ({h1},{h2})")


def action_from_generators(N: FiniteGroup, H: FiniteGroup, gen_images: dict) -> list:
    """Extend automorphisms given on generators of H (dict h -> image list) to all of H."""
    gens = list(gen_images)
    if len(H.closure(gens)) != H.n:
        raise GroupError("the given elements do not generate H")
    # work inside Sym(N): compose image lists
    auts = [tuple(gen_images[g]) for g in gens]
    out = [None] * H.n
    out[H.e] = tuple(range(N.n))
    frontier = [H.e]
    while frontier:
        nxt = []
        for x in frontier:
            for g, a in zip(gens, auts):
                y = H.table[x][g]
                v = tuple(out[x][a[i]] for i in range(N.n))
                if out[y] is None:
                    out[y] = v
                    nxt.append(y)
                elif out[y] != v:
                    raise GroupError("generator images do not define an action")
        frontier = nxt
    out = [list(a) for a in out]
    check_action(N, H, out)
    return out


def trivial_action(N: FiniteGroup, H: FiniteGroup) -> list:
    return [list(range(N.n)) for _ in range(H.n)]


def conjugation_action(G: FiniteGroup, N, H) -> list:
    """H acting on the normal subgroup N by conjugation, in subgroup-local indices."""
    Ns, Hs = sorted(N), sorted(H)
    idx = {x: i for i, x in enumerate(Ns)}
    return [[idx[G.conj(h, n)] for n in Ns] for h in Hs]


# -- semidirect ---------------------------------------------------------------

@dataclass
class Semidirect:
    group: FiniteGroup
    inclusion: GroupHom  # N -> N x| H
    projection: GroupHom  # N x| H -> H
    section: GroupHom  # H -> N x| H

    def pair(self, x: int) -> tuple:
        nN = self.inclusion.source.n
        return x % nN, x // nN

    def index(self, n: int, h: int) -> int:
        return n + self.inclusion.source.n * h


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action, name: str | None = None, check: bool = True) -> Semidirect:
    """N x| H with (n,h)(n',h') = (n h(n'), hh'); the pair (n,h) sits at n + |N| h."""
    if check:
        check_action(N, H, action)
    nN, size = N.n, N.n * H.n
    if size > SIZE_CAP:
        raise GroupError(f"product order {size} exceeds size cap {SIZE_CAP}")
    NT, HT = N.table, H.table
    table = []
    for x in range(size):
        n1, h1 = x % nN, x // nN
        act = action[h1]
        row = []
        for y in range(size):
            n2, h2 = y % nN, y // nN
            row.append(NT[n1][act[n2]] + nN * HT[h1][h2])
        table.append(row)
    labels = [f"({N.labels[x % nN]},{H.labels[x // nN]})" for x in range(size)]
    G = FiniteGroup(table, labels, name or f"{N.name}:{H.name}", check=False)
    inc = GroupHom(N, G, [n + nN * H.e for n in range(nN)], check=False)
    proj = GroupHom(G, H, [x // nN for x in range(size)], check=False)
    sec = GroupHom(H, G, [N.e + nN * h for h in range(H.n)], check=False)
    return Semidirect(G, inc, proj, sec)


# -- fibre product ------------------------------------------------------------

@dataclass
class FibreProduct:
    group: FiniteGroup
    pairs: list  # element index -> (a, b)
    pr1: GroupHom
    pr2: GroupHom
    phi1: GroupHom
    phi2: GroupHom

    def mediator(self, psi1: GroupHom, psi2: GroupHom) -> GroupHom:
        """The unique X -> A x_C B with pr_i o m = psi_i."""
        if psi1.source is not psi2.source:
            raise GroupError("cone legs have different sources")
        X = psi1.source
        if any(self.phi1(psi1(x)) != self.phi2(psi2(x)) for x in range(X.n)):
            raise GroupError("not a cone: phi1 psi1 != phi2 psi2")
        where = {ab: i for i, ab in enumerate(self.pairs)}
        m = GroupHom(X, self.group, [where[(psi1(x), psi2(x))] for x in range(X.n)])
        return m

    def mediator_is_unique(self, psi1: GroupHom, psi2: GroupHom) -> bool:
        """Every hom X -> P with the right projections equals the mediator."""
        from .group import homomorphisms

        m = self.mediator(psi1, psi2)
        for f in homomorphisms(psi1.source, self.group):
            if self.pr1.compose(f) == psi1 and self.pr2.compose(f) == psi2 and f != m:
                return False
        return True


def fibre_product(phi1: GroupHom, phi2: GroupHom, name: str | None = None) -> FibreProduct:
    if phi1.target is not phi2.target:
        raise GroupError("fibre product needs homs into the same group")
    A, B = phi1.source, phi2.source
    pairs = [(a, b) for b in range(B.n) for a in range(A.n) if phi1(a) == phi2(b)]
    where = {ab: i for i, ab in enumerate(pairs)}
    table = [[where[(A.table[a][c], B.table[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"({A.labels[a]},{B.labels[b]})" for a, b in pairs]
    P = FiniteGroup(table, labels, name or f"{A.name}x_{phi1.target.name}{B.name}", check=False)
    pr1 = GroupHom(P, A, [a for a, _ in pairs], check=False)
    pr2 = GroupHom(P, B, [b for _, b in pairs], check=False)
    if phi1.is_surjective() and phi2.is_surjective():
        C = phi1.target
        if P.n * C.n != A.n * B.n:
            raise AssertionError("fibre product order law violated")
    return FibreProduct(P, pairs, pr1, pr2, phi1, phi2)


# -- type mu ------------------------------------------------------------------

@dataclass
class TypeMu:
    mu: GroupHom
    semidirect: Semidirect
    kernel: frozenset
    expected_kernel: frozenset


def type_mu_epi(G: FiniteGroup, N, H) -> TypeMu:
    """mu: N x| H -> G, (n,h) -> n h, with H acting on N by conjugation."""
    N, H = frozenset(N), frozenset(H)
    if not (G.is_subgroup(N) and G.is_normal(N)):
        raise GroupError("N must be a normal subgroup")
    if not G.is_subgroup(H):
        raise GroupError("H must be a subgroup")
    if len(G.product_set(N, H)) != G.n:
        raise GroupError("N*H is not the whole group")
    Ng, _ = G.subgroup(N, "N")
    Hg, _ = G.subgroup(H, "H")
    Ns, Hs = sorted(N), sorted(H)
    sd = semidirect_product(Ng, Hg, conjugation_action(G, N, H), name=f"N:H")
    nN = Ng.n
    images = [G.mul(Ns[x % nN], Hs[x // nN]) for x in range(sd.group.n)]
    mu = GroupHom(sd.group, G, images)
    ker = mu.kernel()
    nidx = {x: i for i, x in enumerate(Ns)}
    hidx = {x: i for i, x in enumerate(Hs)}
    expected = frozenset(nidx[G.inv(g)] + nN * hidx[g] for g in N & H)
    if ker != expected or len(ker) != len(N & H):
        raise AssertionError("type-mu kernel differs from {(g^-1, g)}")
    return TypeMu(mu, sd, ker, expected)


# -- the three products of the finite-kernel case ----------------------------

def seven_two_isos(G0: FiniteGroup, A: FiniteGroup, H: FiniteGroup, act_G0, act_A) -> dict:
    """Build G0 x| (A x| H), (G0 x A) x| H and A x| (G0 x| H) and test them pairwise.

    ``act_G0`` and ``act_A`` are actions of H (lists of image lists); G0 and A
    act trivially on each other.
    """
    check_action(G0, H, act_G0)
    check_action(A, H, act_A)
    nG, nA = G0.n, A.n
    if nG * nA * H.n > 200:
        raise GroupError("order above the isomorphism search cap 200")

    AH = semidirect_product(A, H, act_A)
    # (a,h) acts on G0 through h
    act1 = [act_G0[x // nA] for x in range(AH.group.n)]
    P1 = semidirect_product(G0, AH.group, act1, name="G0:(A:H)").group

    GA = direct_product(G0, A)
    act2 = [[act_G0[h][x % nG] + nG * act_A[h][x // nG] for x in range(GA.n)] for h in range(H.n)]
    P2 = semidirect_product(GA, H, act2, name="(G0xA):H").group

    GH = semidirect_product(G0, H, act_G0)
    act3 = [act_A[x // nG] for x in range(GH.group.n)]
    P3 = semidirect_product(A, GH.group, act3, name="A:(G0:H)").group

    groups = {"G0:(A:H)": P1, "(G0xA):H": P2, "A:(G0:H)": P3}
    names = list(groups)
    pairs = {}
    for i in range(3):
        for j in range(i + 1, 3):
            pairs[f"{names[i]} ~ {names[j]}"] = find_isomorphism(groups[names[i]], groups[names[j]]) is not None
    return {
        "orders": {k: g.n for k, g in groups.items()},
        "isomorphic": pairs,
        "all_isomorphic": all(pairs.values()),
        "groups": groups,
    }
