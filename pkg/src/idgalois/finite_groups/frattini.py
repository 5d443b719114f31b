"""Frattini subgroups, supplements and the Frattini-epimorphism test."""
from __future__ import annotations

from .group import SIZE_CAP, FiniteGroup, GroupError, GroupHom


def _cap(G: FiniteGroup):
    if G.n > SIZE_CAP:
        raise GroupError(f"order {G.n} exceeds size cap {SIZE_CAP}")


def frattini_subgroup(G: FiniteGroup) -> frozenset:
    """Intersection of all maximal subgroups (the whole group is never maximal)."""
    _cap(G)
    maxes = G.maximal_subgroups()
    if not maxes:
        return frozenset([G.e])
    out = frozenset(range(G.n))
    for M in maxes:
        out &= M
    return out


def _require_surjective(phi: GroupHom):
    if not phi.is_surjective():
        raise GroupError("homomorphism is not surjective")
    _cap(phi.source)


def supplements(G: FiniteGroup, A) -> list:
    """All subgroups U with A*U = G, in subgroup order."""
    A = frozenset(A)
    out = []
    for U in G.subgroups():
        # |AU| = |A||U|/|A n U|
        if len(A) * len(U) == G.n * len(A & U):
            out.append(U)
    return out


def is_frattini_epi(phi: GroupHom) -> bool:
    """No proper subgroup U of the source with ker(phi)*U = source."""
    _require_surjective(phi)
    G = phi.source
    return all(len(U) == G.n for U in supplements(G, phi.kernel()))


def frattini_criterion(phi: GroupHom) -> bool:
    """ker(phi) inside Phi(source)."""
    _require_surjective(phi)
    return phi.kernel() <= frattini_subgroup(phi.source)


def minimal_supplement(G: FiniteGroup, A) -> frozenset:
    """A supplement of A that is minimal under inclusion.

    Among minimal ones the smallest order wins, then the lexicographically
    least sorted element list.  The restriction U -> G/A is checked to be
    Frattini before returning.
    """
    _cap(G)
    A = frozenset(A)
    if not (G.is_subgroup(A) and G.is_normal(A)):
        raise GroupError("A must be a normal subgroup")
    sups = supplements(G, A)
    minimal = [U for U in sups if not any(V < U for V in sups)]
    U = min(minimal, key=lambda S: (len(S), sorted(S)))
    Q, pi = G.quotient(A)
    H, inc = G.subgroup(U)
    restricted = pi.compose(inc)
    if not is_frattini_epi(restricted):
        raise AssertionError("minimal supplement does not give a Frattini restriction")
    return U
