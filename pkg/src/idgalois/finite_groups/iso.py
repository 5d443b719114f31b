"""Isomorphism search by backtracking over generator images."""
from __future__ import annotations

from collections import Counter

from .group import FiniteGroup, GroupError, GroupHom, extend_assignment

ISO_CAP = 200


def invariants(G: FiniteGroup) -> tuple:
    return (G.n, G.is_abelian(), tuple(sorted(Counter(G.element_orders).items())))


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """An isomorphism G -> H as a GroupHom, or None."""
    if G.n > ISO_CAP or H.n > ISO_CAP:
        raise GroupError(f"isomorphism search capped at order {ISO_CAP}")
    if invariants(G) != invariants(H):
        return None
    gens = G.generators()
    cands = [[h for h in range(H.n) if H.element_orders[h] == G.element_orders[g]] for g in gens]

    def rec(i, assign):
        if i == len(gens):
            if len(H.closure(assign)) != H.n:
                return None
            images = extend_assignment(G, H, gens, assign)
            if images is None or len(set(images)) != H.n:
                return None
            return images
        for h in cands[i]:
            if h in assign:
                continue
            got = rec(i + 1, assign + [h])
            if got is not None:
                return got
        return None

    images = rec(0, [])
    return None if images is None else GroupHom(G, H, images, check=False)


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None
