"""Finite groups as multiplication tables on 0..n-1, and homomorphisms."""
from __future__ import annotations

import re
from functools import cached_property

SIZE_CAP = 1000


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A group on elements 0..n-1 given by its Cayley table.

    ``labels`` are display names; ``perm_gens`` keeps the permutation
    presentation when the group came from one.
    """

    def __init__(self, table, labels=None, name: str = "G", perm_gens=None, check: bool = True):
        self.table = [list(r) for r in table]
        self.n = len(self.table)
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(self.n)]
        self.perm_gens = perm_gens
        if check:
            self._validate_shape()
        self.e = self._find_identity()
        inv = [None] * self.n
        for a in range(self.n):
            for b in range(self.n):
                if self.table[a][b] == self.e and self.table[b][a] == self.e:
                    inv[a] = b
                    break
            else:
                raise GroupError(f"{self.name}: element {a} has no inverse")
        self._inv = inv
        if check:
            self._validate_associative()

    def _find_identity(self):
        for a in range(self.n):
            if self.table[a][a] == a and all(self.table[a][b] == b == self.table[b][a] for b in range(self.n)):
                return a
        raise GroupError(f"{self.name}: no identity element")

    def _validate_shape(self):
        n = self.n
        if n == 0:
            raise GroupError("empty table")
        for r in self.table:
            if len(r) != n or any(not (isinstance(x, int) and 0 <= x < n) for x in r):
                raise GroupError(f"{self.name}: table is not a closed n x n table")

    def _validate_associative(self):
        n = self.n
        T = self.table
        if n <= 64:
            for a in range(n):
                Ta = T[a]
                for b in range(n):
                    ab = Ta[b]
                    Tab, Tb = T[ab], T[b]
                    for c in range(n):
                        if Tab[c] != Ta[Tb[c]]:
                            raise GroupError(f"{self.name}: not associative at ({a},{b},{c})")
        else:
            # Light's test: associativity on a generating set suffices
            for g in self.generators():
                for a in range(n):
                    ag = T[a][g]
                    for c in range(n):
                        if T[ag][c] != T[a][T[g][c]]:
                            raise GroupError(f"{self.name}: not associative at ({a},{g},{c})")

    # -- constructors
    @classmethod
    def from_permutations(cls, gens, degree: int | None = None, name: str = "G") -> "FiniteGroup":
        """Close a list of permutations (tuples of images of 0..d-1)."""
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        gens = [g + tuple(range(len(g), degree)) for g in gens]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise GroupError(f"{g} is not a permutation of 0..{degree - 1}")
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(g[x[i]] for i in range(degree))  # apply x then g
                    if y not in index:
                        if len(elems) >= SIZE_CAP:
                            raise GroupError(f"group exceeds size cap {SIZE_CAP}")
                        index[y] = len(elems)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        n = len(elems)
        # product a*b = "apply b then a" (right-to-left composition)
        table = [[index[tuple(a[b[i]] for i in range(degree))] for b in elems] for a in elems]
        labels = [format_cycles(x) for x in elems]
        return cls(table, labels, name, perm_gens=gens, check=False)

    @classmethod
    def from_cycles(cls, gens, name: str = "G") -> "FiniteGroup":
        perms = [parse_cycles(g) for g in gens]
        degree = max((len(p) for p in perms), default=1)
        return cls.from_permutations(perms, degree, name)

    # -- element arithmetic
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = self.e
        for _ in range(k):
            r = self.table[r][a]
        return r

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self._inv[g]]

    def order(self) -> int:
        return self.n

    def __len__(self):
        return self.n

    def elements(self):
        return range(self.n)

    @cached_property
    def element_orders(self) -> list:
        out = []
        for a in range(self.n):
            k, x = 1, a
            while x != self.e:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return out

    def is_abelian(self) -> bool:
        T = self.table
        return all(T[a][b] == T[b][a] for a in range(self.n) for b in range(a))

    # -- subgroups
    def closure(self, gens) -> frozenset:
        T = self.table
        gens = [g for g in gens if g != self.e]
        seen = {self.e}
        frontier = [self.e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = T[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def generators(self) -> list:
        """A small generating set, chosen greedily with high-order elements first."""
        return list(self._generators)

    @cached_property
    def _generators(self) -> tuple:
        gens, H = [], frozenset([self.e])
        for a in sorted(range(self.n), key=lambda x: -self.element_orders[x]):
            if len(H) == self.n:
                break
            if a not in H:
                gens.append(a)
                H = self.closure(gens)
        return tuple(gens)

    def is_subgroup(self, S) -> bool:
        S = set(S)
        if self.e not in S:
            return False
        return all(self.table[a][self._inv[b]] in S for a in S for b in S)

    def is_normal(self, S) -> bool:
        S = frozenset(S)
        return all(self.conj(g, x) in S for g in self.generators() or [self.e] for x in S)

    def product_set(self, A, B) -> frozenset:
        T = self.table
        return frozenset(T[a][b] for a in A for b in B)

    @cached_property
    def _subgroups(self) -> tuple:
        if self.n > SIZE_CAP:
            raise GroupError(f"subgroup enumeration capped at order {SIZE_CAP}")
        # every subgroup is a join of cyclic ones; grow joins one cyclic at a time
        cyclic = {}
        for a in range(self.n):
            cyclic.setdefault(self.closure([a]), a)
        gens = {C: [a] for C, a in cyclic.items()}
        frontier = list(cyclic)
        while frontier:
            nxt = []
            for H in frontier:
                for C, c in cyclic.items():
                    if c in H:
                        continue
                    J = self.closure(gens[H] + [c])
                    if J not in gens:
                        gens[J] = gens[H] + [c]
                        nxt.append(J)
            frontier = nxt
        return tuple(sorted(gens, key=lambda s: (len(s), sorted(s))))

    def subgroups(self) -> tuple:
        """Every subgroup as a frozenset, sorted by (order, elements)."""
        return self._subgroups

    def normal_subgroups(self) -> list:
        return [S for S in self.subgroups() if self.is_normal(S)]

    def maximal_subgroups(self) -> list:
        proper = [S for S in self.subgroups() if len(S) < self.n]
        return [S for S in proper if not any(S < T for T in proper)]

    def subgroup(self, S, name: str | None = None):
        """(group on S, inclusion hom)."""
        S = sorted(S)
        if not self.is_subgroup(S):
            raise GroupError("not a subgroup")
        idx = {x: i for i, x in enumerate(S)}
        table = [[idx[self.table[a][b]] for b in S] for a in S]
        H = FiniteGroup(table, [self.labels[x] for x in S], name or f"sub({self.name})", check=False)
        return H, GroupHom(H, self, list(S), check=False)

    def quotient(self, N, name: str | None = None):
        """(G/N, projection hom)."""
        N = frozenset(N)
        if not (self.is_subgroup(N) and self.is_normal(N)):
            raise GroupError("quotient needs a normal subgroup")
        coset_of = [None] * self.n
        reps = []
        for g in range(self.n):
            if coset_of[g] is None:
                k = len(reps)
                reps.append(g)
                for x in N:
                    coset_of[self.table[g][x]] = k
        table = [[coset_of[self.table[a][b]] for b in reps] for a in reps]
        Q = FiniteGroup(table, [f"{self.labels[r]}N" for r in reps], name or f"{self.name}/N", check=False)
        return Q, GroupHom(self, Q, coset_of, check=False)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.n})"


def _gens_of(G: FiniteGroup, H) -> list:
    gens, cur = [], frozenset([G.e])
    for a in sorted(H):
        if a not in cur:
            gens.append(a)
            cur = G.closure(gens)
            if cur == H:
                break
    return gens


class GroupHom:
    """phi: source -> target given by the image of every element."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, check: bool = True):
        self.source = source
        self.target = target
        self.images = list(images)
        if len(self.images) != source.n:
            raise GroupError("image list has the wrong length")
        if check:
            bad = self.violation()
            if bad is not None:
                a, b = bad
                raise GroupError(f"not a homomorphism: phi({a}*{b}) != phi({a})*phi({b})")

    def violation(self):
        S, T, im = self.source.table, self.target.table, self.images
        if any(not (0 <= x < self.target.n) for x in im):
            return (None, None)
        for a in range(self.source.n):
            for b in range(self.source.n):
                if im[S[a][b]] != T[im[a]][im[b]]:
                    return (a, b)
        return None

    def __call__(self, a: int) -> int:
        return self.images[a]

    def kernel(self) -> frozenset:
        return frozenset(a for a, x in enumerate(self.images) if x == self.target.e)

    def image(self) -> frozenset:
        return frozenset(self.images)

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.n

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.n

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target is not self.source:
            raise GroupError("composition of incompatible homs")
        return GroupHom(other.source, self.target, [self.images[x] for x in other.images], check=False)

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and other.source is self.source
            and other.target is self.target
            and other.images == self.images
        )

    def __hash__(self):
        return hash(tuple(self.images))

    def __repr__(self):
        return f"GroupHom({self.source.name} -> {self.target.name})"


def extend_assignment(G: FiniteGroup, H: FiniteGroup, gens, assign):
    """Images of all of G from images of ``gens``, or None if no hom does that.

    Consistency along every Cayley-graph edge x -> x*g is checked, which is
    exactly the homomorphism condition on a generating set.
    """
    images = [None] * G.n
    images[G.e] = H.e
    frontier = [G.e]
    GT, HT = G.table, H.table
    while frontier:
        nxt = []
        for x in frontier:
            ix = images[x]
            for g, hg in zip(gens, assign):
                y = GT[x][g]
                v = HT[ix][hg]
                if images[y] is None:
                    images[y] = v
                    nxt.append(y)
                elif images[y] != v:
                    return None
        frontier = nxt
    return images


def homomorphisms(G: FiniteGroup, H: FiniteGroup, surjective_only: bool = False):
    """All homs G -> H, found by assigning images to a generating set."""
    if surjective_only and G.n % H.n:
        return []
    gens = G.generators()
    cands = []
    for g in gens:
        og = G.element_orders[g]
        cands.append([h for h in range(H.n) if og % H.element_orders[h] == 0])
    out = []

    def rec(i, assign):
        if i == len(gens):
            if surjective_only and len(H.closure(assign)) != H.n:
                return
            images = extend_assignment(G, H, gens, assign)
            if images is not None:
                out.append(GroupHom(G, H, images, check=False))
            return
        for h in cands[i]:
            rec(i + 1, assign + [h])

    rec(0, [])
    return out


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """A x B with (a, b) stored at index a + |A| * b."""
    nA = A.n
    table = [
        [A.table[i % nA][j % nA] + nA * B.table[i // nA][j // nA] for j in range(A.n * B.n)]
        for i in range(A.n * B.n)
    ]
    labels = [f"({A.labels[i % nA]},{B.labels[i // nA]})" for i in range(A.n * B.n)]
    return FiniteGroup(table, labels, name or f"{A.name}x{B.name}", check=False)


# -- cycle notation -----------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> tuple:
    """'(1 2 3)(4 5)' (1-based points) -> image tuple on 0..d-1."""
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return (0,)
    if _CYCLE.sub("", text).strip():
        raise GroupError(f"bad cycle notation {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
        if any(x < 1 for x in pts) or len(set(pts)) != len(pts):
            raise GroupError(f"bad cycle {body!r}")
        cycles.append([x - 1 for x in pts])
    degree = max((max(c) for c in cycles if c), default=0) + 1
    img = list(range(degree))
    seen = set()
    for c in cycles:
        if seen & set(c):
            raise GroupError(f"cycles in {text!r} are not disjoint")
        seen |= set(c)
        for i, x in enumerate(c):
            img[x] = c[(i + 1) % len(c)]
    return tuple(img)


def format_cycles(perm) -> str:
    seen, parts = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = perm[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) or "()"
