"""Finite groups as explicit multiplication data.

Elements are the indices 0..order-1.  Small groups carry a closed
multiplication table and are validated exhaustively; groups built from
permutations (needed for wreath targets like S_8) multiply on demand
through their permutation action, which is a group by construction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

DESK_ORDER_BOUND = 64


class GroupError(Exception):
    """Structural problem with group data."""


class SizeError(GroupError):
    """Requested computation exceeds the desk-scale bounds."""


def perm_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Composition a∘b acting on the left: (a∘b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(a)))


def perm_inv(a: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def mulclose(gens: Iterable[tuple[int, ...]], limit: int = 50000) -> list[tuple[int, ...]]:
    """Close a set of permutations under composition (BFS, deterministic order)."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return []
    n = len(gens[0])
    identity = tuple(range(n))
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = perm_mul(g, x)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    new.append(y)
                    if len(seen) > limit:
                        raise SizeError(f"permutation closure exceeded {limit} elements")
        frontier = new
    return sorted(order)


class FiniteGroup:
    """A finite group on the index set 0..order-1."""

    def __init__(self, name: str, mul_table: Optional[Sequence[Sequence[int]]] = None,
                 perms: Optional[Sequence[tuple[int, ...]]] = None, validate: bool = True):
        if mul_table is None and perms is None:
            raise GroupError("need a multiplication table or a permutation list")
        self.name = name
        self.perms = [tuple(p) for p in perms] if perms is not None else None
        if mul_table is not None:
            self.order = len(mul_table)
            self._table = [tuple(int(x) for x in row) for row in mul_table]
        else:
            self.order = len(self.perms)
            self._perm_index = {p: i for i, p in enumerate(self.perms)}
            if self.order <= 2048:
                self._table = [
                    tuple(self._perm_index[perm_mul(self.perms[a], self.perms[b])]
                          for b in range(self.order))
                    for a in range(self.order)
                ]
            else:
                self._table = None
        self.identity = self._find_identity()
        self._inv = self._build_inverses()
        if validate:
            self._validate()

    # construction helpers

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(f"C{n}", mul_table=table)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        perms = sorted(itertools.permutations(range(n)))
        return cls(f"S{n}", perms=perms)

    @classmethod
    def direct_product(cls, a: "FiniteGroup", b: "FiniteGroup") -> "FiniteGroup":
        order = a.order * b.order
        def enc(x, y):
            return x * b.order + y
        table = []
        for i in range(order):
            x1, y1 = divmod(i, b.order)
            row = []
            for j in range(order):
                x2, y2 = divmod(j, b.order)
                row.append(enc(a.mul(x1, x2), b.mul(y1, y2)))
            table.append(row)
        return cls(f"{a.name}x{b.name}", mul_table=table)

    @classmethod
    def from_permutations(cls, name: str, gens: Iterable[Sequence[int]]) -> "FiniteGroup":
        perms = mulclose([tuple(g) for g in gens])
        return cls(name, perms=perms)

    # core operations

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return self._perm_index[perm_mul(self.perms[a], self.perms[b])]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        return self.mul(self.mul(g, x), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in range(self.order) for b in range(a))

    def conjugacy_classes(self) -> list[list[int]]:
        """Conjugacy classes, each sorted, ordered by smallest member."""
        seen = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls_ = sorted({self.conj(g, x) for g in range(self.order)})
            seen.update(cls_)
            classes.append(cls_)
        return classes

    def _find_identity(self) -> int:
        for e in range(self.order):
            if all(self.mul(e, x) == x and self.mul(x, e) == x for x in range(min(self.order, 8))):
                if all(self.mul(e, x) == x for x in range(self.order)):
                    return e
        raise GroupError(f"group {self.name!r} has no identity element")

    def _build_inverses(self) -> list[int]:
        inv = [-1] * self.order
        for a in range(self.order):
            if self.perms is not None and self._table is None:
                inv[a] = self._perm_index[perm_inv(self.perms[a])]
                continue
            for b in range(self.order):
                if self.mul(a, b) == self.identity:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise GroupError(f"element {a} of {self.name!r} has no inverse")
        return inv

    def _validate(self) -> None:
        if self.perms is not None:
            return  # closed set of permutations is a group by construction
        if self.order > DESK_ORDER_BOUND:
            return
        n = self.order
        for row in self._table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise GroupError(f"multiplication table of {self.name!r} is not closed")
        for a in range(n):
            for b in range(n):
                ab = self.mul(a, b)
                for c in range(n):
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        raise GroupError(
                            f"associativity fails in {self.name!r} at ({a},{b},{c})")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", mem)
        G = self.parent
        s = set(mem)
        if G.identity not in s:
            raise GroupError("subgroup must contain the identity")
        for a in mem:
            if G.inv(a) not in s:
                raise GroupError(f"subgroup not closed under inverse at {a}")
            for b in mem:
                if G.mul(a, b) not in s:
                    raise GroupError(f"subgroup not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in set(self.members)

    def as_group(self, name: Optional[str] = None) -> tuple[FiniteGroup, dict[int, int]]:
        """The subgroup as a standalone group plus the parent->local index map."""
        index = {g: i for i, g in enumerate(self.members)}
        table = [[index[self.parent.mul(a, b)] for b in self.members] for a in self.members]
        label = name or f"{self.parent.name}_sub{len(self.members)}"
        return FiniteGroup(label, mul_table=table), index


@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def is_homomorphism(self) -> bool:
        S, T = self.source, self.target
        if self.images[S.identity] != T.identity:
            return False
        return all(self.images[S.mul(a, b)] == T.mul(self.images[a], self.images[b])
                   for a in range(S.order) for b in range(S.order))

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self ∘ inner."""
        if inner.target is not self.source and inner.target.order != self.source.order:
            raise GroupError("homomorphisms not composable")
        return GroupHom(inner.source, self.target,
                        tuple(self.images[inner.images[x]] for x in range(inner.source.order)))

    @classmethod
    def identity_hom(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, tuple(range(G.order)))


def close_subset(G: FiniteGroup, seed: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by a subset, as a sorted member tuple."""
    members = {G.identity}
    frontier = list(set(seed) - members)
    members.update(frontier)
    while frontier:
        new = []
        for x in frontier:
            for g in list(members):
                for y in (G.mul(x, g), G.mul(g, x), G.inv(x)):
                    if y not in members:
                        members.add(y)
                        new.append(y)
        frontier = new
    return tuple(sorted(members))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by closing one extra generator at a time."""
    if G.order > DESK_ORDER_BOUND:
        raise SizeError(f"|{G.name}| = {G.order} exceeds the bound {DESK_ORDER_BOUND}")
    found = {(G.identity,)}
    frontier = [(G.identity,)]
    while frontier:
        new = []
        for members in frontier:
            mem_set = set(members)
            for g in range(G.order):
                if g in mem_set:
                    continue
                closed = close_subset(G, mem_set | {g})
                if closed not in found:
                    found.add(closed)
                    new.append(closed)
        frontier = new
    return [Subgroup(G, members) for members in sorted(found, key=lambda m: (len(m), m))]


def subgroups_up_to_conjugacy(G: FiniteGroup) -> list[Subgroup]:
    """One representative per conjugacy class, the lexicographically least member set."""
    classes: dict[frozenset, tuple[int, ...]] = {}
    for sub in all_subgroups(G):
        orbit = set()
        best = sub.members
        for g in range(G.order):
            conj = tuple(sorted(G.conj(g, x) for x in sub.members))
            orbit.add(conj)
            if conj < best:
                best = conj
        key = frozenset(orbit)
        classes[key] = best
    reps = sorted(classes.values(), key=lambda m: (len(m), m))
    return [Subgroup(G, m) for m in reps]


def normalizer(G: FiniteGroup, K: Subgroup) -> Subgroup:
    mem = set(K.members)
    norm = [g for g in range(G.order) if {G.conj(g, x) for x in K.members} == mem]
    return Subgroup(G, tuple(norm))


def weyl(G: FiniteGroup, K: Subgroup) -> FiniteGroup:
    return weyl_with_projection(G, K)[0]


def weyl_with_projection(G: FiniteGroup, K: Subgroup) -> tuple[FiniteGroup, dict[int, int], list[int]]:
    """Weyl group W(K) = N(K)/K with the coset projection and a section.

    Returns (W, proj, section): proj maps members of N(K) to W-indices and
    section picks the least representative of each coset.
    """
    if set(K.members) - set(range(G.order)):
        raise GroupError("K is not a subgroup of G")
    N = normalizer(G, K)
    kset = set(K.members)
    cosets: list[tuple[int, ...]] = []
    proj: dict[int, int] = {}
    for n in N.members:
        if n in proj:
            continue
        coset = tuple(sorted(G.mul(n, k) for k in K.members))
        idx = len(cosets)
        cosets.append(coset)
        for x in coset:
            proj[x] = idx
    section = [c[0] for c in cosets]
    table = [[proj[G.mul(section[a], section[b])] for b in range(len(cosets))]
             for a in range(len(cosets))]
    W = FiniteGroup(f"W({K.parent.name})", mul_table=table)
    return W, proj, section


def wreath_product(m: int, n: int) -> tuple[FiniteGroup, list[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]]:
    """The wreath product S_m wr S_n as pairs ((s_1..s_n), sigma).

    Multiplication is the semidirect-product rule (s,sigma)(t,tau) =
    (s * sigma.t, sigma tau) with (sigma.t)_j = t_{sigma^{-1}(j)}.
    """
    sm = sorted(itertools.permutations(range(m)))
    sn = sorted(itertools.permutations(range(n)))
    elements = [(tup, sigma) for tup in itertools.product(sm, repeat=n) for sigma in sn]
    index = {el: i for i, el in enumerate(elements)}

    def mul(x, y):
        (s, sigma), (t, tau) = x, y
        sigma_inv = perm_inv(sigma)
        twisted = tuple(t[sigma_inv[j]] for j in range(n))
        prod = tuple(perm_mul(s[j], twisted[j]) for j in range(n))
        return (prod, perm_mul(sigma, tau))

    table = [[index[mul(x, y)] for y in elements] for x in elements]
    G = FiniteGroup(f"S{m}wrS{n}", mul_table=table, validate=(len(elements) <= DESK_ORDER_BOUND))
    return G, elements


def wreath_embedding(m: int, n: int, size_bound: int = 8) -> GroupHom:
    """The standard inclusion S_m wr S_n -> S_{mn} on the product index set.

    A point (i, j) with i < m, j < n is flattened as j*m + i; the pair
    (s, sigma) sends (i, j) to (s_{sigma(j)}(i), sigma(j)).
    """
    if m * n > size_bound:
        raise SizeError(f"m*n = {m * n} exceeds the symmetric-group bound {size_bound}")
    W, elements = wreath_product(m, n)
    target = FiniteGroup.symmetric(m * n)
    perm_index = {p: i for i, p in enumerate(target.perms)}
    images = []
    for (s, sigma) in elements:
        perm = [0] * (m * n)
        for j in range(n):
            for i in range(m):
                jj = sigma[j]
                perm[j * m + i] = jj * m + s[jj][i]
        images.append(perm_index[tuple(perm)])
    return GroupHom(W, target, tuple(images))


def cyclic_embedding(p: int, size_bound: int = 7) -> GroupHom:
    """C_p -> S_p sending the generator to the cycle (0 1 ... p-1)."""
    if p > size_bound:
        raise SizeError(f"p = {p} exceeds the bound {size_bound}")
    C = FiniteGroup.cyclic(p)
    S = FiniteGroup.symmetric(p)
    perm_index = {perm: i for i, perm in enumerate(S.perms)}
    cycle = tuple((i + 1) % p for i in range(p))
    images = []
    g = tuple(range(p))
    for _ in range(p):
        images.append(perm_index[g])
        g = perm_mul(cycle, g)
    return GroupHom(C, S, tuple(images))


def sign_hom(n: int) -> GroupHom:
    """The sign map S_n -> C2."""
    S = FiniteGroup.symmetric(n)
    C2 = FiniteGroup.cyclic(2)
    images = []
    for perm in S.perms:
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        images.append(inversions % 2)
    return GroupHom(S, C2, tuple(images))


def find_isomorphism(A: FiniteGroup, B: FiniteGroup) -> Optional[GroupHom]:
    """Search for an isomorphism A -> B; returns the lexicographically least one.

    Backtracking on a generating sequence of A, with element orders as the
    pruning invariant.  Intended for desk-scale groups only.
    """
    if A.order != B.order:
        return None
    orders_a = [A.element_order(x) for x in range(A.order)]
    orders_b = [B.element_order(x) for x in range(B.order)]
    if sorted(orders_a) != sorted(orders_b):
        return None

    gens: list[int] = []
    generated = close_subset(A, [])
    while len(generated) < A.order:
        nxt = min(x for x in range(A.order) if x not in set(generated))
        gens.append(nxt)
        generated = close_subset(A, gens)

    def words_for_all() -> list[tuple[int, ...]]:
        # express every element of A as a product of the chosen generators
        words = {A.identity: ()}
        frontier = [A.identity]
        while frontier:
            new = []
            for x in frontier:
                for gi, g in enumerate(gens):
                    y = A.mul(x, g)
                    if y not in words:
                        words[y] = words[x] + (gi,)
                        new.append(y)
            frontier = new
        return [words[x] for x in range(A.order)]

    words = words_for_all()

    def eval_word(word: tuple[int, ...], images: list[int]) -> int:
        acc = B.identity
        for gi in word:
            acc = B.mul(acc, images[gi])
        return acc

    def extend(pos: int, images: list[int]) -> Optional[list[int]]:
        if pos == len(gens):
            full = [eval_word(w, images) for w in words]
            if len(set(full)) != A.order:
                return None
            cand = GroupHom(A, B, tuple(full))
            return full if cand.is_homomorphism() else None
        for b in range(B.order):
            if orders_b[b] != orders_a[gens[pos]]:
                continue
            res = extend(pos + 1, images + [b])
            if res is not None:
                return res
        return None

    full = extend(0, [])
    return GroupHom(A, B, tuple(full)) if full is not None else None


# JSON interface

def _expand_cycles(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    perm = list(range(degree))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            perm[x] = cyc[(i + 1) % len(cyc)]
    return tuple(perm)


def load_group(source) -> FiniteGroup:
    """Load a group from a JSON path, file object, or parsed dict.

    Accepts {"name", "order", "mul_table"} or {"name", "degree",
    "perm_generators": [[cycle, cycle, ...], ...]} with 0-based cycles.
    """
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GroupError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    elif hasattr(source, "read"):
        try:
            data = json.load(source)
        except json.JSONDecodeError as exc:
            raise GroupError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    else:
        data = source
    name = data.get("name", "G")
    if "mul_table" in data:
        table = data["mul_table"]
        if "order" in data and len(table) != data["order"]:
            raise GroupError(f"group {name!r}: order {data['order']} does not match table size {len(table)}")
        return FiniteGroup(name, mul_table=table)
    if "perm_generators" in data:
        degree = data.get("degree")
        if degree is None:
            degree = 1 + max((max(c) for gen in data["perm_generators"] for c in gen), default=0)
        gens = [_expand_cycles(gen, degree) for gen in data["perm_generators"]]
        G = FiniteGroup.from_permutations(name, gens)
        if "order" in data and G.order != data["order"]:
            raise GroupError(f"group {name!r}: generators produce order {G.order}, expected {data['order']}")
        return G
    raise GroupError(f"group {name!r}: need 'mul_table' or 'perm_generators'")
