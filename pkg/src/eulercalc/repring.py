"""Character bookkeeping over user-supplied tables.

Tables are input data validated by orthogonality; the engine never computes
irreducible characters from scratch.  Real irreducibles carry a Schur index
(1 real, 2 complex, 4 quaternionic) so that self-pairings and the regular
decomposition check out; complex values live in Z[zeta_n] for a small
cyclotomic order n supplied with the table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .degrees import RODegree, TRIVIAL
from .fingroup import (FiniteGroup, GroupHom, GroupError, Subgroup,
                       find_isomorphism, normalizer, weyl_with_projection)


class TableError(Exception):
    """Inconsistent or missing character-table data."""


# -- exact cyclotomic scalars ------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact polynomial division
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            phi_d = list(cyclotomic_poly(d))
            num = _polydiv(num, phi_d)
    return tuple(num)


def _polydiv(num: list[Fraction], den: Sequence[Fraction]) -> list[Fraction]:
    num = list(num)
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coeff = num[i + len(den) - 1] / den[-1]
        out[i] = coeff
        for j, dj in enumerate(den):
            num[i + j] -= coeff * dj
    if any(c != 0 for c in num[:len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


class Cyclotomic:
    """Element of Q(zeta_n), stored as a polynomial in zeta reduced mod Phi_n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence) -> None:
        self.n = n
        deg = len(cyclotomic_poly(n)) - 1
        cs = [Fraction(c) for c in coeffs]
        while len(cs) >= len(cyclotomic_poly(n)):
            cs = self._reduce_once(cs)
        cs += [Fraction(0)] * (deg - len(cs))
        self.coeffs = tuple(cs[:deg])

    def _reduce_once(self, cs: list[Fraction]) -> list[Fraction]:
        phi = cyclotomic_poly(self.n)
        deg = len(phi) - 1
        out = list(cs)
        for i in range(len(out) - 1, deg - 1, -1):
            c = out[i]
            if c:
                for j in range(deg + 1):
                    out[i - deg + j] -= c * phi[j]
            out.pop()
        return out

    @classmethod
    def rational(cls, n: int, value) -> "Cyclotomic":
        return cls(n, [Fraction(value)])

    @classmethod
    def zeta_power(cls, n: int, k: int) -> "Cyclotomic":
        k %= n
        return cls(n, [0] * k + [1])

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other) -> "Cyclotomic":
        if not isinstance(other, Cyclotomic):
            return Cyclotomic(self.n, [a * Fraction(other) for a in self.coeffs])
        out = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return Cyclotomic(self.n, out)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^{n-1}."""
        out = Cyclotomic.rational(self.n, 0)
        for i, a in enumerate(self.coeffs):
            if a:
                out = out + a * Cyclotomic.zeta_power(self.n, (-i) % self.n)
        return out

    def __pow__(self, k: int) -> "Cyclotomic":
        acc = Cyclotomic.rational(self.n, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cyclotomic) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise TableError(f"value {self.coeffs} is not rational")
        return self.coeffs[0]

    def __repr__(self) -> str:
        return f"Cyc{self.n}{list(self.coeffs)}"


def parse_value(raw, n: int) -> Cyclotomic:
    """Character value from JSON: an int/str rational or a zeta-coefficient list."""
    if isinstance(raw, (int, str)):
        return Cyclotomic.rational(n, Fraction(raw))
    if isinstance(raw, list):
        return Cyclotomic(n, [Fraction(c) for c in raw])
    raise TableError(f"cannot parse character value {raw!r}")


# -- tables ------------------------------------------------------------------

@dataclass(frozen=True)
class Irrep:
    label: str
    dim: int
    values: tuple[Cyclotomic, ...]  # one per conjugacy class
    schur: int = 1                  # real irreducibles only: 1, 2 or 4


@dataclass
class CharacterTable:
    group: FiniteGroup
    class_reps: tuple[int, ...]
    class_sizes: tuple[int, ...]
    real_irreducibles: tuple[Irrep, ...]
    complex_irreducibles: tuple[Irrep, ...] = ()
    cyclotomic_order: int = 1
    class_of: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        G = self.group
        classes = G.conjugacy_classes()
        expected = {min(c): i for i, c in enumerate(classes)}
        if len(self.class_reps) != len(classes):
            raise TableError(f"{G.name}: table lists {len(self.class_reps)} classes, group has {len(classes)}")
        lookup = {}
        for i, rep in enumerate(self.class_reps):
            cls_ = next((c for c in classes if rep in c), None)
            if cls_ is None:
                raise TableError(f"{G.name}: {rep} is not a class representative")
            if len(cls_) != self.class_sizes[i]:
                raise TableError(f"{G.name}: class of {rep} has size {len(cls_)}, table says {self.class_sizes[i]}")
            for x in cls_:
                lookup[x] = i
        if len(lookup) != G.order:
            raise TableError(f"{G.name}: classes do not partition the group")
        object.__setattr__(self, "class_of", lookup)
        self._validate_family(self.real_irreducibles, real=True)
        if self.complex_irreducibles:
            self._validate_family(self.complex_irreducibles, real=False)

    def _inner(self, chi: Irrep, psi: Irrep) -> Fraction:
        G = self.group
        total = Cyclotomic.rational(self.cyclotomic_order, 0)
        for size, a, b in zip(self.class_sizes, chi.values, psi.values):
            total = total + size * (a * b.conjugate())
        return (total * Fraction(1, G.order)).rational_value()

    def _validate_family(self, irreps: Sequence[Irrep], real: bool) -> None:
        G = self.group
        kind = "real" if real else "complex"
        seen = set()
        for chi in irreps:
            if chi.label in seen:
                raise TableError(f"{G.name}: duplicate {kind} irreducible label {chi.label!r}")
            seen.add(chi.label)
            e = self.class_of[G.identity]
            if chi.values[e].rational_value() != chi.dim:
                raise TableError(f"{G.name}: {chi.label} has dim {chi.dim} but value {chi.values[e]} at identity")
        for i, chi in enumerate(irreps):
            for j, psi in enumerate(irreps):
                got = self._inner(chi, psi)
                want = (chi.schur if real else 1) if i == j else 0
                if got != want:
                    raise TableError(
                        f"{G.name}: orthogonality fails for {kind} {chi.label},{psi.label}: got {got}, want {want}")
        # the regular character must decompose with multiplicity dim (/schur, real)
        n = self.cyclotomic_order
        for ci in range(len(self.class_reps)):
            total = Cyclotomic.rational(n, 0)
            for chi in irreps:
                mult = Fraction(chi.dim, chi.schur) if real else Fraction(chi.dim)
                if mult.denominator != 1:
                    raise TableError(f"{G.name}: non-integral regular multiplicity for {chi.label}")
                total = total + mult * chi.values[ci]
            want = G.order if self.class_reps[ci] == G.identity else 0
            if total != Cyclotomic.rational(n, want):
                raise TableError(
                    f"{G.name}: {kind} irreducibles do not assemble the regular character "
                    f"at class {ci}")

    # value access

    def real_value(self, label: str, element: int) -> Fraction:
        chi = self.real_by_label(label)
        return chi.values[self.class_of[element]].rational_value()

    def real_by_label(self, label: str) -> Irrep:
        for chi in self.real_irreducibles:
            if chi.label == label:
                return chi
        raise TableError(f"{self.group.name}: no real irreducible {label!r}")

    def complex_by_label(self, label: str) -> Irrep:
        for chi in self.complex_irreducibles:
            if chi.label == label:
                return chi
        raise TableError(f"{self.group.name}: no complex irreducible {label!r}")

    def real_labels(self) -> tuple[str, ...]:
        return tuple(chi.label for chi in self.real_irreducibles)

    def irrep_dims(self) -> dict[str, int]:
        return {chi.label: chi.dim for chi in self.real_irreducibles}

    def character_of(self, V: RODegree) -> dict[int, Fraction]:
        """The (virtual) character of a real degree, per group element."""
        out = {}
        for g in self.group.elements():
            total = Fraction(0)
            for label, c in V.items():
                total += c * self.real_value(label, g)
            out[g] = total
        return out


@dataclass(frozen=True)
class Irr1Set:
    """One-dimensional characters as maps G -> {+-1} (real) or G -> Z/p (complex)."""
    labels: tuple[str, ...]
    maps: dict[str, tuple[int, ...]]  # label -> value per element (+-1, or exponent mod p)
    modulus: int  # 2 for the real case, p for the complex case

    def product(self, a: str, b: str) -> str:
        if self.modulus == 2:
            vals = tuple(self.maps[a][g] * self.maps[b][g] for g in range(len(self.maps[a])))
        else:
            vals = tuple((self.maps[a][g] + self.maps[b][g]) % self.modulus
                         for g in range(len(self.maps[a])))
        for label, m in self.maps.items():
            if m == vals:
                return label
        raise TableError("character set is not closed under product")

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


def irr1(table: CharacterTable) -> Irr1Set:
    """All one-dimensional real irreducibles, i.e. sign homomorphisms."""
    labels, maps = [], {}
    for chi in table.real_irreducibles:
        if chi.dim != 1:
            continue
        vals = tuple(int(table.real_value(chi.label, g)) for g in table.group.elements())
        if any(v not in (1, -1) for v in vals):
            raise TableError(f"{table.group.name}: 1-dimensional {chi.label} has non-sign values")
        labels.append(chi.label)
        maps[chi.label] = vals
    return Irr1Set(tuple(labels), maps, 2)


def tilde_irr1(table: CharacterTable, p: int) -> Irr1Set:
    """Complex 1-dimensional characters with values in p-th roots of unity.

    The trivial character is included.  Values are recorded as exponents:
    chi(g) = zeta_p^{a(g)}.
    """
    if not table.complex_irreducibles:
        raise TableError(f"{table.group.name}: no complex table supplied")
    n = table.cyclotomic_order
    labels, maps = [], {}
    for chi in table.complex_irreducibles:
        if chi.dim != 1:
            continue
        exps = []
        for g in table.group.elements():
            v = chi.values[table.class_of[g]]
            exp = None
            for k in range(p):
                cand = _zeta_p_in_order(n, p, k)
                if cand is not None and v == cand:
                    exp = k
                    break
            if exp is None:
                break
            exps.append(exp)
        else:
            labels.append(chi.label)
            maps[chi.label] = tuple(exps)
    return Irr1Set(tuple(labels), maps, p)


def _zeta_p_in_order(n: int, p: int, k: int) -> Optional[Cyclotomic]:
    """zeta_p^k as an element of Q(zeta_n), when p-th roots exist there."""
    if k % p == 0:
        return Cyclotomic.rational(n, 1)
    if n % p != 0:
        return None
    return Cyclotomic.zeta_power(n, (n // p) * (k % p))


def regular_degree(table: CharacterTable) -> RODegree:
    """The real regular representation as a degree (multiplicity dim/schur)."""
    coeffs = {}
    for chi in table.real_irreducibles:
        mult = Fraction(chi.dim, chi.schur)
        if mult.denominator != 1:
            raise TableError(f"{table.group.name}: non-integral regular multiplicity for {chi.label}")
        coeffs[chi.label] = int(mult)
    return RODegree(coeffs)


def complex_regular_degree(table: CharacterTable) -> RODegree:
    if not table.complex_irreducibles:
        raise TableError(f"{table.group.name}: no complex table supplied")
    return RODegree({chi.label: chi.dim for chi in table.complex_irreducibles})


def decompose_real(table: CharacterTable, character: dict[int, Fraction]) -> RODegree:
    """Express a (virtual) real character in the table's irreducible basis."""
    G = table.group
    coeffs = {}
    for chi in table.real_irreducibles:
        total = Fraction(0)
        for g in G.elements():
            total += character[g] * table.real_value(chi.label, g)
        mult = total / (G.order * chi.schur)
        if mult.denominator != 1:
            raise TableError(
                f"{G.name}: multiplicity of {chi.label} is {mult}, table inconsistency")
        if mult:
            coeffs[chi.label] = int(mult)
    rebuilt = RODegree(coeffs)
    check = table.character_of(rebuilt)
    if check != character:
        raise TableError(f"{G.name}: character does not lie in the span of the table")
    return rebuilt


def restrict_deg(table_g: CharacterTable, sub: Subgroup, table_k: CharacterTable,
                 V: RODegree, iso: Optional[GroupHom] = None) -> RODegree:
    """Restriction of a degree along K <= G, decomposed over K's table.

    ``iso`` identifies table_k's abstract group with the concrete subgroup;
    it is searched for when omitted.
    """
    if iso is None:
        K_grp, index = sub.as_group()
        iso0 = find_isomorphism(table_k.group, K_grp)
        if iso0 is None:
            raise TableError("supplied table does not match the subgroup")
        members = list(sub.members)
        images = tuple(members[iso0.images[x]] for x in range(table_k.group.order))
        iso = GroupHom(table_k.group, table_g.group, images)
    chi_g = table_g.character_of(V)
    character = {h: chi_g[iso.images[h]] for h in table_k.group.elements()}
    return decompose_real(table_k, character)


def fixed_deg(table_g: CharacterTable, sub: Subgroup, table_w: CharacterTable,
              V: RODegree) -> RODegree:
    """The K-fixed degree V^K as a representation of the Weyl group W(K).

    Computed by restricting to the normalizer and averaging characters over
    K, then decomposing over the supplied W(K) table.
    """
    G = table_g.group
    W, proj, section = weyl_with_projection(G, sub)
    iso = find_isomorphism(table_w.group, W)
    if iso is None:
        raise TableError("supplied table does not match the Weyl group")
    chi_g = table_g.character_of(V)
    character = {}
    for h in table_w.group.elements():
        n = section[iso.images[h]]
        total = Fraction(0)
        for k in sub.members:
            total += chi_g[G.mul(n, k)]
        avg = total / sub.order
        character[h] = avg
    return decompose_real(table_w, character)


def epsilon(group: FiniteGroup, p: int) -> int:
    """(p-1)/2 for even |G|, p-1 for odd |G|; 1 at p = 2 by convention."""
    if p == 2:
        return 1
    return (p - 1) // 2 if group.order % 2 == 0 else p - 1


def orientability_fold(group: FiniteGroup, p: int) -> int:
    """1 when the mod-p Euler data is orientable outright, 2 when doubling is needed."""
    if p == 2 or group.order % 2 == 0:
        return 1
    return 2


def euler_degree(table: CharacterTable, p: int) -> RODegree:
    """Degree of the shipped mod-p Euler class: rho at p = 2, 2*eps*rho odd."""
    rho = regular_degree(table)
    if p == 2:
        return rho
    return orientability_fold(table.group, p) * (p - 1) * rho


def ro_subring_member(v_gen: RODegree, w: RODegree) -> bool:
    """Whether w is supported on the irreducibles occurring in v_gen."""
    if not v_gen.is_non_virtual():
        raise TableError("generator degree must be non-virtual")
    allowed = set(v_gen.support())
    return all(label in allowed for label in w.support())


def fixed_components(table: CharacterTable, V: RODegree, space: str,
                     p: Optional[int] = None) -> list[tuple[str, int]]:
    """Nonzero isotypic pieces of V visible in the fixed points of P(V) or L_p(V).

    ``space`` is "projective" (V over real irreducibles) or "lens" (V over
    complex irreducibles, p odd); each returned pair is (character label,
    multiplicity), one per path component of the fixed space.
    """
    if space == "projective":
        chars = irr1(table)
    elif space == "lens":
        if p is None or p == 2:
            raise TableError("lens spaces require an odd prime")
        chars = tilde_irr1(table, p)
    else:
        raise TableError(f"unknown space kind {space!r}")
    out = []
    for label in chars:
        mult = V.coeff(label)
        if mult < 0:
            raise TableError("fixed components need a non-virtual degree")
        if mult:
            out.append((label, mult))
    return out


def h0_dimension(fixed_component_count: int, transfer_injective: bool) -> int:
    """Dimension of H_0 from the component count and the transfer's injectivity."""
    return fixed_component_count + (1 if transfer_injective else 0)


# -- subgroup and Weyl sites ---------------------------------------------------

@dataclass(frozen=True)
class SubgroupSite:
    """A subgroup identified with a standard table via an explicit isomorphism.

    ``embed`` maps the table's abstract group onto the concrete members
    inside the parent group.
    """
    subgroup: Subgroup
    table: CharacterTable
    embed: GroupHom  # table.group -> parent, image = subgroup.members


def resolve_subgroup_site(parent_table: CharacterTable, sub: Subgroup,
                          candidates: Sequence[CharacterTable]) -> SubgroupSite:
    K_grp, _ = sub.as_group()
    members = list(sub.members)
    for cand in candidates:
        if cand.group.order != sub.order:
            continue
        iso = find_isomorphism(cand.group, K_grp)
        if iso is None:
            continue
        images = tuple(members[iso.images[x]] for x in range(cand.group.order))
        return SubgroupSite(sub, cand, GroupHom(cand.group, parent_table.group, images))
    raise TableError(f"no shipped table matches a subgroup of order {sub.order}")


@dataclass(frozen=True)
class WeylSite:
    """The Weyl group W(K) identified with a standard table.

    ``proj`` sends members of N(K) to W-indices of the concrete quotient;
    ``iso`` identifies the standard table's group with that quotient and
    ``section`` picks coset representatives.
    """
    table: CharacterTable
    iso: GroupHom           # table.group -> concrete W
    proj: dict[int, int]    # member of N(K) -> concrete W index
    section: list[int]      # concrete W index -> representative in N(K)
    normalizer: Subgroup


def resolve_weyl_site(parent_table: CharacterTable, sub: Subgroup,
                      candidates: Sequence[CharacterTable]) -> WeylSite:
    G = parent_table.group
    W, proj, section = weyl_with_projection(G, sub)
    for cand in candidates:
        if cand.group.order != W.order:
            continue
        iso = find_isomorphism(cand.group, W)
        if iso is not None:
            return WeylSite(cand, iso, proj, section, normalizer(G, sub))
    raise TableError(f"no shipped table matches a Weyl group of order {W.order}")


# -- JSON + shipped tables ----------------------------------------------------

def load_table(source, group: Optional[FiniteGroup] = None) -> CharacterTable:
    if isinstance(source, (str, bytes)):
        with open(source) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise TableError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    else:
        data = source
    if group is None:
        from .fingroup import load_group
        group = load_group(data["group"]) if isinstance(data.get("group"), dict) else None
        if group is None:
            raise TableError("table file needs an inline 'group' or an explicit group argument")
    n = data.get("cyclotomic_order", 1)

    def family(key: str) -> tuple[Irrep, ...]:
        out = []
        for item in data.get(key, []):
            values = tuple(parse_value(v, n) for v in item["values"])
            out.append(Irrep(item["label"], item["dim"], values, item.get("schur", 1)))
        return tuple(out)

    return CharacterTable(
        group=group,
        class_reps=tuple(data["class_reps"]),
        class_sizes=tuple(data["class_sizes"]),
        real_irreducibles=family("real_irreducibles"),
        complex_irreducibles=family("complex_irreducibles"),
        cyclotomic_order=n,
    )


STANDARD_GROUP_NAMES = ("C1", "C2", "C3", "C4", "C2xC2", "S3")

_standard_cache: dict[str, CharacterTable] = {}


def standard_group(name: str) -> FiniteGroup:
    return standard_table(name).group


def standard_table(name: str) -> CharacterTable:
    """Shipped and validated table for one of the standard small groups."""
    if name not in _standard_cache:
        from ._data import data_dir
        from .fingroup import load_group
        base = data_dir()
        group = load_group(str(base / "groups" / f"{name}.json"))
        _standard_cache[name] = load_table(str(base / "tables" / f"{name}.json"), group)
    return _standard_cache[name]


def standard_tables() -> list[CharacterTable]:
    return [standard_table(name) for name in STANDARD_GROUP_NAMES]
