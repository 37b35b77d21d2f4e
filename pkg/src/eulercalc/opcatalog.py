"""The label calculus for the named equivariant operations.

Labels are purely formal: Sq^{k rho}_lambda and Sq^{k rho + 1} at p = 2,
P^{2 eps k rho}_lambda and P^{2 eps k rho + 1} at odd p.  The calculus
tracks degrees, rewrites labels under restriction and modified geometric
fixed points, and maps trivial-group labels onto classical Steenrod words.

Restriction scales the multiplier by the subgroup index; at odd primes
the eps factor of the group enters the stored multiplier whenever the
parity of the group order changes, which is exactly what the degree
identity res(deg l) = deg(res l) forces.  Modified fixed points of the
Bockstein-style labels are not covered by the theorems the calculus
encodes, so it refuses them rather than guessing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .degrees import RODegree
from .fingroup import Subgroup
from .oracle import SteenrodWord
from .repring import (CharacterTable, TableError, epsilon, irr1, regular_degree,
                      resolve_subgroup_site, resolve_weyl_site, restrict_deg,
                      standard_table, standard_tables, tilde_irr1)


class LabelError(Exception):
    pass


class UnsupportedRewrite(LabelError):
    """The requested rewriting is not covered by the encoded theorems."""


@dataclass(frozen=True)
class TrivialOp:
    """Marker for an operation the rewriting declares trivial."""
    reason: str

    def __repr__(self) -> str:
        return f"<trivial operation: {self.reason}>"


@dataclass(frozen=True)
class OpLabel:
    kind: str                 # "Sq" or "P"
    group: str                # standard group name
    p: int
    k: int
    bockstein: bool = False
    twist: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("Sq", "P"):
            raise LabelError(f"unknown operation kind {self.kind!r}")
        if (self.kind == "Sq") != (self.p == 2):
            raise LabelError("Sq labels live at p = 2, P labels at odd primes")
        if self.k < 0:
            raise LabelError("multiplier must be nonnegative")
        if self.bockstein and self.twist is not None:
            raise LabelError("Bockstein labels carry no twist")
        if not self.bockstein and self.twist is None:
            object.__setattr__(self, "twist", "1")

    def __repr__(self) -> str:
        parts = [f"k={self.k}", f"G={self.group}"]
        if self.p != 2:
            parts.append(f"p={self.p}")
        if self.bockstein:
            parts.append("bockstein")
        elif self.twist != "1":
            parts.append(f"lambda={self.twist}")
        return f"{self.kind}[{','.join(parts)}]"

    @classmethod
    def parse(cls, text: str) -> "OpLabel":
        m = re.fullmatch(r"(Sq|P)\[([^\]]*)\]", text.strip())
        if not m:
            raise LabelError(f"cannot parse label {text!r}; "
                             "expected e.g. Sq[k=2,G=C4,lambda=sgn]")
        kind = m.group(1)
        fields = {"bockstein": False}
        for item in m.group(2).split(","):
            item = item.strip()
            if not item:
                continue
            if item == "bockstein":
                fields["bockstein"] = True
                continue
            if "=" not in item:
                raise LabelError(f"bad label field {item!r}")
            key, val = item.split("=", 1)
            fields[key.strip()] = val.strip()
        p = int(fields.get("p", 2 if kind == "Sq" else 3))
        return cls(kind=kind, group=fields.get("G", "C1"), p=p,
                   k=int(fields.get("k", 0)), bockstein=fields["bockstein"],
                   twist=fields.get("lambda"))


def _character_set(table: CharacterTable, p: int):
    return irr1(table) if p == 2 else tilde_irr1(table, p)


def validate_label(label: OpLabel) -> CharacterTable:
    table = standard_table(label.group)
    if not label.bockstein:
        chars = _character_set(table, label.p)
        if label.twist not in set(chars):
            raise LabelError(
                f"{label!r}: twist {label.twist!r} is not a valid character of "
                f"{label.group} at p = {label.p}")
    return table


def degree(label: OpLabel) -> RODegree:
    """k*rho (+1) at p = 2; 2*eps*k*rho (+1) at odd primes."""
    table = validate_label(label)
    rho = regular_degree(table)
    mult = label.k if label.p == 2 else 2 * epsilon(table.group, label.p) * label.k
    d = mult * rho
    if label.bockstein:
        d = d + RODegree.integer(1)
    return d


def _scaled_multiplier(label: OpLabel, index: int, eps_src: int, eps_tgt: int) -> int:
    if label.p == 2:
        return label.k * index
    num = label.k * index * eps_src
    if num % eps_tgt:
        raise LabelError(f"{label!r}: restriction multiplier {num}/{eps_tgt} "
                         "is not integral")
    return num // eps_tgt


def restrict_label(label: OpLabel, sub: Subgroup) -> OpLabel:
    """Restriction to a subgroup: multiplier scaled by the index, twist restricted.

    The degree identity res(deg label) = deg(result) is checked exactly and
    raises on failure.
    """
    table = validate_label(label)
    if sub.parent is not table.group:
        raise LabelError(f"{label!r}: subgroup belongs to a different group")
    site = resolve_subgroup_site(table, sub, standard_tables())
    index = table.group.order // sub.order
    eps_src = epsilon(table.group, label.p)
    eps_tgt = epsilon(site.table.group, label.p)
    new_k = _scaled_multiplier(label, index, eps_src, eps_tgt)
    twist = None
    if not label.bockstein:
        twist = _restrict_twist(label, table, site)
    result = OpLabel(label.kind, site.table.group.name, label.p, new_k,
                     label.bockstein, twist)
    want = restrict_deg(table, sub, site.table, degree(label), iso=site.embed)
    got = degree(result)
    if want != got:
        raise LabelError(f"{label!r}: degree identity fails under restriction: "
                         f"res(deg) = {want}, deg(res) = {got}")
    return result


def _restrict_twist(label: OpLabel, table: CharacterTable, site) -> str:
    chars = _character_set(table, label.p)
    sub_chars = _character_set(site.table, label.p)
    src_map = chars.maps[label.twist]
    wanted = tuple(src_map[site.embed.images[h]]
                   for h in range(site.table.group.order))
    for cand in sub_chars:
        if sub_chars.maps[cand] == wanted:
            return cand
    raise LabelError(f"{label!r}: restricted twist not found in the target table")


def mod_geo_fix_label(label: OpLabel, sub: Subgroup) -> Union[OpLabel, TrivialOp]:
    """Modified geometric fixed points: multiplier scaled by |G : N(K)|,
    twist replaced by its K-fixed character; trivial when the twist has no
    K-fixed vectors.  Bockstein labels are refused (not covered)."""
    table = validate_label(label)
    if label.bockstein:
        raise UnsupportedRewrite(
            f"{label!r}: fixed-point rewriting of Bockstein-style labels is "
            "not covered by the encoded theorems")
    if sub.parent is not table.group:
        raise LabelError(f"{label!r}: subgroup belongs to a different group")
    site = resolve_weyl_site(table, sub, standard_tables())
    chars = _character_set(table, label.p)
    src_map = chars.maps[label.twist]
    trivial_value = 1 if label.p == 2 else 0
    if any(src_map[k] != trivial_value for k in sub.members):
        return TrivialOp(f"twist {label.twist!r} has no {len(sub.members)}-element "
                         "fixed vectors")
    # the twist descends along N(K) -> W(K)
    w_chars = _character_set(site.table, label.p)
    wanted = tuple(src_map[site.section[site.iso.images[h]]]
                   for h in range(site.table.group.order))
    new_twist = None
    for cand in w_chars:
        if w_chars.maps[cand] == wanted:
            new_twist = cand
            break
    if new_twist is None:
        raise LabelError(f"{label!r}: descended twist not found in the Weyl table")
    index = table.group.order // site.normalizer.order
    eps_src = epsilon(table.group, label.p)
    eps_tgt = epsilon(site.table.group, label.p)
    new_k = _scaled_multiplier(label, index, eps_src, eps_tgt)
    return OpLabel(label.kind, site.table.group.name, label.p, new_k, False, new_twist)


def underlying(label: OpLabel) -> SteenrodWord:
    """The classical Steenrod word of the label's restriction to the trivial group."""
    table = validate_label(label)
    triv = Subgroup(table.group, (table.group.identity,))
    at_e = restrict_label(label, triv)
    if label.p == 2:
        k = at_e.k + (1 if at_e.bockstein else 0)
        return SteenrodWord(2, (("Sq", k),) if k else ())
    tokens = []
    if at_e.bockstein:
        tokens.append(("b",))
    if at_e.k:
        tokens.append(("P", at_e.k))
    return SteenrodWord(label.p, tuple(tokens))


def shipped_labels(group: str, p: int, k_range=(0, 1, 2)) -> list[OpLabel]:
    """The catalog of labels shipped for a standard group at a prime."""
    table = standard_table(group)
    out = []
    kind = "Sq" if p == 2 else "P"
    chars = _character_set(table, p)
    for k in k_range:
        for lam in chars:
            out.append(OpLabel(kind, group, p, k, False, lam))
        out.append(OpLabel(kind, group, p, k, True, None))
    return out
