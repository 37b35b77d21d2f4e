"""Shipped, validated instance bundles.

A bundle packages a graded basis module, its Euler element, the named
sequences living in it, and the structure maps (restriction, modified
geometric fixed points) into other bundles.  Loading re-runs the falg
table validations and re-verifies every named sequence, so corrupt data
fails with a report instead of flowing downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ._data import data_dir
from .degrees import RODegree, TRIVIAL
from .eulerian import EulerianSequence, mod_geo_fix, restrict, verify
from .falg import DataError, Element, GradedBasisModule, LinearMap


class InstanceError(Exception):
    pass


@dataclass
class StructureMap:
    """A structure map to another bundle, with its Euler bookkeeping."""
    key: str
    map: LinearMap
    target_bundle: str
    euler_image: Element
    stability: RODegree
    euler_exponent: Optional[int] = None
    absent_is_undefined: bool = False

    def defined_labels(self) -> Optional[set]:
        if not self.absent_is_undefined:
            return None
        return set(self.map.entries.keys())


@dataclass
class InstanceBundle:
    name: str
    p: int
    group: str
    module: GradedBasisModule
    euler: Element
    weight: int
    stability: RODegree
    sequences: dict[str, EulerianSequence]
    structure_maps: dict[str, StructureMap] = field(default_factory=dict)
    notes: str = ""

    def sequence(self, name: str) -> EulerianSequence:
        if name not in self.sequences:
            raise InstanceError(f"{self.name}: no sequence named {name!r}")
        return self.sequences[name]

    def restrict_sequence(self, seq: EulerianSequence, key: str) -> EulerianSequence:
        sm = self._map(key, "restrict")
        return restrict(seq, key.split(":", 1)[1], sm.map, sm.euler_image, sm.stability)

    def mod_geo_fix_sequence(self, seq: EulerianSequence, key: str) -> EulerianSequence:
        sm = self._map(key, "modfix")
        return mod_geo_fix(seq, key.split(":", 1)[1], sm.map, sm.euler_image,
                           sm.stability, sm.defined_labels())

    def _map(self, key: str, kind: str) -> StructureMap:
        if key not in self.structure_maps:
            raise InstanceError(f"{self.name}: no structure map {key!r}; "
                                f"available: {sorted(self.structure_maps)}")
        sm = self.structure_maps[key]
        if not key.startswith(kind):
            raise InstanceError(f"{self.name}: {key!r} is not a {kind} map")
        return sm


_cache: dict[tuple[str, str], InstanceBundle] = {}


def available_instances(base: Optional[Path] = None) -> list[str]:
    root = (base or data_dir()) / "instances"
    return sorted(p.stem for p in root.glob("*.json"))


def load(name: str, base: Optional[Path] = None, validate: bool = True) -> InstanceBundle:
    """Load and fully validate a shipped bundle.

    classical_p(p) may be written as e.g. ``classical_p(3)`` or
    ``classical_p3``.
    """
    canonical = name.replace("(", "").replace(")", "")
    root = base or data_dir()
    key = (str(root), canonical)
    if key in _cache:
        return _cache[key]
    path = root / "instances" / f"{canonical}.json"
    if not path.exists():
        raise InstanceError(
            f"unknown instance {name!r}; available: {available_instances(root)}")
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    bundle = _build(data, root, validate=validate)
    _cache[key] = bundle
    return bundle


def _build(data: dict, root: Path, validate: bool) -> InstanceBundle:
    if data.get("schema") != "eulercalc-bundle/1":
        raise InstanceError(f"unsupported bundle schema {data.get('schema')!r}")
    module = GradedBasisModule.from_json(data["module"])
    if validate:
        module.check_cap_associativity()
        module.check_adjunction()
    stability = RODegree.from_json(data["stability"])
    euler = Element.from_json(module, data["euler"], "coh")
    sequences = {}
    for seq_name, seq_data in data.get("sequences", {}).items():
        seq = EulerianSequence.from_json(seq_data, module, euler)
        if validate:
            res = verify(seq)
            if not res.ok:
                raise InstanceError(
                    f"{data['name']}: shipped sequence {seq_name!r} fails to verify: "
                    f"{res.first_failure}")
        sequences[seq_name] = seq
    maps = {}
    for key, record in data.get("structure_maps", {}).items():
        target = load(record["target"], root, validate=validate)
        lm = LinearMap.from_json(record["map"], module, target.module)
        euler_image = Element.from_json(target.module, record["euler_image"], "coh")
        maps[key] = StructureMap(
            key=key,
            map=lm,
            target_bundle=record["target"],
            euler_image=euler_image,
            stability=RODegree.from_json(record["stability"]),
            euler_exponent=record.get("euler_exponent"),
            absent_is_undefined=bool(record.get("absent_is_undefined", False)),
        )
    return InstanceBundle(
        name=data["name"],
        p=int(data["p"]),
        group=data.get("group", "C1"),
        module=module,
        euler=euler,
        weight=int(data.get("weight", 2)),
        stability=stability,
        sequences=sequences,
        structure_maps=maps,
        notes=data.get("notes", ""),
    )


# -- derived data -------------------------------------------------------------------

def coefficient_box(bundle: InstanceBundle) -> GradedBasisModule:
    """The positive-cone coefficient monomials of the C2 bundle, as a module.

    The degrees of the generators are forced by homogeneity of the
    quadratic relation: with |y| = sgn and |e_rho| = 1 + sgn,

        |a| = 2|y| - |y| = sgn        |u| = 2|y| - |e_rho| = sgn - 1.
    """
    if bundle.name != "c2equivariant":
        raise InstanceError("the coefficient box belongs to the c2equivariant bundle")
    sigma = RODegree({"sgn": 1})
    rho = RODegree({TRIVIAL: 1, "sgn": 1})
    a_deg = 2 * sigma - sigma
    u_deg = 2 * sigma - rho
    wmax = bundle.module.window.wmax  # type: ignore[attr-defined]
    coh = {}
    cup = {}
    for i in range(wmax + 1):
        for j in range(wmax + 1 - i):
            coh[f"a{i}u{j}"] = i * a_deg + j * u_deg
    for i1 in range(wmax + 1):
        for j1 in range(wmax + 1 - i1):
            for i2 in range(wmax + 1):
                for j2 in range(wmax + 1 - i2):
                    if i1 + i2 + j1 + j2 <= wmax:
                        cup[(f"a{i1}u{j1}", f"a{i2}u{j2}")] = (
                            (f"a{i1 + i2}u{j1 + j2}", 1),)
    from .falg import AllWindow
    return GradedBasisModule(
        name="c2_coefficient_box", p=2, irrep_dims=dict(bundle.module.irrep_dims),
        homology={}, cohomology=coh, window=AllWindow(), cup=cup)


def box_multiply(bundle: InstanceBundle, i: int, j: int,
                 seq: EulerianSequence) -> EulerianSequence:
    """Multiply a C2 sequence entrywise by the coefficient monomial a^i u^j."""
    if bundle.name != "c2equivariant":
        raise InstanceError("box multiplication belongs to the c2equivariant bundle")
    sigma = RODegree({"sgn": 1})
    u_deg = sigma - RODegree.integer(1)
    shift_deg = -(i * sigma + j * u_deg)

    def push(label: str) -> Optional[str]:
        import re
        m = re.fullmatch(r"a(\d+)u(\d+)([bc])(\d+)", label)
        i0, j0, fam, k = int(m.group(1)), int(m.group(2)), m.group(3), int(m.group(4))
        wmax = bundle.module.window.wmax  # type: ignore[attr-defined]
        if i0 + i + j0 + j > wmax:
            return None
        return f"a{i0 + i}u{j0 + j}{fam}{k}"

    entries = []
    for idx, x in enumerate(seq.entries):
        out = {}
        for label, c in x.coeffs.items():
            tgt = push(label)
            if tgt is None:
                raise InstanceError("box multiple escapes the shipped box")
            out[tgt] = c
        entries.append(Element(bundle.module, "hom", out,
                               seq.entry_degree(idx) + shift_deg))
    return EulerianSequence(f"a{i}u{j}*{seq.name}", seq.weight, seq.stability,
                            seq.module, seq.euler, entries,
                            seq.base_degree + shift_deg)


def restriction_euler(index: int, p: int, eps_parent: int = 1, eps_sub: int = 1) -> int:
    """Exponent in the rule e_G -> e_K^m for a subgroup of the given index.

    At p = 2 the exponent is the index itself.  At odd primes the shipped
    Euler data is a fold of the basic bundle, so the exponent carries the
    ratio of the parent and subgroup eps factors (an integer: when the
    parity of the group order changes, the index is even).
    """
    if p == 2:
        return index
    m = index * eps_parent
    if m % eps_sub:
        raise InstanceError("restriction exponent is not integral")
    return m // eps_sub


@dataclass(frozen=True)
class EulerRule:
    """Metadata: where a structure functor sends the shipped Euler class."""
    kind: str        # "restrict" or "modfix"
    source_group: str
    target_group: str
    exponent: int = 1

    def __repr__(self) -> str:
        power = "" if self.exponent == 1 else f"^{self.exponent}"
        return f"e[{self.source_group}] -> e[{self.target_group}]{power} ({self.kind})"


def mod_fix_euler(source_group: str, weyl_group: str) -> EulerRule:
    """The modified fixed-point rule: the Euler class maps to the Weyl one."""
    return EulerRule("modfix", source_group, weyl_group, 1)
