"""The Eulerian-sequence calculus.

A weight-n sequence is a finite ladder of homology classes (x_0, x_1, ...)
capping down the powers of a fixed Euler class e of degree (n-1)V:

    x_{i+1} . e = x_i        and        x_0 . e = 0.

Ladders are finite lists with an explicit horizon; verification up to the
horizon is marked conclusive only when the window supports every cap that
was taken.  Weight-1 sequences cap against the unit, so they are exactly
the constant sequences and the bottom condition is waived.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import fplin
from .degrees import RODegree
from .falg import (DataError, DegreeError, Element, GradedBasisModule, LinearMap,
                   WindowError, cap_map, preimage, tensor_element, tensor_power)


class SequenceError(Exception):
    pass


@dataclass
class EulerianSequence:
    """A windowed Eulerian ladder in a graded basis module."""

    name: str
    weight: int
    stability: RODegree
    module: GradedBasisModule
    euler: Optional[Element]       # None encodes the unit (weight-1 sequences)
    entries: list[Element]
    base_degree: RODegree

    def __post_init__(self):
        if self.weight < 1:
            raise SequenceError(f"{self.name}: weight must be >= 1")
        step = self.step_degree()
        if self.euler is not None:
            de = self.euler.degree()
            if de is None:
                raise SequenceError(f"{self.name}: Euler element must be homogeneous")
            if de != step:
                raise SequenceError(
                    f"{self.name}: Euler degree {de} differs from (weight-1)*stability = {step}")
        elif not step.is_zero():
            raise SequenceError(f"{self.name}: unit Euler element needs (weight-1)*stability = 0")
        for i, x in enumerate(self.entries):
            want = self.base_degree + i * step
            dx = x.degree()
            if dx is not None and dx != want:
                raise SequenceError(
                    f"{self.name}: entry {i} has degree {dx}, ladder predicts {want}")

    @property
    def horizon(self) -> int:
        return len(self.entries) - 1

    def step_degree(self) -> RODegree:
        return (self.weight - 1) * self.stability

    def entry_degree(self, i: int) -> RODegree:
        return self.base_degree + i * self.step_degree()

    def is_integral(self) -> bool:
        """All entry degrees non-virtual (honest representations)."""
        return all(self.entry_degree(i).is_non_virtual() for i in range(len(self.entries)))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries)

    def cap_with_euler(self, x: Element) -> Element:
        if self.euler is None:
            return x
        return self.module.cap_product(x, self.euler)

    def to_json(self) -> dict:
        return {
            "schema": "eulercalc-seq/1",
            "name": self.name,
            "weight": self.weight,
            "stability": self.stability.to_json(),
            "base_degree": self.base_degree.to_json(),
            "euler": None if self.euler is None else self.euler.to_json(),
            "entries": [x.to_json() for x in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict, module: GradedBasisModule,
                  euler: Optional[Element] = None) -> "EulerianSequence":
        if data.get("schema") not in (None, "eulercalc-seq/1"):
            raise DataError(f"unsupported sequence schema {data.get('schema')!r}")
        stability = RODegree.from_json(data["stability"])
        base = RODegree.from_json(data["base_degree"])
        step = (data["weight"] - 1) * stability
        if euler is None and data.get("euler") is not None:
            euler = Element.from_json(module, data["euler"], "coh")
        entries = [
            Element.from_json(module, item, "hom", base + i * step)
            for i, item in enumerate(data["entries"])
        ]
        return cls(data.get("name", "sequence"), data["weight"], stability, module,
                   euler, entries, base)


@dataclass
class PseudoSequence:
    """A ladder in a k-fold tensor module capping against a k-fold Euler class."""

    name: str
    fold: int
    weight: int
    stability: RODegree
    module: GradedBasisModule       # the tensor module
    euler: Element                  # the k-fold external Euler class
    entries: list[Element]
    base_degree: RODegree

    @property
    def horizon(self) -> int:
        return len(self.entries) - 1


@dataclass
class VerifyResult:
    ok: bool
    conclusive: bool
    first_failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def verify(seq: EulerianSequence) -> VerifyResult:
    """Check the cap recursion and the bottom condition up to the horizon."""
    conclusive = True
    if seq.weight >= 2 and seq.entries:
        try:
            bottom = seq.cap_with_euler(seq.entries[0])
            if not bottom.is_zero():
                return VerifyResult(False, True,
                                    f"x0 . e = {bottom!r} is nonzero")
        except WindowError as exc:
            conclusive = False
    for i in range(len(seq.entries) - 1):
        try:
            capped = seq.cap_with_euler(seq.entries[i + 1])
        except WindowError:
            conclusive = False
            continue
        if capped.coeffs != seq.entries[i].coeffs:
            return VerifyResult(False, True,
                                f"x{i + 1} . e = {capped!r} but x{i} = {seq.entries[i]!r}")
    return VerifyResult(True, conclusive,
                        None if conclusive else "window too small to evaluate every cap")


def degree(seq: EulerianSequence) -> RODegree:
    """The operation degree t*(n-1)V - |x_t|, checked to be t-independent."""
    step = seq.step_degree()
    values = set()
    for i, x in enumerate(seq.entries):
        d = x.degree() if not x.is_zero() else seq.entry_degree(i)
        values.add(i * step - d)
    if not values:
        return -seq.base_degree
    if len(values) > 1:
        raise SequenceError(f"{seq.name}: degree is t-dependent: {sorted(map(repr, values))}")
    return values.pop()


def shift(seq: EulerianSequence, k: int) -> EulerianSequence:
    """Prepend k zeros; raises the operation degree by k*(n-1)V."""
    if k < 0:
        raise SequenceError("shift wants k >= 0; see unshift for dropping zeros")
    step = seq.step_degree()
    new_base = seq.base_degree - k * step
    zeros = [seq.module.zero(new_base + i * step) for i in range(k)]
    return EulerianSequence(f"{seq.name}[{k}]", seq.weight, seq.stability, seq.module,
                            seq.euler, zeros + list(seq.entries), new_base)


def unshift(seq: EulerianSequence, k: int) -> EulerianSequence:
    """Drop k leading entries, all of which must be zero."""
    if any(not x.is_zero() for x in seq.entries[:k]):
        raise SequenceError(f"{seq.name}: cannot unshift past nonzero entries")
    step = seq.step_degree()
    return EulerianSequence(f"{seq.name}[-{k}]", seq.weight, seq.stability, seq.module,
                            seq.euler, list(seq.entries[k:]), seq.base_degree + k * step)


def reindex(seq: EulerianSequence, k: int) -> EulerianSequence:
    """Take every k-th entry; the ladder now caps against the k-th Euler power."""
    if k < 1:
        raise SequenceError("reindex wants k >= 1")
    if k == 1:
        return seq
    if seq.euler is None:
        new_euler = None
    else:
        new_euler = seq.euler
        for _ in range(k - 1):
            new_euler = seq.module.cup_product(new_euler, seq.euler)
        if new_euler.is_zero():
            raise WindowError(f"{seq.name}: cup table cannot produce the {k}-th Euler power")
    entries = [seq.entries[i] for i in range(0, len(seq.entries), k)]
    return EulerianSequence(f"t{k}({seq.name})", seq.weight, k * seq.stability,
                            seq.module, new_euler, entries, seq.base_degree)


def map_entrywise(seq: EulerianSequence, name: str, mapping: LinearMap,
                  new_euler: Optional[Element], new_stability: RODegree,
                  require_verified: bool = True) -> EulerianSequence:
    """Push a sequence through a structure map and re-verify the result.

    Shared engine behind restriction, geometric fixed points and modified
    geometric fixed points; the caller supplies the map, the image of the
    Euler class, and the new stability representation.
    """
    entries = [mapping.apply(x) for x in seq.entries]
    new_base = mapping.rule.apply(seq.base_degree)
    out = EulerianSequence(name, seq.weight, new_stability, mapping.target,
                           new_euler, entries, new_base)
    if require_verified:
        res = verify(out)
        if not res.ok:
            raise DataError(f"{name}: image fails the Eulerian conditions: {res.first_failure}")
    return out


def restrict(seq: EulerianSequence, subgroup_name: str, res_map: LinearMap,
             res_euler: Optional[Element], new_stability: RODegree) -> EulerianSequence:
    """Entrywise restriction along a subgroup structure map."""
    return map_entrywise(seq, f"res_{subgroup_name}({seq.name})", res_map,
                         res_euler, new_stability)


def geo_fix(seq: EulerianSequence, subgroup_name: str, fix_map: LinearMap,
            fix_euler: Optional[Element], new_stability: RODegree) -> EulerianSequence:
    """Entrywise geometric fixed points along a structure map."""
    return map_entrywise(seq, f"fix_{subgroup_name}({seq.name})", fix_map,
                         fix_euler, new_stability)


def mod_geo_fix(seq: EulerianSequence, subgroup_name: str, fix_map: LinearMap,
                fix_euler: Optional[Element], new_stability: RODegree,
                defined_labels: Optional[set] = None) -> EulerianSequence:
    """Modified geometric fixed points; refuses entries the map does not cover."""
    if defined_labels is not None:
        for i, x in enumerate(seq.entries):
            missing = set(x.coeffs) - defined_labels
            if missing:
                raise DataError(
                    f"mod_geo_fix({seq.name}): entry {i} involves {sorted(missing)}, "
                    "on which the shipped structure map is not defined")
    return map_entrywise(seq, f"modfix_{subgroup_name}({seq.name})", fix_map,
                         fix_euler, new_stability)


def diagonal(seq: EulerianSequence, k: int, coproduct: LinearMap) -> PseudoSequence:
    """The k-fold diagonal (Delta x_0, Delta x_k, Delta x_{2k}, ...).

    The coproduct map must land in the k-fold tensor module; the result
    caps against the k-fold external Euler class.
    """
    if k < 1:
        raise SequenceError("diagonal wants k >= 1")
    if seq.euler is None:
        raise SequenceError("diagonal needs a genuine Euler class")
    tensor_mod = coproduct.target
    euler_k = tensor_element(tensor_mod, [seq.euler] * k)
    entries = [coproduct.apply(seq.entries[i]) for i in range(0, len(seq.entries), k)]
    return PseudoSequence(f"diag{k}({seq.name})", k, seq.weight, seq.stability,
                          tensor_mod, euler_k, entries, seq.base_degree)


def verify_pseudo(ps: PseudoSequence) -> VerifyResult:
    conclusive = True
    if ps.entries:
        try:
            bottom = ps.module.cap_product(ps.entries[0], ps.euler)
            if not bottom.is_zero():
                return VerifyResult(False, True, f"x0 . e^x{ps.fold} = {bottom!r} is nonzero")
        except WindowError:
            conclusive = False
    for i in range(len(ps.entries) - 1):
        try:
            capped = ps.module.cap_product(ps.entries[i + 1], ps.euler)
        except WindowError:
            conclusive = False
            continue
        if capped.coeffs != ps.entries[i].coeffs:
            return VerifyResult(False, True,
                                f"x{i + 1} . e^x{ps.fold} = {capped!r} but x{i} = {ps.entries[i]!r}")
    return VerifyResult(True, conclusive,
                        None if conclusive else "window too small to evaluate every cap")


def enumerate_sequences(module: GradedBasisModule, euler: Element, weight: int,
                        stability: RODegree, base_degrees: Sequence[RODegree],
                        max_degree: Optional[RODegree] = None,
                        name_prefix: str = "sol") -> list[EulerianSequence]:
    """All Eulerian ladders with entries in the window, one basis per base degree.

    For each base degree the two defining conditions form one joint linear
    system over F_p; the reduced kernel basis is returned as sequences.
    The optional max_degree caps the ladder (compared coefficientwise).
    """
    p = module.p
    step = euler.degree()
    if step != (weight - 1) * stability:
        raise SequenceError("euler degree must equal (weight-1)*stability")
    capping = cap_map(module, euler)
    out: list[EulerianSequence] = []

    def below_cap(d: RODegree) -> bool:
        if max_degree is None:
            return True
        return all(d.coeff(l) <= max_degree.coeff(l)
                   for l in set(d.support()) | set(max_degree.support()))

    if step.is_zero():
        raise SequenceError("enumeration needs weight >= 2 (nonzero Euler degree)")
    step_label = step.support()[0]
    step_unit = step.coeff(step_label)
    module_degrees = set(module.hom_degrees())

    def slot_of(d: RODegree, base: RODegree) -> Optional[int]:
        diff = d - base
        num = diff.coeff(step_label)
        if num % step_unit:
            return None
        i = num // step_unit
        return i if i >= 0 and base + i * step == d else None

    for base in base_degrees:
        # the horizon is the last ladder slot whose degree slice is nonempty
        slots = [slot_of(d, base) for d in module_degrees if below_cap(d)]
        valid = [i for i in slots if i is not None]
        if not valid:
            continue
        top = max(valid)
        slices = [module.hom_slice(base + j * step) for j in range(top + 1)]
        T = len(slices) - 1
        if T < 0:
            continue
        offsets = [0]
        for s in slices:
            offsets.append(offsets[-1] + len(s))
        total = offsets[-1]
        rows: list[np.ndarray] = []

        def cap_rows(i: int) -> tuple[np.ndarray, list[str]]:
            d = base + i * step
            mat, src, tgt = capping.matrix_for_degree(d)
            return mat, tgt

        # x0 . e = 0 (weight >= 2)
        if weight >= 2 and slices[0]:
            mat, _ = cap_rows(0)
            block = np.zeros((mat.shape[0], total), dtype=np.int64)
            block[:, offsets[0]:offsets[1]] = mat
            rows.append(block)
        # x_{i+1} . e = x_i
        for i in range(T):
            if not slices[i + 1] and not slices[i]:
                continue
            mat, tgt = cap_rows(i + 1)
            src_labels = slices[i + 1]
            lower = slices[i]
            # rows indexed by the degree-(base+i*step) slice
            tgt_index = {label: r for r, label in enumerate(tgt)}
            block = np.zeros((len(lower), total), dtype=np.int64)
            for r, label in enumerate(lower):
                if label in tgt_index:
                    block[r, offsets[i + 1]:offsets[i + 2]] = mat[tgt_index[label]]
                block[r, offsets[i] + r] = (block[r, offsets[i] + r] - 1) % p
            rows.append(block)
        system = np.vstack(rows) if rows else np.zeros((0, total), dtype=np.int64)
        for idx, vec in enumerate(fplin.kernel_basis(system, p)):
            entries = []
            for i, labels in enumerate(slices):
                coeffs = {label: int(vec[offsets[i] + j])
                          for j, label in enumerate(labels) if vec[offsets[i] + j]}
                entries.append(Element(module, "hom", coeffs, base + i * step))
            seq = EulerianSequence(f"{name_prefix}[{base!r}#{idx}]", weight, stability,
                                   module, euler, entries, base)
            res = verify(seq)
            if not res.ok:
                raise DataError(f"enumerate produced a non-Eulerian solution: {res.first_failure}")
            out.append(seq)
    return out


@dataclass
class Denotation:
    """Coordinates of a sequence in a catalog of named sequences."""
    terms: list[tuple[str, int]]
    residual: Optional[EulerianSequence] = None

    @property
    def named(self) -> bool:
        return self.residual is None

    def __repr__(self) -> str:
        if not self.named:
            return "<unnamed sequence>"
        if not self.terms:
            return "0"
        return " + ".join(label if c == 1 else f"{c}*{label}" for label, c in self.terms)


def denote(seq: EulerianSequence, catalog: Sequence[tuple[str, EulerianSequence]]) -> Denotation:
    """Express a sequence as an F_p combination of catalog sequences.

    Pointwise sums only make sense between ladders of the same shape, so
    only catalog entries matching the weight, stability and base degree
    participate; slots are then compared entrywise.  An unsolvable system
    yields the unnamed marker with the residual attached.
    """
    p = seq.module.p
    usable = [(name, s) for name, s in catalog
              if s.module is seq.module and s.weight == seq.weight
              and s.stability == seq.stability and s.base_degree == seq.base_degree]

    def vector_support(s: EulerianSequence) -> dict[tuple[int, str], int]:
        out = {}
        for i, x in enumerate(s.entries):
            for label, c in x.coeffs.items():
                out[(i, label)] = c
        return out

    target = vector_support(seq)
    columns = [vector_support(s) for _, s in usable]
    keys = set(target)
    for col in columns:
        keys |= set(col)
    keys = sorted(keys)
    key_index = {k: i for i, k in enumerate(keys)}
    mat = np.zeros((len(keys), len(usable)), dtype=np.int64)
    for j, col in enumerate(columns):
        for k, c in col.items():
            mat[key_index[k], j] = c
    rhs = np.zeros(len(keys), dtype=np.int64)
    for k, c in target.items():
        rhs[key_index[k]] = c
    sol = fplin.solve(mat, rhs, p) if keys else np.zeros(len(usable), dtype=np.int64)
    if sol is None:
        return Denotation([], residual=seq)
    terms = [(usable[j][0], int(sol[j])) for j in range(len(usable)) if sol[j]]
    return Denotation(terms)


def add(a: EulerianSequence, b: EulerianSequence) -> EulerianSequence:
    """Pointwise sum; weight, stability, Euler data and shape must agree."""
    if (a.weight != b.weight or a.stability != b.stability or a.module is not b.module
            or a.base_degree != b.base_degree or len(a.entries) != len(b.entries)):
        raise SequenceError("sequence shapes do not match")
    ea = a.euler.coeffs if a.euler is not None else None
    eb = b.euler.coeffs if b.euler is not None else None
    if ea != eb:
        raise SequenceError("sequences cap against different Euler elements")
    entries = [x + y for x, y in zip(a.entries, b.entries)]
    return EulerianSequence(f"{a.name}+{b.name}", a.weight, a.stability, a.module,
                            a.euler, entries, a.base_degree)


def scale(a: EulerianSequence, c: int) -> EulerianSequence:
    entries = [x.scale(c) for x in a.entries]
    return EulerianSequence(f"{c}*{a.name}", a.weight, a.stability, a.module,
                            a.euler, entries, a.base_degree)


def load_sequence(path, module: GradedBasisModule,
                  euler: Optional[Element] = None) -> EulerianSequence:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return EulerianSequence.from_json(data, module, euler)
