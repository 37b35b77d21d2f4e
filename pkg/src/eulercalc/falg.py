"""Graded basis modules over F_p with pairing tables.

A module pairs a homology basis with a cohomology basis inside a degree
window.  Cup, cap and Kronecker products are sparse tables on basis labels,
extended bilinearly; absent entries are zero products.  Every table entry
is checked for degree homogeneity at load time.

The window records for which degrees the listed basis is complete, so that
a cap product landing in an incomplete degree raises instead of silently
returning a windowed-off zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import fplin
from .degrees import RODegree, TRIVIAL


class FalgError(Exception):
    pass


class DataError(FalgError):
    """Malformed or inconsistent module data."""


class WindowError(FalgError):
    """A product landed in a degree the window does not fully present."""


class DegreeError(FalgError):
    """Degree mismatch or inhomogeneous operand."""


# -- windows -------------------------------------------------------------------

class Window:
    """Predicate describing which degrees the basis presents completely."""

    kind = "abstract"

    def contains(self, d: RODegree) -> bool:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(data: dict) -> "Window":
        kind = data["kind"]
        if kind == "all":
            return AllWindow()
        if kind == "int_max":
            return IntegerWindow(data["max"])
        if kind == "explicit":
            return ExplicitWindow([RODegree.from_json(d) for d in data["degrees"]])
        if kind == "c2box":
            return C2BoxWindow(data["kmax"], data["wmax"], data.get("sign_label", "sgn"))
        raise DataError(f"unknown window kind {kind!r}")


class AllWindow(Window):
    kind = "all"

    def contains(self, d: RODegree) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": "all"}


class IntegerWindow(Window):
    """Integer gradings complete up to a top degree (classical instances)."""

    kind = "int_max"

    def __init__(self, max_deg: int):
        self.max_deg = max_deg

    def contains(self, d: RODegree) -> bool:
        if any(label != TRIVIAL for label in d.support()):
            return False
        return d.trivial_part <= self.max_deg

    def to_json(self) -> dict:
        return {"kind": "int_max", "max": self.max_deg}


class ExplicitWindow(Window):
    kind = "explicit"

    def __init__(self, degrees: Iterable[RODegree]):
        self.degrees = set(degrees)

    def contains(self, d: RODegree) -> bool:
        return d in self.degrees

    def to_json(self) -> dict:
        return {"kind": "explicit",
                "degrees": [d.to_json() for d in sorted(self.degrees, key=repr)]}


class C2BoxWindow(Window):
    """Completeness region for the C2 bundle presented over the positive cone.

    The free generators sit in degrees k*rho and k*rho + sigma and carry
    monomial coefficients a^i u^j with |a| = sigma, |u| = sigma - 1.  A
    degree (t, s) (trivial and sign coordinates) is complete exactly when
    every solution (k, i, j) >= 0 of the degree equations satisfies
    k <= kmax and i + j <= wmax.
    """

    kind = "c2box"

    def __init__(self, kmax: int, wmax: int, sign_label: str = "sgn"):
        self.kmax = kmax
        self.wmax = wmax
        self.sign_label = sign_label

    def contains(self, d: RODegree) -> bool:
        if any(label not in (TRIVIAL, self.sign_label) for label in d.support()):
            return False
        t, s = d.coeff(TRIVIAL), d.coeff(self.sign_label)
        # generators b_{k rho}: degree (k + j, k - i - j)
        for k in range(max(0, -(-(s + t) // 2)), t + 1):
            j, i = t - k, 2 * k - s - t
            if j < 0 or i < 0:
                continue
            if k > self.kmax or i + j > self.wmax:
                return False
        # generators c_{k rho + sigma}: degree (k + j, k + 1 - i - j)
        for k in range(max(0, -(-(s + t - 1) // 2)), t + 1):
            j, i = t - k, 2 * k + 1 - s - t
            if j < 0 or i < 0:
                continue
            if k > self.kmax or i + j > self.wmax:
                return False
        return True

    def to_json(self) -> dict:
        return {"kind": "c2box", "kmax": self.kmax, "wmax": self.wmax,
                "sign_label": self.sign_label}


# -- modules and elements --------------------------------------------------------

Table = dict[tuple[str, str], tuple[tuple[str, int], ...]]


@dataclass
class GradedBasisModule:
    """A homology/cohomology basis pair with its pairing tables."""

    name: str
    p: int
    irrep_dims: dict[str, int]
    homology: dict[str, RODegree]
    cohomology: dict[str, RODegree]
    window: Window
    cup: Table = field(default_factory=dict)       # coh x coh -> coh
    cap: Table = field(default_factory=dict)       # hom x coh -> hom
    kron: dict[tuple[str, str], int] = field(default_factory=dict)  # coh x hom -> F_p
    strict: bool = True
    # cohomology labels whose cap column is total: a missing (x, e) entry is a
    # genuine zero product, even when the result degree is outside the window
    total_cap_columns: frozenset = frozenset()

    def __post_init__(self):
        if self.p < 2:
            raise DataError(f"{self.name}: invalid prime {self.p}")
        overlap = set(self.homology) & set(self.cohomology)
        if overlap:
            raise DataError(f"{self.name}: labels {sorted(overlap)} used on both sides")
        self._hom_slices: dict[RODegree, list[str]] = {}
        for label, d in self.homology.items():
            self._hom_slices.setdefault(d, []).append(label)
        self._coh_slices: dict[RODegree, list[str]] = {}
        for label, d in self.cohomology.items():
            self._coh_slices.setdefault(d, []).append(label)
        self.validate_tables()

    # table validation

    def validate_tables(self) -> None:
        for (l, r), terms in self.cup.items():
            dl, dr = self._coh_degree(l), self._coh_degree(r)
            for tgt, c in terms:
                if self._coh_degree(tgt) != dl + dr:
                    raise DataError(
                        f"{self.name}: cup entry {l}*{r} -> {tgt} is not degree-homogeneous")
                self._check_coeff(c)
        for (x, e), terms in self.cap.items():
            dx, de = self._hom_degree(x), self._coh_degree(e)
            for tgt, c in terms:
                if self._hom_degree(tgt) != dx - de:
                    raise DataError(
                        f"{self.name}: cap entry {x}.{e} -> {tgt} is not degree-homogeneous")
                self._check_coeff(c)
        for (xi, x), c in self.kron.items():
            if c % self.p and self._coh_degree(xi) != self._hom_degree(x):
                raise DataError(
                    f"{self.name}: kron entry <{xi},{x}> pairs different degrees")
            self._check_coeff(c)

    def _check_coeff(self, c: int) -> None:
        if not isinstance(c, int):
            raise DataError(f"{self.name}: non-integer coefficient {c!r}")

    def _hom_degree(self, label: str) -> RODegree:
        try:
            return self.homology[label]
        except KeyError:
            raise DataError(f"{self.name}: unknown homology label {label!r}") from None

    def _coh_degree(self, label: str) -> RODegree:
        try:
            return self.cohomology[label]
        except KeyError:
            raise DataError(f"{self.name}: unknown cohomology label {label!r}") from None

    # slices

    def hom_slice(self, d: RODegree) -> list[str]:
        return list(self._hom_slices.get(d, []))

    def coh_slice(self, d: RODegree) -> list[str]:
        return list(self._coh_slices.get(d, []))

    def hom_degrees(self) -> list[RODegree]:
        return list(self._hom_slices)

    # element construction

    def element(self, coeffs: Mapping[str, int] | str, side: str = "hom",
                degree: Optional[RODegree] = None) -> "Element":
        if isinstance(coeffs, str):
            coeffs = {coeffs: 1}
        return Element(self, side, dict(coeffs), degree)

    def zero(self, degree: Optional[RODegree] = None, side: str = "hom") -> "Element":
        return Element(self, side, {}, degree)

    # products

    def cup_product(self, a: "Element", b: "Element") -> "Element":
        self._expect(a, "coh"); self._expect(b, "coh")
        da, db = a.degree(), b.degree()
        target = None if da is None or db is None else da + db
        out: dict[str, int] = {}
        for la, ca in a.coeffs.items():
            for lb, cb in b.coeffs.items():
                for tgt, c in self.cup.get((la, lb), ()):
                    out[tgt] = (out.get(tgt, 0) + ca * cb * c) % self.p
        out = {k: v for k, v in out.items() if v}
        if not out and target is not None and not self.window.contains(target):
            if self.strict:
                raise WindowError(
                    f"{self.name}: cup lands in degree {target} outside the window")
        return Element(self, "coh", out, target)

    def cap_product(self, x: "Element", e: "Element") -> "Element":
        self._expect(x, "hom"); self._expect(e, "coh")
        dx, de = x.degree(), e.degree()
        target = None if dx is None or de is None else dx - de
        out: dict[str, int] = {}
        for lx, cx in x.coeffs.items():
            for le, ce in e.coeffs.items():
                for tgt, c in self.cap.get((lx, le), ()):
                    out[tgt] = (out.get(tgt, 0) + cx * ce * c) % self.p
        out = {k: v for k, v in out.items() if v}
        if not out and target is not None and not self.window.contains(target):
            total = (self.total_cap_columns == "all"
                     or set(e.coeffs) <= self.total_cap_columns)
            if self.strict and not total:
                raise WindowError(
                    f"{self.name}: cap lands in degree {target} outside the window")
        return Element(self, "hom", out, target)

    def kron_pairing(self, xi: "Element", x: "Element") -> int:
        self._expect(xi, "coh"); self._expect(x, "hom")
        dxi, dx = xi.degree(), x.degree()
        if dxi is not None and dx is not None and dxi != dx:
            if self.strict:
                raise DegreeError(
                    f"{self.name}: kron pairing of degrees {dxi} and {dx}")
            return 0
        total = 0
        for lx, cx in xi.coeffs.items():
            for ly, cy in x.coeffs.items():
                total += cx * cy * self.kron.get((lx, ly), 0)
        return total % self.p

    def _expect(self, el: "Element", side: str) -> None:
        if el.module is not self:
            if el.module.p != self.p:
                raise DataError(f"mixed primes {el.module.p} and {self.p}")
            raise DataError(f"element of {el.module.name!r} used with {self.name!r}")
        if el.side != side:
            raise DataError(f"{self.name}: expected a {side} element")

    # validation predicates used by instance loading

    def cap_covered(self, x: "Element", e: "Element") -> bool:
        """Whether the cap table speaks for every pair the product involves."""
        for lx in x.coeffs:
            for le in e.coeffs:
                if (lx, le) not in self.cap and not (
                        self.total_cap_columns == "all" or le in self.total_cap_columns):
                    return False
        return True

    def check_cap_associativity(self) -> None:
        """(x . e1) . e2 == x . (e1 cup e2) wherever all tables are defined."""
        coh_labels = list(self.cohomology)
        for (x, e1) in list(self.cap):
            xe = self.element(x)
            for e2 in coh_labels:
                if (e1, e2) not in self.cup:
                    continue
                lhs_mid = self.cap_product(xe, self.element(e1, "coh"))
                combined = self.cup_product(self.element(e1, "coh"),
                                            self.element(e2, "coh"))
                if not (self.cap_covered(lhs_mid, self.element(e2, "coh"))
                        and self.cap_covered(xe, combined)):
                    continue
                try:
                    lhs = self.cap_product(lhs_mid, self.element(e2, "coh"))
                    rhs = self.cap_product(xe, combined)
                except WindowError:
                    continue
                if lhs.coeffs != rhs.coeffs:
                    raise DataError(
                        f"{self.name}: cap/cup associativity fails at ({x},{e1},{e2})")

    def check_adjunction(self) -> None:
        """<xi cup eta, x> == <xi, x . eta> wherever defined."""
        if not self.kron:
            return
        for (xi, eta) in list(self.cup):
            want = self._coh_degree(xi) + self._coh_degree(eta)
            for x in self.homology:
                if self._hom_degree(x) != want:
                    continue  # both sides vanish by homogeneity
                lhs = self.kron_pairing(
                    self.cup_product(self.element(xi, "coh"), self.element(eta, "coh")),
                    self.element(x))
                try:
                    capped = self.cap_product(self.element(x), self.element(eta, "coh"))
                except WindowError:
                    continue
                rhs = self.kron_pairing(self.element(xi, "coh"), capped)
                if lhs != rhs:
                    raise DataError(
                        f"{self.name}: cup/cap adjunction fails at ({xi},{eta},{x})")

    def to_json(self) -> dict:
        def table_json(table):
            return [
                {"left": l, "right": r, "result": [[t, c] for t, c in terms]}
                for (l, r), terms in sorted(table.items())
            ]
        return {
            "schema": "eulercalc-module/1",
            "name": self.name,
            "p": self.p,
            "irreps": dict(sorted(self.irrep_dims.items())),
            "window": self.window.to_json(),
            "homology": [{"label": l, "degree": d.to_json()}
                         for l, d in self.homology.items()],
            "cohomology": [{"label": l, "degree": d.to_json()}
                           for l, d in self.cohomology.items()],
            "tables": {
                "cup": table_json(self.cup),
                "cap": table_json(self.cap),
                "kron": [{"left": l, "right": r, "value": v}
                         for (l, r), v in sorted(self.kron.items())],
            },
            "total_cap_columns": ("all" if self.total_cap_columns == "all"
                                  else sorted(self.total_cap_columns)),
        }

    @classmethod
    def from_json(cls, data: dict, strict: bool = True) -> "GradedBasisModule":
        if data.get("schema") not in (None, "eulercalc-module/1"):
            raise DataError(f"unsupported module schema {data.get('schema')!r}")
        def basis(key):
            out = {}
            for item in data.get(key, []):
                label = item["label"]
                if label in out:
                    raise DataError(f"duplicate {key} label {label!r}")
                out[label] = RODegree.from_json(item["degree"])
            return out
        tables = data.get("tables", {})
        def table(key):
            out = {}
            for item in tables.get(key, []):
                out[(item["left"], item["right"])] = tuple(
                    (t, int(c)) for t, c in item["result"])
            return out
        kron = {(item["left"], item["right"]): int(item["value"])
                for item in tables.get("kron", [])}
        totals_raw = data.get("total_cap_columns", [])
        totals = "all" if totals_raw == "all" else frozenset(totals_raw)
        return cls(
            name=data.get("name", "module"),
            p=int(data["p"]),
            irrep_dims=dict(data.get("irreps", {TRIVIAL: 1})),
            homology=basis("homology"),
            cohomology=basis("cohomology"),
            window=Window.from_json(data.get("window", {"kind": "all"})),
            cup=table("cup"),
            cap=table("cap"),
            kron=kron,
            strict=strict,
            total_cap_columns=totals,
        )


class Element:
    """Sparse F_p combination of basis labels on one side of a module."""

    __slots__ = ("module", "side", "coeffs", "_degree")

    def __init__(self, module: GradedBasisModule, side: str,
                 coeffs: Mapping[str, int], degree: Optional[RODegree] = None):
        if side not in ("hom", "coh"):
            raise DataError(f"bad element side {side!r}")
        self.module = module
        self.side = side
        self.coeffs = {}
        for label, c in coeffs.items():
            c %= module.p
            if c:
                basis = module.homology if side == "hom" else module.cohomology
                if label not in basis:
                    raise DataError(f"{module.name}: unknown {side} label {label!r}")
                self.coeffs[label] = c
        self._degree = degree
        if self.coeffs:
            degrees = {self._label_degree(label) for label in self.coeffs}
            if len(degrees) > 1:
                raise DegreeError(
                    f"{module.name}: inhomogeneous element over {sorted(map(repr, degrees))}")
            actual = degrees.pop()
            if degree is not None and degree != actual:
                raise DegreeError(
                    f"{module.name}: element declared degree {degree}, has {actual}")
            self._degree = actual

    def _label_degree(self, label: str) -> RODegree:
        basis = self.module.homology if self.side == "hom" else self.module.cohomology
        return basis[label]

    def degree(self) -> Optional[RODegree]:
        return self._degree

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Element") -> "Element":
        if other.module is not self.module or other.side != self.side:
            raise DataError("cannot add elements of different modules or sides")
        out = dict(self.coeffs)
        for label, c in other.coeffs.items():
            out[label] = (out.get(label, 0) + c) % self.module.p
        deg = self._degree if self._degree is not None else other._degree
        if (self._degree is not None and other._degree is not None
                and self._degree != other._degree and self.coeffs and other.coeffs):
            raise DegreeError("adding elements of different degrees")
        return Element(self.module, self.side, out, deg)

    def scale(self, c: int) -> "Element":
        return Element(self.module, self.side,
                       {label: (v * c) % self.module.p for label, v in self.coeffs.items()},
                       self._degree)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Element) and other.module is self.module
                and other.side == self.side and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((id(self.module), self.side, tuple(sorted(self.coeffs.items()))))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0" if self._degree is None else f"0[{self._degree}]"
        parts = []
        for label, c in sorted(self.coeffs.items()):
            parts.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return [[label, c] for label, c in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, module: GradedBasisModule, data, side: str = "hom",
                  degree: Optional[RODegree] = None) -> "Element":
        return cls(module, side, {label: int(c) for label, c in data}, degree)


def slant_degree(W: RODegree, V: RODegree) -> RODegree:
    """Degree of a slant product x|_b with |x| = W cohomological, |b| = V homological.

    The engine fixes the convention W - V: pairing the doubled-degree image
    of a degree-k class against a degree-(k-i) homology class then lands in
    degree k+i, which is what the classical operation indexing wants.  The
    opposite convention appears in places in the literature; this one is
    ours, fixed and documented, not a claim about anyone else's intent.
    """
    return W - V


# -- linear maps -----------------------------------------------------------------

class DegreeRule:
    """How a linear map transforms degrees: a constant shift or a lattice hom."""

    def __init__(self, kind: str, shift: Optional[RODegree] = None,
                 images: Optional[dict[str, RODegree]] = None):
        if kind not in ("shift", "hom"):
            raise DataError(f"bad degree rule kind {kind!r}")
        self.kind = kind
        self.shift = shift or RODegree.zero()
        self.images = images or {}

    @classmethod
    def shift_by(cls, d: RODegree) -> "DegreeRule":
        return cls("shift", shift=d)

    @classmethod
    def hom_map(cls, images: dict[str, RODegree]) -> "DegreeRule":
        return cls("hom", images=images)

    def apply(self, d: RODegree) -> RODegree:
        if self.kind == "shift":
            return d + self.shift
        out = RODegree.zero()
        for label, c in d.items():
            if label not in self.images:
                raise DataError(f"degree rule has no image for irreducible {label!r}")
            out = out + c * self.images[label]
        return out

    def to_json(self) -> dict:
        if self.kind == "shift":
            return {"kind": "shift", "value": self.shift.to_json()}
        return {"kind": "hom",
                "images": {l: d.to_json() for l, d in sorted(self.images.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "DegreeRule":
        if data["kind"] == "shift":
            return cls.shift_by(RODegree.from_json(data["value"]))
        return cls.hom_map({l: RODegree.from_json(d) for l, d in data["images"].items()})


@dataclass
class LinearMap:
    """Sparse F_p-linear map between module homology bases."""

    name: str
    source: GradedBasisModule
    target: GradedBasisModule
    rule: DegreeRule
    entries: dict[str, tuple[tuple[str, int], ...]]
    side: str = "hom"

    def __post_init__(self):
        if self.source.p != self.target.p:
            raise DataError(f"{self.name}: mixed primes")
        src_basis = self.source.homology if self.side == "hom" else self.source.cohomology
        tgt_basis = self.target.homology if self.side == "hom" else self.target.cohomology
        for label, terms in self.entries.items():
            if label not in src_basis:
                raise DataError(f"{self.name}: unknown source label {label!r}")
            want = self.rule.apply(src_basis[label])
            for tgt, c in terms:
                if tgt not in tgt_basis:
                    raise DataError(f"{self.name}: unknown target label {tgt!r}")
                if tgt_basis[tgt] != want:
                    raise DataError(
                        f"{self.name}: column {label} lands in {tgt_basis[tgt]}, "
                        f"degree rule predicts {want}")

    def apply(self, x: Element) -> Element:
        if x.module is not self.source or x.side != self.side:
            raise DataError(f"{self.name}: element does not belong to the source module")
        out: dict[str, int] = {}
        for label, c in x.coeffs.items():
            for tgt, v in self.entries.get(label, ()):
                out[tgt] = (out.get(tgt, 0) + c * v) % self.target.p
        deg = None if x.degree() is None else self.rule.apply(x.degree())
        return Element(self.target, self.side, out, deg)

    def matrix_for_degree(self, d: RODegree) -> tuple[np.ndarray, list[str], list[str]]:
        """Matrix of the degree-d slice: rows = target slice, cols = source slice."""
        src = (self.source.hom_slice(d) if self.side == "hom"
               else self.source.coh_slice(d))
        td = self.rule.apply(d)
        tgt = (self.target.hom_slice(td) if self.side == "hom"
               else self.target.coh_slice(td))
        tgt_index = {label: i for i, label in enumerate(tgt)}
        mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, label in enumerate(src):
            for t, c in self.entries.get(label, ()):
                mat[tgt_index[t], j] = c % self.source.p
        return mat, src, tgt

    def to_json(self) -> dict:
        return {
            "schema": "eulercalc-map/1",
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "side": self.side,
            "degree_rule": self.rule.to_json(),
            "entries": {label: [[t, c] for t, c in terms]
                        for label, terms in sorted(self.entries.items())},
        }

    @classmethod
    def from_json(cls, data: dict, source: GradedBasisModule,
                  target: GradedBasisModule) -> "LinearMap":
        if data.get("schema") not in (None, "eulercalc-map/1"):
            raise DataError(f"unsupported map schema {data.get('schema')!r}")
        entries = {label: tuple((t, int(c)) for t, c in terms)
                   for label, terms in data["entries"].items()}
        return cls(data.get("name", "map"), source, target,
                   DegreeRule.from_json(data["degree_rule"]), entries,
                   data.get("side", "hom"))


def cap_map(module: GradedBasisModule, e: Element, name: Optional[str] = None) -> LinearMap:
    """Capping with a fixed cohomology element, as a linear map on homology."""
    de = e.degree()
    if de is None:
        raise DegreeError("cap map needs a homogeneous cohomology element")
    entries = {}
    for label in module.homology:
        result = module.cap_product(module.element(label), e)
        if result.coeffs:
            entries[label] = tuple(sorted(result.coeffs.items()))
    return LinearMap(name or f"cap[{e!r}]", module, module,
                     DegreeRule.shift_by(-de), entries)


def kernel(L: LinearMap, d: RODegree) -> list[Element]:
    """F_p-basis of ker(L) in source degree d, in echelon order."""
    mat, src, _ = L.matrix_for_degree(d)
    basis = []
    for vec in fplin.kernel_basis(mat, L.source.p):
        coeffs = {label: int(v) for label, v in zip(src, vec) if v}
        basis.append(Element(L.source, L.side, coeffs, d))
    return basis


def preimage(L: LinearMap, y: Element) -> Optional[tuple[Element, list[Element]]]:
    """Solve L(x) = y: a particular solution plus a kernel basis, or None.

    Solutions are verified by back-substitution before being returned.
    """
    dy = y.degree()
    if dy is None:
        raise DegreeError("preimage needs a homogeneous target")
    # invert the degree rule on this slice: scan source degrees
    candidates = [d for d in (L.source.hom_degrees() if L.side == "hom" else [])
                  if L.rule.apply(d) == dy]
    if L.rule.kind == "shift":
        candidates = [dy - L.rule.shift]
    if not candidates:
        return None
    for d in candidates:
        mat, src, tgt = L.matrix_for_degree(d)
        tgt_index = {label: i for i, label in enumerate(tgt)}
        rhs = np.zeros(len(tgt), dtype=np.int64)
        ok = True
        for label, c in y.coeffs.items():
            if label not in tgt_index:
                ok = False
                break
            rhs[tgt_index[label]] = c
        if not ok:
            continue
        sol = fplin.solve(mat, rhs, L.source.p)
        if sol is None:
            continue
        particular = Element(L.source, L.side,
                             {label: int(v) for label, v in zip(src, sol) if v}, d)
        if L.apply(particular).coeffs != y.coeffs:
            raise DataError(f"{L.name}: back-substitution check failed")
        return particular, kernel(L, d)
    return None


# -- tensor powers -----------------------------------------------------------------

def tensor_power(module: GradedBasisModule, k: int) -> GradedBasisModule:
    """The k-fold tensor module, with cap against pure tensor cohomology classes.

    Labels are '|'-joined tuples.  Koszul signs use total real dimensions;
    at p = 2 they are invisible.
    """
    import itertools

    def join(labels):
        return "|".join(labels)

    hom = {}
    for combo in itertools.product(list(module.homology), repeat=k):
        d = RODegree.zero()
        for l in combo:
            d = d + module.homology[l]
        hom[join(combo)] = d
    coh = {}
    for combo in itertools.product(list(module.cohomology), repeat=k):
        d = RODegree.zero()
        for l in combo:
            d = d + module.cohomology[l]
        coh[join(combo)] = d

    dims = module.irrep_dims
    cap: Table = {}
    for xcombo in itertools.product(list(module.homology), repeat=k):
        for ecombo in itertools.product(list(module.cohomology), repeat=k):
            if any((x, e) not in module.cap for x, e in zip(xcombo, ecombo)):
                continue
            # Koszul convention: (a x b) . (e x f) = (-1)^{|e|(|b|-|f|)} (a.e) x (b.f),
            # iterated; signs vanish at p = 2
            terms: list[tuple[list[str], int]] = [([], 1)]
            sign_exp = 0
            for idx, (x, e) in enumerate(zip(xcombo, ecombo)):
                de = module.cohomology[e].total_dim(dims)
                rest_dim = sum(module.homology[x2].total_dim(dims)
                               - (module.cohomology[e2].total_dim(dims))
                               for x2, e2 in zip(xcombo[idx + 1:], ecombo[idx + 1:]))
                sign_exp += de * rest_dim
                piece = module.cap.get((x, e), ())
                new_terms = []
                for labels, coeff in terms:
                    for tgt, c in piece:
                        new_terms.append((labels + [tgt], coeff * c))
                terms = new_terms
            sign = (-1) ** (sign_exp % 2)
            out: dict[str, int] = {}
            for labels, coeff in terms:
                lbl = join(labels)
                out[lbl] = (out.get(lbl, 0) + sign * coeff) % module.p
            out = {kk: v for kk, v in out.items() if v}
            if out:
                cap[(join(xcombo), join(ecombo))] = tuple(sorted(out.items()))

    kron: dict[tuple[str, str], int] = {}
    if module.kron:
        for ecombo in itertools.product(list(module.cohomology), repeat=k):
            for xcombo in itertools.product(list(module.homology), repeat=k):
                val = 1
                for e, x in zip(ecombo, xcombo):
                    val = (val * module.kron.get((e, x), 0)) % module.p
                    if not val:
                        break
                if val:
                    kron[(join(ecombo), join(xcombo))] = val

    if module.total_cap_columns == "all":
        totals = "all"
    else:
        totals = frozenset(
            "|".join(combo)
            for combo in itertools.product(sorted(module.total_cap_columns), repeat=k))
    return GradedBasisModule(
        name=f"{module.name}^tensor{k}",
        p=module.p,
        irrep_dims=dict(module.irrep_dims),
        homology=hom,
        cohomology=coh,
        window=AllWindow(),
        cap=cap,
        kron=kron,
        strict=module.strict,
        total_cap_columns=totals,
    )


def tensor_element(tensor_mod: GradedBasisModule, factors: Sequence[Element],
                   side: Optional[str] = None) -> Element:
    """The pure tensor of elements, as an element of the tensor module."""
    if side is None:
        side = factors[0].side
    coeffs: dict[str, int] = {"": 1}
    for f in factors:
        new: dict[str, int] = {}
        for prefix, c0 in coeffs.items():
            for label, c in f.coeffs.items():
                key = label if not prefix else f"{prefix}|{label}"
                new[key] = (new.get(key, 0) + c0 * c) % tensor_mod.p
        coeffs = new
    coeffs = {k: v for k, v in coeffs.items() if v and k}
    deg = RODegree.zero()
    for f in factors:
        if f.degree() is None:
            deg = None
            break
        deg = deg + f.degree()
    return Element(tensor_mod, side, coeffs, deg)


def derive_coproduct(module: GradedBasisModule, tensor_mod: GradedBasisModule,
                     name: str = "coproduct") -> LinearMap:
    """The homology coproduct dual to the cup product, via the Kronecker pairing.

    Requires the kron table to be a perfect pairing degreewise on the
    window; Delta(x) is the unique tensor with <xi (x) eta, Delta(x)> =
    <xi cup eta, x> for all basis cocycles.
    """
    if not module.kron:
        raise DataError(f"{module.name}: coproduct derivation needs a kron table")
    p = module.p
    duals: dict[str, Element] = {}
    for d, coh_labels in module._coh_slices.items():
        hom_labels = module.hom_slice(d)
        if not hom_labels:
            continue
        mat = np.array([[module.kron.get((xi, x), 0) for x in hom_labels]
                        for xi in coh_labels], dtype=np.int64)
        if len(hom_labels) != len(coh_labels) or fplin.rank(mat, p) != len(hom_labels):
            raise DataError(f"{module.name}: kron pairing is not perfect in degree {d}")
        identity = np.eye(len(hom_labels), dtype=np.int64)
        sol = fplin.solve_many(mat.T, identity, p)
        # dual of coh basis vector i is sum_j sol[j,i] * hom_j
        for i, xi in enumerate(coh_labels):
            duals[xi] = Element(module, "hom",
                                {hom_labels[j]: int(sol[j, i]) for j in range(len(hom_labels))}, d)
    entries: dict[str, tuple[tuple[str, int], ...]] = {}
    for x, dx in module.homology.items():
        out: dict[str, int] = {}
        for xi in module.cohomology:
            for eta in module.cohomology:
                if module.cohomology[xi] + module.cohomology[eta] != dx:
                    continue
                val = module.kron_pairing(
                    module.cup_product(module.element(xi, "coh"), module.element(eta, "coh")),
                    module.element(x))
                if not val:
                    continue
                for la, ca in duals[xi].coeffs.items():
                    for lb, cb in duals[eta].coeffs.items():
                        key = f"{la}|{lb}"
                        out[key] = (out.get(key, 0) + val * ca * cb) % p
        out = {kk: v for kk, v in out.items() if v}
        if out:
            entries[x] = tuple(sorted(out.items()))
    return LinearMap(name, module, tensor_mod, DegreeRule.shift_by(RODegree.zero()),
                     entries)


# -- file IO ---------------------------------------------------------------------

def load_module(path, strict: bool = True) -> GradedBasisModule:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return GradedBasisModule.from_json(data, strict=strict)


def load_map(path, source: GradedBasisModule, target: GradedBasisModule) -> LinearMap:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return LinearMap.from_json(data, source, target)
