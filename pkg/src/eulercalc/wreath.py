"""The composition product of integral Eulerian sequences.

The product of a weight-n and a weight-m sequence lives in weight nm and
is assembled from pluggable structure data: a bilinear pairing of the two
ambient homologies into an intermediate module, a pushforward out of it,
and a pulled-back Euler class on it.  The engine validates the axioms this
data must satisfy rather than deriving the pairing itself:

  (a) the pulled Euler class matches the supplied pullback of the target
      Euler class, when a pullback table is given;
  (b) the pairing intertwines the cap ladders:
      (x_{m(k+1)} o y_{k+1}) . e_xy = x_{mk} o y_k;
  (c) every pairing entry is degree-additive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .degrees import RODegree
from .eulerian import EulerianSequence, SequenceError, verify
from .falg import (DataError, DegreeRule, Element, GradedBasisModule, LinearMap,
                   WindowError)


class WreathError(Exception):
    pass


@dataclass
class WreathData:
    """Structure data for forming products of weights n and m."""

    name: str
    n: int
    m: int
    left: GradedBasisModule        # ambient of the weight-n factor
    right: GradedBasisModule       # ambient of the weight-m factor
    middle: GradedBasisModule      # the intermediate module D
    target: GradedBasisModule      # ambient of the weight-nm product
    circ: dict[tuple[str, str], tuple[tuple[str, int], ...]]  # H(left) x H(right) -> H(middle)
    push: LinearMap                # H(middle) -> H(target)
    euler_xy: Element              # cohomology of the middle module
    euler_target: Element          # cohomology of the target module
    pullback_of_target_euler: Optional[Element] = None

    def pair(self, x: Element, y: Element) -> Element:
        """Bilinear extension of the pairing table."""
        if x.module is not self.left or y.module is not self.right:
            raise WreathError(f"{self.name}: pairing applied to foreign elements")
        out: dict[str, int] = {}
        p = self.middle.p
        for lx, cx in x.coeffs.items():
            for ly, cy in y.coeffs.items():
                for tgt, c in self.circ.get((lx, ly), ()):
                    out[tgt] = (out.get(tgt, 0) + cx * cy * c) % p
        deg = None
        if x.degree() is not None and y.degree() is not None:
            deg = x.degree() + y.degree()
        return Element(self.middle, "hom", {k: v for k, v in out.items() if v}, deg)


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate(W: WreathData,
             samples: Sequence[tuple[EulerianSequence, EulerianSequence]] = ()) -> ValidationReport:
    """Check the product axioms, reporting every failure with a witness."""
    failures: list[str] = []
    # (c) degree additivity of the pairing table
    for (lx, ly), terms in W.circ.items():
        want = W.left.homology[lx] + W.right.homology[ly]
        for tgt, _c in terms:
            if W.middle.homology[tgt] != want:
                failures.append(
                    f"axiom (c): {lx} o {ly} -> {tgt} has degree "
                    f"{W.middle.homology[tgt]}, want {want}")
    # (a) the pulled Euler class
    if W.pullback_of_target_euler is not None:
        if W.pullback_of_target_euler.coeffs != W.euler_xy.coeffs:
            failures.append(
                f"axiom (a): pulled Euler class {W.euler_xy!r} differs from the "
                f"supplied pullback {W.pullback_of_target_euler!r}")
    # (b) the ladder recursion on the supplied samples
    for chi1, chi2 in samples:
        top = min((len(chi1.entries) - 1) // W.m if W.m else 0,
                  len(chi2.entries) - 1)
        for k in range(top):
            lhs_el = W.pair(chi1.entries[W.m * (k + 1)], chi2.entries[k + 1])
            try:
                lhs = W.middle.cap_product(lhs_el, W.euler_xy)
            except WindowError:
                continue
            rhs = W.pair(chi1.entries[W.m * k], chi2.entries[k])
            if lhs.coeffs != rhs.coeffs:
                failures.append(
                    f"axiom (b): ({chi1.name}, {chi2.name}) at k = {k}: "
                    f"capped product {lhs!r} differs from {rhs!r}")
                break
    return ValidationReport(not failures, failures)


def product(chi1: EulerianSequence, chi2: EulerianSequence,
            W: WreathData) -> EulerianSequence:
    """The weight-nm product with entries push(x_{km} o y_k).

    Both factors must be integral (non-virtual entry degrees); the result
    is re-verified against the target Euler class and its degree checked
    to be the sum of the factor degrees.
    """
    if chi1.weight != W.n or chi2.weight != W.m:
        raise WreathError(
            f"{W.name}: expected weights ({W.n}, {W.m}), got "
            f"({chi1.weight}, {chi2.weight})")
    if not chi1.is_integral() or not chi2.is_integral():
        raise WreathError("product factors must be integral sequences "
                          "(non-virtual entry degrees)")
    if chi1.stability != chi2.stability:
        raise WreathError("product factors must share the stability representation")
    report = validate(W, [(chi1, chi2)])
    if not report.ok:
        raise WreathError(f"{W.name}: structure data fails validation: "
                          + "; ".join(report.failures))
    top = min((len(chi1.entries) - 1) // W.m if W.m else 0, len(chi2.entries) - 1)
    entries = []
    for k in range(top + 1):
        entries.append(W.push.apply(W.pair(chi1.entries[W.m * k], chi2.entries[k])))
    base = entries[0].degree()
    if base is None:
        base = W.push.rule.apply(chi1.base_degree + chi2.base_degree)
    out = EulerianSequence(f"{chi1.name}(.){chi2.name}", W.n * W.m, chi1.stability,
                           W.target, W.euler_target, entries, base)
    res = verify(out)
    if not res.ok:
        raise WreathError(f"{W.name}: product fails the Eulerian conditions: "
                          f"{res.first_failure}")
    from .eulerian import degree as seq_degree
    want = seq_degree(chi1) + seq_degree(chi2)
    got = seq_degree(out)
    if want != got:
        raise WreathError(f"{W.name}: product degree {got} differs from "
                          f"{want} = sum of factor degrees")
    return out


def constant(a: Element, name: Optional[str] = None, length: int = 8) -> EulerianSequence:
    """The weight-1 constant sequence (a, a, ...) capping against the unit."""
    deg = a.degree()
    if deg is None:
        raise WreathError("constant sequences need a homogeneous coefficient")
    if not deg.is_non_virtual():
        raise WreathError("constant sequences need a non-virtual degree")
    entries = [Element(a.module, a.side, dict(a.coeffs), deg) for _ in range(length)]
    return EulerianSequence(name or f"const({a!r})", 1, RODegree.zero(), a.module,
                            None, entries, deg)


@dataclass
class SequenceCombination:
    """A formal F_p combination of same-shape integral sequences."""

    weight: int
    stability: RODegree
    terms: list[tuple[int, EulerianSequence]]

    def __post_init__(self):
        for _c, s in self.terms:
            if s.weight != self.weight or s.stability != self.stability:
                raise SequenceError("combination mixes weights or stabilities")

    def collapse(self) -> EulerianSequence:
        if not self.terms:
            raise SequenceError("empty combination has no ambient module")
        from .eulerian import add, scale
        total = scale(self.terms[0][1], self.terms[0][0])
        for c, s in self.terms[1:]:
            total = add(total, scale(s, c))
        return total


def scalar_product_data(module: GradedBasisModule, unit_label: str,
                        name: str = "weight1") -> WreathData:
    """Weight-1 x weight-1 structure data: the pairing is plain multiplication.

    Used for the degenerate sanity instance where all the axioms collapse
    to bilinearity.
    """
    circ = {}
    for lx in module.homology:
        for ly in module.homology:
            # multiplication against the distinguished unit basis label only
            if ly == unit_label:
                circ[(lx, ly)] = ((lx, 1),)
            elif lx == unit_label:
                circ[(lx, ly)] = ((ly, 1),)
    push = LinearMap(f"{name}_push", module, module,
                     rule=DegreeRule.shift_by(RODegree.zero()),
                     entries={l: ((l, 1),) for l in module.homology})
    unit_coh = next(iter(module.coh_slice(RODegree.zero())), None)
    if unit_coh is None:
        raise WreathError("weight-1 data needs a degree-zero cohomology unit")
    euler = module.element(unit_coh, "coh")
    return WreathData(name, 1, 1, module, module, module, module, circ, push,
                      euler, euler)
