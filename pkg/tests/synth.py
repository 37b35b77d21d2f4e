"""Synthetic instance generators shared by the randomized tests.

The ladder modules here have one or two basis elements per rung and
random unit multipliers in their cap tables, so Eulerian ladders exist but
are not the identity pattern; sequences are produced honestly, by solving
the defining conditions with kernel seeds and preimage lifts.
"""

from __future__ import annotations

import random

from eulercalc import eulerian as eu
from eulercalc import falg
from eulercalc.degrees import RODegree


def ladder_module(rng: random.Random, p: int = 2, rungs: int = 8, width: int = 2,
                  step: int = 1, name: str = "synt") -> tuple[falg.GradedBasisModule, falg.Element]:
    """A module with `width` classes per rung and a random surjective cap.

    The cap-with-e matrix from rung k+1 to rung k is a random invertible
    matrix over F_p, so every ladder extends and kernels vanish above the
    bottom.  Returns the module and its Euler element (degree `step`).
    """
    hom = {}
    for k in range(rungs + 1):
        for i in range(width):
            hom[f"r{k}_{i}"] = RODegree.integer(k * step)
    coh = {"one": RODegree.zero(), "e": RODegree.integer(step)}
    powers = {}
    top_power = rungs
    for j in range(2, top_power + 1):
        coh[f"e{j}"] = RODegree.integer(j * step)
    cup = {("one", "one"): (("one", 1),), ("one", "e"): (("e", 1),),
           ("e", "one"): (("e", 1),)}
    for j in range(2, top_power + 1):
        prev = "e" if j - 1 == 1 else f"e{j - 1}"
        cup[(prev, "e")] = ((f"e{j}", 1),)
        cup[("e", prev)] = ((f"e{j}", 1),)

    def unit() -> int:
        return rng.randrange(1, p)

    # invertible matrices per rung: width <= 2, so build them directly
    mats = []
    for k in range(rungs):
        if width == 1:
            mats.append([[unit()]])
        else:
            while True:
                m = [[rng.randrange(p) for _ in range(width)] for _ in range(width)]
                det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p
                if det:
                    mats.append(m)
                    break
    cap = {}
    for k in range(rungs + 1):
        for i in range(width):
            cap[(f"r{k}_{i}", "one")] = ((f"r{k}_{i}", 1),)
    for k in range(1, rungs + 1):
        m = mats[k - 1]
        for i in range(width):
            terms = tuple((f"r{k - 1}_{j}", m[j][i] % p)
                          for j in range(width) if m[j][i] % p)
            if terms:
                cap[(f"r{k}_{i}", "e")] = terms
    # iterated powers of e cap consistently: e^j column = product of drops
    for j in range(2, top_power + 1):
        label = f"e{j}"
        for k in range(j, rungs + 1):
            for i in range(width):
                # compose the single-step tables
                coeffs = {f"r{k}_{i}": 1}
                for _ in range(j):
                    new = {}
                    for lbl, c in coeffs.items():
                        for tgt, v in cap.get((lbl, "e"), ()):
                            new[tgt] = (new.get(tgt, 0) + c * v) % p
                    coeffs = {kk: vv for kk, vv in new.items() if vv}
                if coeffs:
                    cap[(f"r{k}_{i}", label)] = tuple(sorted(coeffs.items()))
    module = falg.GradedBasisModule(
        name, p, {"1": 1}, hom, coh, falg.IntegerWindow(rungs * step),
        cup, cap, {}, total_cap_columns="all")
    return module, module.element("e", "coh")


def random_sequence(rng: random.Random, module: falg.GradedBasisModule,
                    euler: falg.Element, weight: int, stability: RODegree,
                    length: int, name: str = "synt") -> eu.EulerianSequence:
    """A random verified sequence built by preimage lifts from a kernel seed."""
    capping = falg.cap_map(module, euler)
    step = euler.degree()
    base = RODegree.zero()
    seed_candidates = falg.kernel(capping, base)
    if not seed_candidates:
        raise RuntimeError("ladder module has no bottom kernel to seed from")
    coeffs = {}
    for el in seed_candidates:
        c = rng.randrange(module.p)
        for lbl, v in el.coeffs.items():
            coeffs[lbl] = (coeffs.get(lbl, 0) + c * v) % module.p
    x0 = falg.Element(module, "hom", coeffs, base)
    if x0.is_zero():
        x0 = seed_candidates[0]
    entries = [x0]
    for _ in range(length - 1):
        sol = falg.preimage(capping, entries[-1])
        if sol is None:
            break
        particular, kern = sol
        lift = particular
        for el in kern:
            c = rng.randrange(module.p)
            if c:
                lift = lift + el.scale(c)
        entries.append(lift)
    seq = eu.EulerianSequence(name, weight, stability, module, euler, entries, base)
    res = eu.verify(seq)
    assert res.ok, f"synthetic generator produced a bad ladder: {res.first_failure}"
    return seq
