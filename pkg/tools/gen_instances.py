"""Builders for the shipped instance bundles.

classical2       mod-2 homology of the infinite projective space, window 30
classical_p      mod-p homology of the infinite lens space, p in {3, 5}
c2equivariant    the C2 bundle: free generators over the positive coefficient
                 cone {a^i u^j}, with |a| = sgn and |u| = sgn - 1

Invoked through gen_data.py; everything written here is re-validated by the
instance loader, so a construction slip fails loudly at load time.
"""

from __future__ import annotations

import json
from pathlib import Path

CL2_TOP = 30          # classical2 window
CLP_K = {3: 10, 5: 6}  # ladder length per odd prime
C2_KMAX = 14          # top Euler-power index in the C2 bundle
C2_WMAX = 12          # coefficient box width (i + j <= WMAX)


def dump(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


def classical2_module() -> dict:
    T = CL2_TOP
    hom = [{"label": f"b{i}", "degree": {"1": i}} for i in range(T + 1)]
    coh = [{"label": f"e{i}", "degree": {"1": i}} for i in range(T + 1)]
    cup = [{"left": f"e{i}", "right": f"e{j}", "result": [[f"e{i + j}", 1]]}
           for i in range(T + 1) for j in range(T + 1) if i + j <= T]
    cap = [{"left": f"b{k}", "right": f"e{j}", "result": [[f"b{k - j}", 1]]}
           for k in range(T + 1) for j in range(k + 1)]
    kron = [{"left": f"e{k}", "right": f"b{k}", "value": 1} for k in range(T + 1)]
    return {
        "schema": "eulercalc-module/1",
        "name": "classical2",
        "p": 2,
        "irreps": {"1": 1},
        "window": {"kind": "int_max", "max": T},
        "homology": hom,
        "cohomology": coh,
        "tables": {"cup": cup, "cap": cap, "kron": kron},
        "total_cap_columns": "all",
    }


def classical2_bundle() -> dict:
    T = CL2_TOP
    beta = {
        "schema": "eulercalc-seq/1",
        "name": "beta",
        "weight": 2,
        "stability": {"1": 1},
        "base_degree": {},
        "entries": [[[f"b{i}", 1]] for i in range(T + 1)],
    }
    return {
        "schema": "eulercalc-bundle/1",
        "name": "classical2",
        "p": 2,
        "group": "C1",
        "module": classical2_module(),
        "euler": [["e1", 1]],
        "weight": 2,
        "stability": {"1": 1},
        "sequences": {"beta": beta},
        "structure_maps": {},
        "notes": "H(B Sigma_2; F2): b_k dual to e1^k, Euler class e1.",
    }


def classical_p_module(p: int) -> dict:
    K = CLP_K[p]
    J = K * (p - 1)          # top u-power
    top = 2 * J + 1
    hom, coh = [], []
    for j in range(J + 1):
        hom.append({"label": f"bu{j}", "degree": {"1": 2 * j}})
        hom.append({"label": f"byu{j}", "degree": {"1": 2 * j + 1}})
        coh.append({"label": f"u{j}", "degree": {"1": 2 * j}})
        coh.append({"label": f"yu{j}", "degree": {"1": 2 * j + 1}})
    cup, cap, kron = [], [], []
    for i in range(J + 1):
        for j in range(J + 1):
            if i + j <= J:
                cup.append({"left": f"u{i}", "right": f"u{j}", "result": [[f"u{i + j}", 1]]})
                cup.append({"left": f"u{i}", "right": f"yu{j}", "result": [[f"yu{i + j}", 1]]})
                cup.append({"left": f"yu{i}", "right": f"u{j}", "result": [[f"yu{i + j}", 1]]})
            # yu * yu = 0: the exterior square vanishes, entry omitted
    for j in range(J + 1):
        for i in range(1, j + 1):
            cap.append({"left": f"bu{j}", "right": f"u{i}",
                        "result": [[f"bu{j - i}", 1]]})
            cap.append({"left": f"byu{j}", "right": f"u{i}",
                        "result": [[f"byu{j - i}", 1]]})
        for i in range(j + 1):
            cap.append({"left": f"byu{j}", "right": f"yu{i}",
                        "result": [[f"bu{j - i}", 1]]})
        cap.append({"left": f"bu{j}", "right": "u0", "result": [[f"bu{j}", 1]]})
        cap.append({"left": f"byu{j}", "right": "u0", "result": [[f"byu{j}", 1]]})
        kron.append({"left": f"u{j}", "right": f"bu{j}", "value": 1})
        kron.append({"left": f"yu{j}", "right": f"byu{j}", "value": 1})
    return {
        "schema": "eulercalc-module/1",
        "name": f"classical_p{p}",
        "p": p,
        "irreps": {"1": 1},
        "window": {"kind": "int_max", "max": top},
        "homology": hom,
        "cohomology": coh,
        "tables": {"cup": cup, "cap": cap, "kron": kron},
        "total_cap_columns": "all",
    }


def classical_p_bundle(p: int) -> dict:
    K = CLP_K[p]
    beta = {
        "schema": "eulercalc-seq/1",
        "name": "beta",
        "weight": p,
        "stability": {"1": 2},
        "base_degree": {},
        "entries": [[[f"bu{k * (p - 1)}", 1]] for k in range(K + 1)],
    }
    zeta = {
        "schema": "eulercalc-seq/1",
        "name": "zeta",
        "weight": p,
        "stability": {"1": 2},
        "base_degree": {"1": -1},
        "entries": [[]] + [[[f"byu{k * (p - 1) - 1}", 1]] for k in range(1, K + 1)],
    }
    return {
        "schema": "eulercalc-bundle/1",
        "name": f"classical_p{p}",
        "p": p,
        "group": "C1",
        "module": classical_p_module(p),
        "euler": [[f"u{p - 1}", 1]],
        "weight": p,
        "stability": {"1": 2},
        "sequences": {"beta": beta, "zeta": zeta},
        "structure_maps": {},
        "notes": "H(B C_p; F_p): bu_j dual to u^j, byu_j dual to y u^j; "
                 "the pulled-back Euler class is u^{p-1}.",
    }


# -- the C2 bundle ---------------------------------------------------------------

def _c2_hom_degs(fam: str, i: int, j: int, k: int) -> dict:
    # |a^i u^j b_k| = k rho - i sgn - j (sgn - 1); c adds one extra sgn
    t = k + j
    s = (k - i - j) + (1 if fam == "c" else 0)
    out = {}
    if t:
        out["1"] = t
    if s:
        out["sgn"] = s
    return out


def _c2_coh_degs(i: int, j: int, d: int, k: int) -> dict:
    t = k - j
    s = d + k + i + j
    out = {}
    if t:
        out["1"] = t
    if s:
        out["sgn"] = s
    return out


def c2_module() -> dict:
    kmax, wmax = C2_KMAX, C2_WMAX
    hom, coh = [], []
    monos = [(i, j) for i in range(wmax + 1) for j in range(wmax + 1 - i)]
    for (i, j) in monos:
        for k in range(kmax + 1):
            hom.append({"label": f"a{i}u{j}b{k}", "degree": _c2_hom_degs("b", i, j, k)})
            hom.append({"label": f"a{i}u{j}c{k}", "degree": _c2_hom_degs("c", i, j, k)})
            for d in (0, 1):
                coh.append({"label": f"a{i}u{j}y{d}e{k}",
                            "degree": _c2_coh_degs(i, j, d, k)})
    cup = []
    for d1 in (0, 1):
        for k1 in range(kmax + 1):
            for d2 in (0, 1):
                for k2 in range(kmax + 1):
                    if k1 + k2 > kmax:
                        continue
                    left, right = f"a0u0y{d1}e{k1}", f"a0u0y{d2}e{k2}"
                    if d1 + d2 <= 1:
                        cup.append({"left": left, "right": right,
                                    "result": [[f"a0u0y{d1 + d2}e{k1 + k2}", 1]]})
                    else:
                        # the quadratic relation: y*y = a*y + u*e_rho
                        if k1 + k2 + 1 <= kmax:
                            cup.append({
                                "left": left, "right": right,
                                "result": [[f"a1u0y1e{k1 + k2}", 1],
                                           [f"a0u1y0e{k1 + k2 + 1}", 1]]})
    cap = []
    euler_cols = [("a0u0y0e0", 0), ("a0u0y0e1", 1), ("a0u0y0e2", 2)]
    for (i, j) in monos:
        for k in range(kmax + 1):
            for col, drop in euler_cols:
                if k - drop >= 0:
                    cap.append({"left": f"a{i}u{j}b{k}", "right": col,
                                "result": [[f"a{i}u{j}b{k - drop}", 1]]})
                    cap.append({"left": f"a{i}u{j}c{k}", "right": col,
                                "result": [[f"a{i}u{j}c{k - drop}", 1]]})
    return {
        "schema": "eulercalc-module/1",
        "name": "c2equivariant",
        "p": 2,
        "irreps": {"1": 1, "sgn": 1},
        "window": {"kind": "c2box", "kmax": kmax, "wmax": wmax, "sign_label": "sgn"},
        "homology": hom,
        "cohomology": coh,
        "tables": {"cup": cup, "cap": cap, "kron": []},
        "total_cap_columns": ["a0u0y0e0", "a0u0y0e1", "a0u0y0e2"],
    }


def c2_bundle() -> dict:
    kmax = C2_KMAX
    beta = {
        "schema": "eulercalc-seq/1",
        "name": "beta",
        "weight": 2,
        "stability": {"1": 1, "sgn": 1},
        "base_degree": {},
        "entries": [[[f"a0u0b{k}", 1]] for k in range(kmax + 1)],
    }
    zeta = {
        "schema": "eulercalc-seq/1",
        "name": "zeta",
        "weight": 2,
        "stability": {"1": 1, "sgn": 1},
        "base_degree": {"1": -1},
        "entries": [[]] + [[[f"a0u0c{k - 1}", 1]] for k in range(1, kmax + 2)
                           if k - 1 <= kmax],
    }
    restrict_entries = {}
    modfix_entries = {}
    monos = [(i, j) for i in range(C2_WMAX + 1) for j in range(C2_WMAX + 1 - i)]
    for (i, j) in monos:
        for k in range(kmax + 1):
            if i == 0 and 2 * k <= CL2_TOP:
                restrict_entries[f"a{i}u{j}b{k}"] = [[f"b{2 * k}", 1]]
            else:
                restrict_entries[f"a{i}u{j}b{k}"] = []
            if i == 0 and 2 * k + 1 <= CL2_TOP:
                restrict_entries[f"a{i}u{j}c{k}"] = [[f"b{2 * k + 1}", 1]]
            else:
                restrict_entries[f"a{i}u{j}c{k}"] = []
            # modified geometric fixed points: a -> 1, u -> 0, defined on the
            # b family only; the c family is deliberately absent (the engine
            # refuses entries whose image the shipped data does not identify)
            modfix_entries[f"a{i}u{j}b{k}"] = ([[f"b{k}", 1]] if j == 0 else [])
    restrict_map = {
        "schema": "eulercalc-map/1",
        "name": "restrict_c2_to_e",
        "source": "c2equivariant",
        "target": "classical2",
        "side": "hom",
        "degree_rule": {"kind": "hom", "images": {"1": {"1": 1}, "sgn": {"1": 1}}},
        "entries": restrict_entries,
    }
    modfix_map = {
        "schema": "eulercalc-map/1",
        "name": "modfix_c2",
        "source": "c2equivariant",
        "target": "classical2",
        "side": "hom",
        "degree_rule": {"kind": "hom", "images": {"1": {"1": 1}, "sgn": {}}},
        "entries": modfix_entries,
    }
    return {
        "schema": "eulercalc-bundle/1",
        "name": "c2equivariant",
        "p": 2,
        "group": "C2",
        "module": c2_module(),
        "euler": [["a0u0y0e1", 1]],
        "weight": 2,
        "stability": {"1": 1, "sgn": 1},
        "sequences": {"beta": beta, "zeta": zeta},
        "structure_maps": {
            "restrict:C1": {
                "map": restrict_map,
                "target": "classical2",
                "euler_image": [["e2", 1]],
                "stability": {"1": 2},
                "euler_exponent": 2,
                "absent_is_undefined": False,
            },
            "modfix:C2": {
                "map": modfix_map,
                "target": "classical2",
                "euler_image": [["e1", 1]],
                "stability": {"1": 1},
                "absent_is_undefined": True,
            },
        },
        "notes": "Free generators b_k (dual to e_rho^k) and c_k (dual to "
                 "y e_rho^k) over the positive coefficient cone a^i u^j; "
                 "the cup table carries y^2 = a y + u e_rho.",
    }


def gen_all_instances(data_dir: Path) -> None:
    base = data_dir / "instances"
    dump(base / "classical2.json", classical2_bundle())
    for p in sorted(CLP_K):
        dump(base / f"classical_p{p}.json", classical_p_bundle(p))
    dump(base / "c2equivariant.json", c2_bundle())
