#!/usr/bin/env python3
"""Regenerate the shipped data files under src/eulercalc/data.

Groups come from the fingroup constructors, tables are specified here and
validated by the orthogonality checks on load, instance bundles are built
by the builders in this script.  Run from the repository root:

    python tools/gen_data.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from eulercalc import fingroup as fg
from eulercalc import repring

DATA = ROOT / "src" / "eulercalc" / "data"


def dump(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path.relative_to(ROOT)}")


def group_json(G: fg.FiniteGroup) -> dict:
    table = [[G.mul(a, b) for b in range(G.order)] for a in range(G.order)]
    return {"name": G.name, "order": G.order, "mul_table": table}


def gen_groups() -> dict[str, fg.FiniteGroup]:
    c2 = fg.FiniteGroup.cyclic(2)
    groups = {
        "C1": fg.FiniteGroup.cyclic(1),
        "C2": c2,
        "C3": fg.FiniteGroup.cyclic(3),
        "C4": fg.FiniteGroup.cyclic(4),
        "C2xC2": fg.FiniteGroup.direct_product(c2, c2),
        "S3": fg.FiniteGroup.symmetric(3),
    }
    for name, G in groups.items():
        dump(DATA / "groups" / f"{name}.json", group_json(G))
    return groups


def gen_tables(groups) -> None:
    z = lambda *cs: list(cs)  # zeta-coefficient list

    tables = {
        "C1": {
            "class_reps": [0], "class_sizes": [1], "cyclotomic_order": 1,
            "real_irreducibles": [{"label": "1", "dim": 1, "values": [1]}],
            "complex_irreducibles": [{"label": "1", "dim": 1, "values": [1]}],
        },
        "C2": {
            "class_reps": [0, 1], "class_sizes": [1, 1], "cyclotomic_order": 1,
            "real_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1]},
                {"label": "sgn", "dim": 1, "values": [1, -1]},
            ],
            "complex_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1]},
                {"label": "sgn", "dim": 1, "values": [1, -1]},
            ],
        },
        "C3": {
            "class_reps": [0, 1, 2], "class_sizes": [1, 1, 1], "cyclotomic_order": 3,
            "real_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1]},
                {"label": "v", "dim": 2, "schur": 2, "values": [2, -1, -1]},
            ],
            "complex_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1]},
                {"label": "w", "dim": 1, "values": [1, z(0, 1), z(0, 0, 1)]},
                {"label": "w2", "dim": 1, "values": [1, z(0, 0, 1), z(0, 1)]},
            ],
        },
        "C4": {
            "class_reps": [0, 1, 2, 3], "class_sizes": [1, 1, 1, 1], "cyclotomic_order": 4,
            "real_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1, 1]},
                {"label": "sgn", "dim": 1, "values": [1, -1, 1, -1]},
                {"label": "v", "dim": 2, "schur": 2, "values": [2, 0, -2, 0]},
            ],
            "complex_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1, 1]},
                {"label": "i", "dim": 1, "values": [1, z(0, 1), -1, z(0, -1)]},
                {"label": "m1", "dim": 1, "values": [1, -1, 1, -1]},
                {"label": "mi", "dim": 1, "values": [1, z(0, -1), -1, z(0, 1)]},
            ],
        },
        # direct product C2 x C2, element (x, y) indexed as 2x + y
        "C2xC2": {
            "class_reps": [0, 1, 2, 3], "class_sizes": [1, 1, 1, 1], "cyclotomic_order": 1,
            "real_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1, 1]},
                {"label": "s1", "dim": 1, "values": [1, 1, -1, -1]},
                {"label": "s2", "dim": 1, "values": [1, -1, 1, -1]},
                {"label": "s12", "dim": 1, "values": [1, -1, -1, 1]},
            ],
            "complex_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1, 1]},
                {"label": "s1", "dim": 1, "values": [1, 1, -1, -1]},
                {"label": "s2", "dim": 1, "values": [1, -1, 1, -1]},
                {"label": "s12", "dim": 1, "values": [1, -1, -1, 1]},
            ],
        },
        # S3 with elements the sorted permutations of (0,1,2); classes are
        # {e}, transpositions, 3-cycles with representatives 0, 1, 3
        "S3": {
            "class_reps": [0, 1, 3], "class_sizes": [1, 3, 2], "cyclotomic_order": 1,
            "real_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1]},
                {"label": "sgn", "dim": 1, "values": [1, -1, 1]},
                {"label": "std", "dim": 2, "values": [2, 0, -1]},
            ],
            "complex_irreducibles": [
                {"label": "1", "dim": 1, "values": [1, 1, 1]},
                {"label": "sgn", "dim": 1, "values": [1, -1, 1]},
                {"label": "std", "dim": 2, "values": [2, 0, -1]},
            ],
        },
    }
    for name, spec in tables.items():
        # validate before writing
        repring.load_table(spec, groups[name])
        dump(DATA / "tables" / f"{name}.json", spec)


def main() -> None:
    groups = gen_groups()
    gen_tables(groups)
    try:
        from gen_instances import gen_all_instances  # noqa: F401
    except ImportError:
        gen_all_instances = None
    if gen_all_instances is not None:
        gen_all_instances(DATA)


if __name__ == "__main__":
    main()
