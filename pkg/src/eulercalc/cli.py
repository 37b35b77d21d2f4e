"""Command-line front end.

Exit codes: 0 success, 1 mathematical falsification (a computation ran to
completion and the claim is false), 2 data or usage errors.  Every
subcommand takes --json for a machine-readable report with a versioned
schema; textual and JSON output are byte-deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import eulerian as eu
from . import falg, fingroup, grouphom, instances, opcatalog, oracle, repring, wreath
from .degrees import RODegree, parse_degree

SCHEMA = "eulercalc-report/1"

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        body = {"schema": SCHEMA, "command": args.command}
        body.update(payload)
        print(json.dumps(body, indent=1, sort_keys=True))
    else:
        print(text)


def _load_bundle(args) -> instances.InstanceBundle:
    base = Path(args.data_dir) if getattr(args, "data_dir", None) else None
    return instances.load(args.instance, base)


def _load_seq(args, bundle) -> eu.EulerianSequence:
    if args.sequence and args.sequence in bundle.sequences:
        return bundle.sequence(args.sequence)
    path = Path(args.sequence)
    if not path.exists():
        raise CliError(f"no named sequence or file {args.sequence!r}; "
                       f"bundle has {sorted(bundle.sequences)}")
    return eu.load_sequence(path, bundle.module, bundle.euler)


# -- subcommand handlers ------------------------------------------------------

def cmd_verify(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    res = eu.verify(seq)
    payload = {"ok": res.ok, "conclusive": res.conclusive,
               "first_failure": res.first_failure, "sequence": seq.name}
    emit(args, payload,
         f"verify {seq.name}: {'ok' if res.ok else 'FALSE'}"
         + ("" if res.conclusive else " (inconclusive: window too small)")
         + (f"\n  {res.first_failure}" if res.first_failure and not res.ok else ""))
    return EXIT_OK if res.ok else EXIT_FALSIFIED


def cmd_degree(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    d = eu.degree(seq)
    emit(args, {"sequence": seq.name, "degree": d.to_json()},
         f"degree {seq.name} = {d}")
    return EXIT_OK


def _dump_seq(args, seq: eu.EulerianSequence) -> int:
    data = seq.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
        emit(args, {"written": args.out, "sequence": seq.name},
             f"wrote {seq.name} to {args.out}")
    else:
        emit(args, {"sequence": data}, json.dumps(data, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_shift(args) -> int:
    bundle = _load_bundle(args)
    return _dump_seq(args, eu.shift(_load_seq(args, bundle), args.k))


def cmd_reindex(args) -> int:
    bundle = _load_bundle(args)
    return _dump_seq(args, eu.reindex(_load_seq(args, bundle), args.k))


def cmd_restrict(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    out = bundle.restrict_sequence(seq, f"restrict:{args.to}")
    return _dump_seq(args, out)


def cmd_fix(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    out = bundle.mod_geo_fix_sequence(seq, f"modfix:{args.to}")
    return _dump_seq(args, out)


def cmd_diagonal(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    tensor = falg.tensor_power(bundle.module, args.k)
    cop = falg.derive_coproduct(bundle.module, tensor)
    ps = eu.diagonal(seq, args.k, cop)
    res = eu.verify_pseudo(ps)
    payload = {"ok": res.ok, "conclusive": res.conclusive,
               "entries": [x.to_json() for x in ps.entries]}
    emit(args, payload,
         f"diagonal {seq.name} fold {args.k}: pseudo-Eulerian = {res.ok}")
    return EXIT_OK if res.ok else EXIT_FALSIFIED


def cmd_enumerate(args) -> int:
    bundle = _load_bundle(args)
    lo, hi = args.base_min, args.base_max
    bases = [RODegree.integer(d) for d in range(lo, hi + 1)]
    sols = eu.enumerate_sequences(bundle.module, bundle.euler, args.weight,
                                  bundle.stability, bases,
                                  max_degree=RODegree.integer(args.max))
    names = []
    catalog = []
    for name, seq in sorted(bundle.sequences.items()):
        for k in range(args.max + 1):
            catalog.append((f"{name}[{k}]", eu.shift(seq, k)))
    lines = []
    for sol in sols:
        den = eu.denote(sol, catalog)
        label = repr(den) if den.named else "<unnamed>"
        names.append({"base_degree": sol.base_degree.to_json(), "denotation": label})
        lines.append(f"  base {sol.base_degree!r}: {label}")
    emit(args, {"count": len(sols), "solutions": names},
         f"enumerate weight {args.weight}, bases {lo}..{hi}, entries <= {args.max}: "
         f"{len(sols)} sequences\n" + "\n".join(lines))
    return EXIT_OK


def cmd_denote(args) -> int:
    bundle = _load_bundle(args)
    seq = _load_seq(args, bundle)
    catalog = []
    for name, named in sorted(bundle.sequences.items()):
        for k in range(args.max_shift + 1):
            catalog.append((f"{name}[{k}]", eu.shift(named, k)))
    den = eu.denote(seq, catalog)
    payload = {"named": den.named,
               "terms": [[n, c] for n, c in den.terms] if den.named else None}
    emit(args, payload, f"denote {seq.name}: {den!r}")
    return EXIT_OK if den.named else EXIT_FALSIFIED


def cmd_product(args) -> int:
    data = json.loads(Path(args.data).read_text())
    W = _wreath_from_json(data)
    lhs = eu.load_sequence(args.lhs, W.left)
    rhs = eu.load_sequence(args.rhs, W.right)
    prod = wreath.product(lhs, rhs, W)
    payload = {"weight": prod.weight, "degree": eu.degree(prod).to_json(),
               "entries": [x.to_json() for x in prod.entries]}
    emit(args, payload,
         f"product {lhs.name} (.) {rhs.name}: weight {prod.weight}, "
         f"degree {eu.degree(prod)}")
    return EXIT_OK


def cmd_validate_wreath(args) -> int:
    data = json.loads(Path(args.data).read_text())
    W = _wreath_from_json(data)
    samples = []
    for pair in args.samples or []:
        l, r = pair.split(",", 1)
        samples.append((eu.load_sequence(l, W.left), eu.load_sequence(r, W.right)))
    report = wreath.validate(W, samples)
    emit(args, {"ok": report.ok, "failures": report.failures},
         ("wreath data valid" if report.ok
          else "wreath data INVALID:\n  " + "\n  ".join(report.failures)))
    return EXIT_OK if report.ok else EXIT_FALSIFIED


def _wreath_from_json(data: dict) -> wreath.WreathData:
    mods = {key: falg.GradedBasisModule.from_json(val)
            for key, val in data["modules"].items()}
    left, right = mods[data["left"]], mods[data["right"]]
    middle, target = mods[data["middle"]], mods[data["target"]]
    circ = {(item["left"], item["right"]): tuple((t, int(c)) for t, c in item["result"])
            for item in data["circ"]}
    push = falg.LinearMap.from_json(data["push"], middle, target)
    pulled = data.get("pullback_of_target_euler")
    return wreath.WreathData(
        name=data.get("name", "wreath"),
        n=int(data["n"]), m=int(data["m"]),
        left=left, right=right, middle=middle, target=target,
        circ=circ, push=push,
        euler_xy=falg.Element.from_json(middle, data["euler_xy"], "coh"),
        euler_target=falg.Element.from_json(target, data["euler_target"], "coh"),
        pullback_of_target_euler=(
            falg.Element.from_json(middle, pulled, "coh") if pulled else None),
    )


def cmd_oracle(args) -> int:
    p = args.p
    if args.oracle_action == "apply":
        word = oracle.SteenrodWord.parse(args.word, p)
        poly = oracle.parse_poly(args.poly, p, args.nvars)
        result = oracle.apply_word(word, poly)
        emit(args, {"result": repr(result)}, f"{word}({args.poly}) = {result!r}")
        return EXIT_OK
    if args.oracle_action == "adem":
        word = oracle.SteenrodWord.parse(args.word, p)
        nf = oracle.adem_normal_form(word)
        terms = sorted((str(w), c) for w, c in nf.items())
        emit(args, {"normal_form": [[w, c] for w, c in terms]},
             f"{word} = " + (" + ".join(w if c == 1 else f"{c}*({w})"
                                        for w, c in terms) or "0"))
        return EXIT_OK
    if args.oracle_action == "nu":
        val = oracle.nu(args.q, p)
        emit(args, {"value": val}, f"nu({args.q}) = {val} mod {p}")
        return EXIT_OK
    if args.oracle_action == "compose-check":
        w1 = oracle.SteenrodWord.parse(args.w1, p)
        w2 = oracle.SteenrodWord.parse(args.w2, p)
        ok, witness = oracle.compose_check(w1, w2, args.nvars, args.max_degree)
        emit(args, {"ok": ok, "witness": witness},
             f"compose-check {w1} | {w2}: {'ok' if ok else f'FALSE at {witness}'}")
        return EXIT_OK if ok else EXIT_FALSIFIED
    raise CliError(f"unknown oracle action {args.oracle_action!r}")


def cmd_grouphom(args) -> int:
    if args.group_file:
        G = fingroup.load_group(args.group_file)
    else:
        G = repring.standard_group(args.name)
    data = grouphom.emit_module(G, args.p, args.max_deg, method=args.method)
    if args.emit:
        Path(args.emit).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    win = grouphom.homology(G, args.p, args.max_deg, method=args.method)
    payload = {"group": G.name, "p": args.p, "dims": win.dims,
               "emitted": args.emit}
    emit(args, payload,
         f"H_*(B{G.name}; F{args.p}) dims through degree {args.max_deg}: {win.dims}"
         + (f"\nwrote {args.emit}" if args.emit else ""))
    return EXIT_OK


def cmd_repring(args) -> int:
    table = repring.standard_table(args.group) if not args.table_file else \
        repring.load_table(args.table_file,
                           fingroup.load_group(args.group_file) if args.group_file else None)
    if args.repring_action == "irr1":
        chars = repring.irr1(table)
        emit(args, {"labels": list(chars)}, f"Irr1({table.group.name}) = {list(chars)}")
        return EXIT_OK
    if args.repring_action == "tilde-irr1":
        chars = repring.tilde_irr1(table, args.p)
        emit(args, {"labels": list(chars)},
             f"tilde-Irr1({table.group.name}, p={args.p}) = {list(chars)}")
        return EXIT_OK
    if args.repring_action == "degree":
        aliases = {"rho": repring.regular_degree(table)}
        d = parse_degree(args.expr, aliases)
        emit(args, {"degree": d.to_json()}, f"{args.expr} = {d}")
        return EXIT_OK
    if args.repring_action == "fold":
        fold = repring.orientability_fold(table.group, args.p)
        eps = repring.epsilon(table.group, args.p)
        emit(args, {"fold": fold, "epsilon": eps},
             f"fold({table.group.name}, {args.p}) = {fold}, epsilon = {eps}")
        return EXIT_OK
    if args.repring_action == "components":
        aliases = {"rho": repring.regular_degree(table)}
        if args.space == "lens":
            aliases["rhoC"] = repring.complex_regular_degree(table)
        V = parse_degree(args.expr, aliases)
        comps = repring.fixed_components(table, V, args.space, args.p)
        emit(args, {"components": [[l, m] for l, m in comps]},
             f"fixed components of {args.space}({args.expr}) over {table.group.name}: "
             f"{comps} ({len(comps)} components)")
        return EXIT_OK
    raise CliError(f"unknown repring action {args.repring_action!r}")


def cmd_ops(args) -> int:
    label = opcatalog.OpLabel.parse(args.label)
    if args.ops_action == "degree":
        d = opcatalog.degree(label)
        emit(args, {"degree": d.to_json()}, f"deg {label!r} = {d}")
        return EXIT_OK
    if args.ops_action == "underlying":
        word = opcatalog.underlying(label)
        emit(args, {"word": str(word)}, f"underlying {label!r} = {word}")
        return EXIT_OK
    table = repring.standard_table(label.group)
    sub = _parse_subgroup(table.group, args.to)
    if args.ops_action == "restrict":
        out = opcatalog.restrict_label(label, sub)
        emit(args, {"label": repr(out)}, f"restrict {label!r} to {args.to}: {out!r}")
        return EXIT_OK
    if args.ops_action == "fix":
        out = opcatalog.mod_geo_fix_label(label, sub)
        if isinstance(out, opcatalog.TrivialOp):
            emit(args, {"trivial": True, "reason": out.reason}, repr(out))
        else:
            emit(args, {"trivial": False, "label": repr(out)},
                 f"fix {label!r} at {args.to}: {out!r}")
        return EXIT_OK
    raise CliError(f"unknown ops action {args.ops_action!r}")


def _parse_subgroup(G: fingroup.FiniteGroup, spec: str) -> fingroup.Subgroup:
    """A subgroup from 'members:0,2' or by standard-group name (e.g. C2)."""
    if spec.startswith("members:"):
        members = tuple(int(x) for x in spec.split(":", 1)[1].split(","))
        return fingroup.Subgroup(G, members)
    for sub in fingroup.subgroups_up_to_conjugacy(G):
        grp, _ = sub.as_group()
        try:
            cand = repring.standard_group(spec)
        except Exception:
            raise CliError(f"unknown subgroup spec {spec!r}")
        if grp.order == cand.order and fingroup.find_isomorphism(cand, grp):
            return sub
    raise CliError(f"{G.name} has no subgroup matching {spec!r}")


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eulercalc",
        description="Exact calculus for Eulerian sequences and Steenrod bookkeeping")
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    ap.add_argument("--data-dir", help="override the bundled data directory")
    sub = ap.add_subparsers(dest="command", required=True)

    def seq_cmd(name, fn, **extra):
        c = sub.add_parser(name)
        c.add_argument("--instance", required=True)
        c.add_argument("--sequence", required=True,
                       help="a named sequence of the bundle or a JSON file")
        for key, kw in extra.items():
            c.add_argument(key, **kw)
        c.set_defaults(func=fn)
        return c

    seq_cmd("verify", cmd_verify)
    seq_cmd("degree", cmd_degree)
    c = seq_cmd("shift", cmd_shift, **{"-k": dict(type=int, required=True)})
    c.add_argument("-o", "--out")
    c = seq_cmd("reindex", cmd_reindex, **{"-k": dict(type=int, required=True)})
    c.add_argument("-o", "--out")
    c = seq_cmd("restrict", cmd_restrict, **{"--to": dict(required=True)})
    c.add_argument("-o", "--out")
    c = seq_cmd("fix", cmd_fix, **{"--to": dict(required=True)})
    c.add_argument("-o", "--out")
    c = seq_cmd("diagonal", cmd_diagonal, **{"-k": dict(type=int, default=2)})

    c = sub.add_parser("enumerate")
    c.add_argument("--instance", required=True)
    c.add_argument("--weight", type=int, default=2)
    c.add_argument("--max", type=int, default=20, help="top entry degree")
    c.add_argument("--base-min", type=int, default=-20)
    c.add_argument("--base-max", type=int, default=0)
    c.set_defaults(func=cmd_enumerate)

    c = seq_cmd("denote", cmd_denote)
    c.add_argument("--max-shift", type=int, default=24)

    c = sub.add_parser("product")
    c.add_argument("--lhs", required=True)
    c.add_argument("--rhs", required=True)
    c.add_argument("--data", required=True, help="wreath structure file")
    c.set_defaults(func=cmd_product)

    c = sub.add_parser("validate-wreath")
    c.add_argument("--data", required=True)
    c.add_argument("--samples", nargs="*", help="pairs lhs.json,rhs.json")
    c.set_defaults(func=cmd_validate_wreath)

    c = sub.add_parser("oracle")
    c.add_argument("oracle_action", choices=["apply", "adem", "nu", "compose-check"])
    c.add_argument("--word", default="")
    c.add_argument("--poly", default="")
    c.add_argument("--w1")
    c.add_argument("--w2")
    c.add_argument("-p", type=int, default=2)
    c.add_argument("-q", type=int, default=0)
    c.add_argument("-N", "--nvars", type=int, default=4)
    c.add_argument("-D", "--max-degree", type=int, default=6)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("grouphom")
    c.add_argument("grouphom_action", choices=["compute"])
    c.add_argument("--name", default="C2", help="standard group name")
    c.add_argument("--group", dest="group_file", help="group JSON file")
    c.add_argument("-p", type=int, default=2)
    c.add_argument("--max-deg", type=int, default=6)
    c.add_argument("--method", default="auto", choices=["auto", "bar", "cover"])
    c.add_argument("--emit", help="write a falg module file")
    c.set_defaults(func=cmd_grouphom)

    c = sub.add_parser("repring")
    c.add_argument("repring_action",
                   choices=["irr1", "tilde-irr1", "degree", "fold", "components"])
    c.add_argument("--group", default="C2", help="standard group name")
    c.add_argument("--group-file", dest="group_file")
    c.add_argument("--table", dest="table_file")
    c.add_argument("--expr", default="rho")
    c.add_argument("-p", type=int, default=2)
    c.add_argument("--space", default="projective", choices=["projective", "lens"])
    c.set_defaults(func=cmd_repring)

    c = sub.add_parser("ops")
    c.add_argument("ops_action", choices=["degree", "restrict", "fix", "underlying"])
    c.add_argument("--label", required=True,
                   help="e.g. Sq[k=2,G=C4,lambda=sgn] or P[k=1,G=C3,p=3]")
    c.add_argument("--to", default="members:0", help="subgroup: name or members:i,j,...")
    c.set_defaults(func=cmd_ops)

    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (falg.FalgError, eu.SequenceError, wreath.WreathError,
            instances.InstanceError, oracle.OracleError, opcatalog.LabelError,
            repring.TableError, fingroup.GroupError, grouphom.ResolutionError,
            CliError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
