"""Command-line front end.

Exit codes: 0 on PASS / SAT, 1 on FAIL / UNSAT, 2 on usage or input-format errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import report as rp
from .amalgamation import AmalgamError, check_fraisse, strong_amalgam
from .independence import (UnsupportedError, indep_star, indiscernibility_violation, morley_sequence,
                           parse_spec)
from .oracle import SearchBudgetExceeded, node_budget, satisfiable
from .scenarios import SCENARIOS, run_all, run_scenario
from .structure import (FormatError, StructureError, dump_structure, load_structure, random_structure,
                        save_structure, validate)
from .terms import GRAMMAR, DiagramSyntaxError, SortError, load_diagram
from .tree_index import TreeError, enumerate_tree, format_node, restrict


class UsageError(Exception):
    pass


def _ids(text: str) -> list[str]:
    return text.replace(",", " ").split()


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(rp.dumps(payload))
    else:
        print(text)


# ---------------------------------------------------------------- subcommands

def cmd_tree(args) -> int:
    if args.action != "enum":
        raise UsageError(f"unknown tree action {args.action!r}")
    if args.levels is None:
        nodes = enumerate_tree(args.alpha, args.branch)
    else:
        nodes = restrict(args.alpha, [int(x) for x in _ids(args.levels)], args.branch)
    lines = [format_node(n) for n in nodes]
    _emit(args, {"v": rp.SCHEMA_VERSION, "alpha": args.alpha, "nodes": lines}, "\n".join(lines))
    return 0


def cmd_validate(args) -> int:
    S = load_structure(args.file)
    r = validate(S)
    _emit(args, rp.single(r), r.render(verbose=True))
    return 0 if r else 1


def cmd_gen(args) -> int:
    S = random_structure(args.n, (args.objects, args.functions), args.classes, args.seed)
    if args.output:
        save_structure(S, args.output)
    else:
        sys.stdout.write(dump_structure(S))
    return 0


def cmd_amalgamate(args) -> int:
    A, B, C = load_structure(args.base), load_structure(args.left), load_structure(args.right)
    try:
        D = strong_amalgam(A, B, C)
    except AmalgamError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {json.dumps(rp._jsonable(exc.witness), sort_keys=True)}", file=sys.stderr)
        return 1
    if args.output:
        save_structure(D, args.output)
        print(f"wrote {args.output} ({len(D)} elements)")
    else:
        sys.stdout.write(dump_structure(D))
    return 0


def cmd_fraisse(args) -> int:
    r = check_fraisse(args.n, args.cap, args.mode, samples=args.samples, seed=args.seed)
    _emit(args, rp.single(r), r.render(verbose=True))
    return 0 if r else 1


def cmd_oracle(args) -> int:
    base = load_structure(args.base)
    d = load_diagram(args.diagram)
    w = satisfiable(base, d)
    if w is None:
        _emit(args, {"v": rp.SCHEMA_VERSION, "sat": False}, "UNSAT")
        return 1
    if args.output:
        save_structure(w.extension, args.output)
    asg = " ".join(f"{k}={v}" for k, v in w.assignment.items())
    text = f"SAT\nassignment: {asg}\n" + ("" if args.output else dump_structure(w.extension).rstrip())
    _emit(args, {"v": rp.SCHEMA_VERSION, "sat": True, "assignment": w.assignment,
                 "witness": dump_structure(w.extension)}, text.rstrip())
    return 0


def cmd_indep(args) -> int:
    S = load_structure(args.ambient)
    r = indep_star(S, _ids(args.a), _ids(args.b), _ids(args.base))
    _emit(args, rp.single(r), r.render(verbose=True))
    return 0 if r else 1


def _load_spec(path: str, ambient: Optional[str]):
    with open(path, encoding="utf-8") as fh:
        spec, amb = parse_spec(fh.read())
    if ambient is None:
        if amb is None:
            raise UsageError("no ambient structure: pass --ambient or add an 'ambient:' line")
        ambient = amb if os.path.isabs(amb) else os.path.join(os.path.dirname(path), amb)
    return load_structure(ambient), spec


def cmd_morley(args) -> int:
    S, spec = _load_spec(args.spec, args.ambient)
    seq, grown = morley_sequence(S, spec, args.len)
    bad = indiscernibility_violation(grown, spec.base, seq)
    r = rp.Report("morley", detail=f"L={args.len}")
    r.add("sequence is indiscernible over the base", bad is None,
          "equal type over the base for equal-length increasing subsequences",
          {"indices": [list(x) for x in bad]} if bad else None)
    payload = {**rp.single(r), "sequence": [list(t) for t in seq], "structure": dump_structure(grown)}
    text = "\n".join(" ".join(t) for t in seq) + "\n" + r.render(verbose=True)
    if args.output:
        save_structure(grown, args.output)
    _emit(args, payload, text)
    return 0 if r else 1


def cmd_verify(args) -> int:
    if args.scenario == "all":
        reports = run_all(args.seed, args.len, args.m)
    elif args.scenario in SCENARIOS:
        reports = run_scenario(args.scenario, args.seed, args.len, args.m)
    else:
        raise UsageError(f"unknown scenario {args.scenario!r}; choose from: all, {', '.join(SCENARIOS)}")
    b = rp.bundle(reports)
    _emit(args, b, "\n".join(r.render(verbose=args.verbose) for r in reports))
    return 0 if b["pass"] else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kimlab", description="Finite models of T_n and checks on them.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tree", help="enumerate truncations of the tree T_alpha")
    t.add_argument("action", choices=["enum"])
    t.add_argument("--alpha", type=int, required=True)
    t.add_argument("--branch", type=int, required=True)
    t.add_argument("--levels", help="restrict to these levels, e.g. '0 2'")
    t.add_argument("--json", action="store_true")
    t.set_defaults(fn=cmd_tree)

    v = sub.add_parser("validate", help="check a .tn file against the T_n axioms")
    v.add_argument("file")
    v.add_argument("--json", action="store_true")
    v.set_defaults(fn=cmd_validate)

    g = sub.add_parser("gen", help="random model of T_n")
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--objects", type=int, default=4)
    g.add_argument("--functions", type=int, default=2)
    g.add_argument("--classes", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(fn=cmd_gen)

    a = sub.add_parser("amalgamate", help="strong amalgam of two structures over a common one")
    a.add_argument("--base", required=True)
    a.add_argument("--left", required=True)
    a.add_argument("--right", required=True)
    a.add_argument("-o", "--output")
    a.set_defaults(fn=cmd_amalgamate)

    f = sub.add_parser("fraisse-check", help="HP, JEP, SAP and the local finiteness bound")
    f.add_argument("--n", type=int, default=1)
    f.add_argument("--cap", type=int, default=3)
    f.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    f.add_argument("--samples", type=int, default=10_000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--json", action="store_true")
    f.set_defaults(fn=cmd_fraisse)

    o = sub.add_parser("oracle", help="satisfiability of a diagram over a base")
    o.add_argument("--base", required=True)
    o.add_argument("--diagram", required=True)
    o.add_argument("-o", "--output", help="write the witness extension here")
    o.add_argument("--json", action="store_true")
    o.set_defaults(fn=cmd_oracle)

    i = sub.add_parser("indep", help="decide a ⫝*_C b")
    i.add_argument("--ambient", required=True)
    i.add_argument("--a", required=True)
    i.add_argument("--b", required=True)
    i.add_argument("--base", default="")
    i.add_argument("--json", action="store_true")
    i.set_defaults(fn=cmd_indep)

    m = sub.add_parser("morley", help="finite Morley sequence of a generic spec (n = 1)")
    m.add_argument("--spec", required=True)
    m.add_argument("--ambient")
    m.add_argument("--len", type=int, default=4)
    m.add_argument("-o", "--output")
    m.add_argument("--json", action="store_true")
    m.set_defaults(fn=cmd_morley)

    s = sub.add_parser("verify", help="run scenario checks")
    s.add_argument("scenario", help="all or one of: " + ", ".join(SCENARIOS))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--len", type=int, default=4)
    s.add_argument("--m", type=int)
    s.add_argument("--json", action="store_true")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(fn=cmd_verify)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        node_budget()
        return args.fn(args)
    except DiagramSyntaxError as exc:
        print(f"error: {exc}\n{GRAMMAR}", file=sys.stderr)
        return 2
    except (FormatError, UsageError, SortError, TreeError, UnsupportedError, StructureError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SearchBudgetExceeded as exc:
        print(f"error: {exc} (raise KIMLAB_CAP)", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
