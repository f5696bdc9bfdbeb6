"""Command line entry point ``herbrand``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .builder import BuildConfig, BuildError, HerbrandBuilder
from .debugger import TreeRejected, ValuationError, parse_valuation, verify, walk
from .frontend import TheoryError
from .kam.encodings import DecodeError, decode, with_prelude
from .kam.machine import Machine
from .kam.parser import ProgramError
from .kam.terms import Ref, show
from .logic import htree_check, tree_inner_nodes, tree_leaves
from .scheduler import SchedulerError, builtin_proof, load_proof, run_herbrand
from .theories import load_theory
from .treeio import loads, render

OK, DOMAIN_ERROR, USAGE_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _theory(source: str):
    try:
        return load_theory(source)
    except OSError as e:
        raise UsageError(f"cannot read {source}: {e.strerror}") from None
    except ValueError as e:
        raise UsageError(str(e)) from None


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_tree(th, path: str):
    try:
        return loads(_read(path), th)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON: {e}") from None
    except KeyError as e:
        raise TreeRejected(f"tree cites an unknown index: {e}") from None
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_build(args) -> int:
    th = _theory(args.theory)
    cfg = BuildConfig(fuel=args.fuel, max_depth=args.max_depth, strategy=args.strategy)
    b = HerbrandBuilder(th, cfg)
    t0 = time.perf_counter()
    try:
        tree = b.build()
    except BuildError as e:
        print(f"error: {e}", file=sys.stderr)
        return DOMAIN_ERROR
    elapsed = time.perf_counter() - t0
    _write(render(tree, args.format), args.output)
    print(f"built tree: {tree_inner_nodes(tree)} inner nodes, {len(tree_leaves(tree))} leaves, "
          f"{b.steps} scan steps, {elapsed:.3f}s", file=sys.stderr)
    return OK


def cmd_check(args) -> int:
    th = _theory(args.theory)
    tree = _load_tree(th, args.tree)
    report = htree_check(th, tree)
    if report:
        print(f"ok: {len(tree_leaves(tree))} leaves, every branch refuted")
        return OK
    print(f"rejected: {report.message}")
    if report.path is not None:
        print(f"  at path {report.path}")
    return DOMAIN_ERROR


def cmd_debug(args) -> int:
    th = _theory(args.theory)
    tree = _load_tree(th, args.tree)
    valuation = {}
    for item in args.valuation or ():
        text = _read(item) if Path(item).is_file() else item.replace(";", "\n")
        try:
            valuation.update(parse_valuation(text))
        except ValuationError as e:
            raise UsageError(f"valuation {item!r}: {e}") from None
    default = None if args.default is None else args.default == "true"
    try:
        cex = walk(th, tree, valuation, default)
    except KeyError as e:
        print(f"error: {e.args[0]} (supply it or use --default)", file=sys.stderr)
        return DOMAIN_ERROR
    print(cex)
    if not verify(th, cex):
        print("error: counter-example does not falsify its axiom instance", file=sys.stderr)
        return DOMAIN_ERROR
    print(f"falsified: {th.th(cex.index)}")
    return OK


def cmd_kam_run(args) -> int:
    prog = with_prelude(_read(args.program))
    if args.entry not in prog:
        raise UsageError(f"entry {args.entry!r} is not defined")
    m = Machine(prog)
    res = m.run(Ref(args.entry), fuel=args.fuel, trace=args.trace)
    for line in res.trace:
        print(line)
    if not res.halted:
        print(res.describe())
        return DOMAIN_ERROR
    print(f"{res.reason}: {show(res.value)}  ({res.steps} steps)")
    if args.decode:
        try:
            print(f"decoded {args.decode}: {decode(args.decode, res.value)}")
        except DecodeError as e:
            print(f"error: {e}", file=sys.stderr)
            return DOMAIN_ERROR
    return OK


def cmd_kam_herbrand(args) -> int:
    th = _theory(args.theory)
    if args.proof.startswith("builtin:"):
        try:
            text = builtin_proof(args.proof[len("builtin:"):])
        except ValueError as e:
            raise UsageError(str(e)) from None
    else:
        text = _read(args.proof)
    prog = load_proof(text, th)
    try:
        run = run_herbrand(prog, args.entry, th, fuel=args.fuel, trace=args.trace)
    except SchedulerError as e:
        print(f"error: {e}", file=sys.stderr)
        return DOMAIN_ERROR
    for line in run.trace:
        print(line, file=sys.stderr)
    sys.stdout.write(render(run.tree, args.format))
    print(f"built tree: {tree_inner_nodes(run.tree)} inner nodes, "
          f"{len(tree_leaves(run.tree))} leaves, {run.steps} machine steps, "
          f"{run.frozen} frozen processes", file=sys.stderr)
    return OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="herbrand", description="Herbrand trees for universal theories")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a Herbrand tree directly")
    b.add_argument("theory", help="theory file or builtin:NAME")
    b.add_argument("--strategy", choices=["relevance", "fair"], default="relevance")
    b.add_argument("--fuel", type=int, default=100_000, help="maximum index evaluations")
    b.add_argument("--max-depth", type=int, default=256)
    b.add_argument("--format", choices=["json", "dot", "text"], default="json")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="check a JSON tree against a theory")
    c.add_argument("theory")
    c.add_argument("tree")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("debug", help="walk a tree with an atom valuation")
    d.add_argument("theory")
    d.add_argument("tree")
    d.add_argument("--valuation", action="append",
                   help="file of Pred(args)=true|false lines, or such assignments inline (';'-separated)")
    d.add_argument("--default", choices=["true", "false"], help="answer for atoms the valuation omits")
    d.set_defaults(func=cmd_debug)

    k = sub.add_parser("kam", help="abstract machine commands")
    ksub = k.add_subparsers(dest="kam_command", required=True)
    r = ksub.add_parser("run", help="run a λc program")
    r.add_argument("program")
    r.add_argument("--entry", default="main")
    r.add_argument("--fuel", type=int, default=1_000_000)
    r.add_argument("--trace", action="store_true")
    r.add_argument("--decode", choices=["nat", "bool", "atom", "index", "term", "tree"])
    r.set_defaults(func=cmd_kam_run)

    h = ksub.add_parser("herbrand", help="build a tree by running a proof on the scheduler")
    h.add_argument("theory")
    h.add_argument("--proof", required=True, help="λc file or builtin:whitecrow|builtin:pseudo")
    h.add_argument("--entry", default="proof")
    h.add_argument("--fuel", type=int, default=100_000)
    h.add_argument("--format", choices=["json", "dot", "text"], default="json")
    h.add_argument("--trace", action="store_true")
    h.set_defaults(func=cmd_kam_herbrand)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TheoryError, ProgramError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except (TreeRejected, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return DOMAIN_ERROR


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
