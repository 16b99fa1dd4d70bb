"""Command-line interface: ``treemach <command> ...``.

Payload lines go to stdout; statistics are ``#`` comment lines so the payload
can be consumed by other tools.  Exit status: 0 on success, 1 on a parse or
validation error, 2 when a run is truncated without producing any output.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional, Sequence

from . import lam
from .errors import TreeMachError
from .expr import RuleExpr, format_expr
from .instr import parse_instr
from .machine import Budget, CostModel, format_label, run, trace
from .machine_file import format_graph_file, parse_machine_file
from .pattern import compile_rule, parse_rule
from .tree import from_polish, parse_tree, print_tree, to_polish
from .turing import (
    TuringMachine, decode_tape, embed_tm, encode_tape, format_tape, load_fixture, parse_tape,
    parse_tm, simulate_tm, tm_rule,
)
from .zipper import lift


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _footer(out, steps: int, configs: int, truncated: bool, started: float) -> None:
    print(f"# steps={steps} configs={configs} truncated={str(truncated).lower()}", file=out)
    print(f"# time={time.perf_counter() - started:.3f}s", file=out)


def _budget(args) -> Budget:
    return Budget(max_steps=args.max_steps, max_configs=args.max_configs)


def _print_path(path, graph, out, prefix: str = "") -> None:
    print(f"{prefix}{graph.state_name(path.states[0])}: {print_tree(path.trees[0])}", file=out)
    for q, label, x in zip(path.states[1:], path.labels, path.trees[1:]):
        print(f"{prefix}  --{format_label(label)}--> {graph.state_name(q)}: {print_tree(x)}",
              file=out)


def cmd_run(args, out) -> int:
    started = time.perf_counter()
    graph = parse_machine_file(_read(args.machine)).machine()
    t = parse_tree(args.tree)
    cost_model = CostModel(args.cost)
    res = run(graph, t, _budget(args), cost_model)
    for o in res.outputs:
        print(print_tree(o), file=out)
    if args.trace:
        for path in trace(graph, t, _budget(args)):
            _print_path(path, graph, out, prefix="# ")
    print(f"# cost={res.cost} model={cost_model.value}", file=out)
    _footer(out, res.steps, res.configs, res.truncated, started)
    return 2 if res.truncated and not res.outputs else 0


def cmd_trace(args, out) -> int:
    started = time.perf_counter()
    graph = parse_machine_file(_read(args.machine)).machine()
    t = parse_tree(args.tree)
    res = run(graph, t, _budget(args))
    for k, path in enumerate(trace(graph, t, _budget(args))):
        if k:
            print(file=out)
        _print_path(path, graph, out)
    _footer(out, res.steps, res.configs, res.truncated, started)
    return 2 if res.truncated and not res.outputs else 0


def cmd_compile_pattern(args, out) -> int:
    print(format_expr(compile_rule(parse_rule(args.rule))), file=out)
    return 0


def cmd_lift(args, out) -> int:
    print(format_expr(lift(parse_instr(args.instr))), file=out)
    return 0


def cmd_polish(args, out) -> int:
    if args.decode is not None:
        print(print_tree(from_polish(args.decode)), file=out)
    elif args.tree is not None:
        print(to_polish(parse_tree(args.tree)), file=out)
    else:
        raise TreeMachError("polish needs a tree or --decode STRING")
    return 0


def _load_tm(name: str) -> TuringMachine:
    if os.path.exists(name):
        return parse_tm(_read(name))
    try:
        return load_fixture(name)
    except FileNotFoundError:
        raise TreeMachError(f"no Turing machine file or shipped machine named {name!r}") from None


def cmd_tm_embed(args, out) -> int:
    tm = _load_tm(args.tm)
    edges = [(src, dst, RuleExpr(tm_rule(ins, tm.alphabet))) for src, dst, ins in tm.edges]
    header = "\n".join(f"symbol {sym} = #{k}" for k, sym in enumerate(tm.alphabet))
    print(format_graph_file(list(tm.states), sorted(tm.initial), sorted(tm.final), edges,
                            header=header), end="", file=out)
    return 0


def cmd_tm_run(args, out) -> int:
    started = time.perf_counter()
    tm = _load_tm(args.tm)
    tape = parse_tape(args.tape)
    budget = _budget(args)
    if args.direct:
        sim = simulate_tm(tm, tape, budget)
        tapes = sorted({format_tape(c) for _, c in sim.outputs})
        steps, configs, truncated = sim.steps, sim.configs, sim.truncated
    else:
        res = run(embed_tm(tm), encode_tape(tape, tm.alphabet), budget)
        tapes = sorted({format_tape(decode_tape(o, tm.alphabet)) for o in res.outputs})
        steps, configs, truncated = res.steps, res.configs, res.truncated
    for line in tapes:
        print(line, file=out)
    _footer(out, steps, configs, truncated, started)
    return 2 if truncated and not tapes else 0


def cmd_lambda_encode(args, out) -> int:
    print(print_tree(lam.encode_term(lam.parse_term(args.term))), file=out)
    return 0


def _lambda_budget(args) -> Budget:
    return Budget(max_steps=args.budget, max_configs=args.max_configs)


def cmd_lambda_step(args, out) -> int:
    started = time.perf_counter()
    reducts, res = lam.machine_step(lam.parse_term(args.term), _lambda_budget(args))
    for line in sorted(lam.format_term(t) for t in reducts):
        print(line, file=out)
    _footer(out, res.steps, res.configs, res.truncated, started)
    return 2 if res.truncated and not reducts else 0


def cmd_lambda_normalize(args, out) -> int:
    started = time.perf_counter()
    res = lam.normalize(lam.parse_term(args.term), _lambda_budget(args), args.max_terms)
    for line in sorted(lam.format_term(t) for t in res.normal_forms):
        print(line, file=out)
    print(f"# runs={res.runs} reductions={res.reductions} terms={res.terms}", file=out)
    print(f"# steps={res.steps} truncated={str(res.truncated).lower()}", file=out)
    print(f"# time={time.perf_counter() - started:.3f}s", file=out)
    return 2 if res.truncated and not res.normal_forms else 0


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=int, default=Budget().max_steps)
    p.add_argument("--max-configs", type=int, default=Budget().max_configs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treemach", description="Tree machine toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a machine file on a tree")
    p.add_argument("machine", help="machine file ('-' for stdin)")
    p.add_argument("tree", help="input tree, e.g. '((),())' or '#3'")
    _run_flags(p)
    p.add_argument("--trace", action="store_true", help="print one witnessing path per output")
    p.add_argument("--cost", choices=[m.value for m in CostModel], default="per-instr")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("trace", help="print one witnessing path per output")
    p.add_argument("machine")
    p.add_argument("tree")
    _run_flags(p)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("compile-pattern", help="compile 'guard => action' into instructions")
    p.add_argument("rule")
    p.set_defaults(fn=cmd_compile_pattern)

    p = sub.add_parser("lift", help="express an instruction over the finite zipper set")
    p.add_argument("instr", help="e.g. 'pair(pi2,pi1)'")
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("polish", help="convert between trees and Polish notation")
    p.add_argument("tree", nargs="?")
    p.add_argument("--decode", metavar="STRING")
    p.set_defaults(fn=cmd_polish)

    tm = sub.add_parser("tm", help="Turing machines").add_subparsers(dest="tm_command",
                                                                       required=True)
    p = tm.add_parser("embed", help="print the tree machine of a Turing machine")
    p.add_argument("tm", help="TM file, or the name of a shipped machine")
    p.set_defaults(fn=cmd_tm_embed)
    p = tm.add_parser("run", help="run a Turing machine on a tape such as '01|1'")
    p.add_argument("tm")
    p.add_argument("tape")
    p.add_argument("--direct", action="store_true", help="use the direct simulator")
    _run_flags(p)
    p.set_defaults(fn=cmd_tm_run)

    lm = sub.add_parser("lambda", help="lambda terms").add_subparsers(dest="lambda_command",
                                                                       required=True)
    p = lm.add_parser("encode", help="print the tree encoding of a term")
    p.add_argument("term", help=r"e.g. '(\ 0) (\ 0)'")
    p.set_defaults(fn=cmd_lambda_encode)
    for name, fn, text in [("step", cmd_lambda_step, "one beta step with the step machine"),
                           ("normalize", cmd_lambda_normalize, "all reachable normal forms")]:
        p = lm.add_parser(name, help=text)
        p.add_argument("term")
        p.add_argument("--budget", type=int, default=lam.STEP_BUDGET.max_steps,
                       help="machine steps allowed per step-machine run")
        p.add_argument("--max-configs", type=int, default=lam.STEP_BUDGET.max_configs)
        if name == "normalize":
            p.add_argument("--max-terms", type=int, default=10 ** 4)
        p.set_defaults(fn=fn)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args, out)
    except (TreeMachError, OSError, KeyError, ValueError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
