"""Reader and writer for the textual machine format.

::

    file    := stmt*
    stmt    := "symbols" ident* ";"
             | "let" ident "=" expr
             | "main" "=" expr
             | "graph" "{" gstmt* "}"
    gstmt   := ("states" | "initial" | "final") ident* ";"
             | ident "->" ident ":" expr ";"
    expr    := term ("+" term)*
    term    := factor ("." factor)*
    factor  := atom ("*")?
    atom    := "0" | "1" | "unit" | "eps" | "pi1" | "pi2" | "delta"
             | "open" | "left" | "right" | "up" | "exit" | "lift1" | ...
             | "pair" "(" expr "," expr ")" | "[" clauses "]"
             | ident | "(" expr ")"

A file defines either ``main`` (an expression) or a ``graph`` block.
Comments run from ``--`` to the end of the line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import TreeSyntaxError
from .expr import (
    ZERO, MachineExpr, Named, Prim, Psi, PsiInstr, RuleExpr, Star, alt, format_expr,
    pair_expr, seq,
)
from .instr import Op
from .machine import MachineGraph, graph_from_edges, graph_of_expr
from .pattern import read_clauses
from .syntax import Tokens
from .tree import SymbolTable

_INSTR_ATOMS = {op.value: op for op in Op if op is not Op.ONE}
_PSI_ATOMS = {op.value: op for op in PsiInstr}
KEYWORDS = (set(_INSTR_ATOMS) | set(_PSI_ATOMS)
            | {"pair", "let", "main", "symbols", "graph", "states", "initial", "final"})


@dataclass
class MachineFile:
    lets: Dict[str, MachineExpr] = field(default_factory=dict)
    main: Optional[MachineExpr] = None
    graph: Optional[MachineGraph] = None
    symbols: Optional[SymbolTable] = None

    def machine(self) -> MachineGraph:
        if self.graph is not None:
            return self.graph
        return graph_of_expr(self.main)


class _Reader:
    def __init__(self, text: str):
        self.toks = Tokens(text)
        self.env: Dict[str, MachineExpr] = {}
        self.symbols: Optional[SymbolTable] = None

    def expr(self) -> MachineExpr:
        terms = [self.term()]
        while self.toks.accept("+"):
            terms.append(self.term())
        return alt(*terms)

    def term(self) -> MachineExpr:
        factors = [self.factor()]
        while self.toks.accept("."):
            factors.append(self.factor())
        return seq(*factors)

    def factor(self) -> MachineExpr:
        a = self.atom()
        if self.toks.accept("*"):
            a = Star(a)
        return a

    def atom(self) -> MachineExpr:
        toks = self.toks
        tok = toks.peek()
        if tok.kind == "int":
            toks.next()
            if tok.text == "0":
                return ZERO
            if tok.text == "1":
                return Prim(Op.ONE)
            raise TreeSyntaxError(f"unknown atom {tok.text!r}", tok.pos, toks.text)
        if toks.accept("("):
            e = self.expr()
            toks.expect(")")
            return e
        if toks.accept("["):
            clauses = read_clauses(toks, self.symbols)
            toks.expect("]")
            return RuleExpr(clauses)
        if tok.kind != "ident":
            toks.error("expected a machine expression")
        toks.next()
        if tok.text == "pair":
            toks.expect("(")
            first = self.expr()
            toks.expect(",")
            second = self.expr()
            toks.expect(")")
            return pair_expr(first, second)
        if tok.text in _INSTR_ATOMS:
            return Prim(_INSTR_ATOMS[tok.text])
        if tok.text in _PSI_ATOMS:
            return Psi(_PSI_ATOMS[tok.text])
        if tok.text in self.env:
            return Named(tok.text, self.env[tok.text])
        raise TreeSyntaxError(f"undefined machine {tok.text!r}", tok.pos, toks.text)

    def names(self) -> List[str]:
        out = []
        while self.toks.peek().kind == "ident":
            out.append(self.toks.next().text)
        self.toks.expect(";")
        return out

    def graph(self) -> MachineGraph:
        toks = self.toks
        toks.expect("{")
        states: List[str] = []
        initial: List[str] = []
        final: List[str] = []
        edges: List[Tuple[str, str, MachineExpr]] = []

        def declare(name: str) -> None:
            if name not in states:
                states.append(name)

        while not toks.accept("}"):
            if toks.accept("states"):
                for q in self.names():
                    declare(q)
            elif toks.accept("initial"):
                initial.extend(self.names())
            elif toks.accept("final"):
                final.extend(self.names())
            else:
                src = toks.expect_kind("ident").text
                toks.expect("->")
                dst = toks.expect_kind("ident").text
                toks.expect(":")
                e = self.expr()
                toks.expect(";")
                edges.append((src, dst, e))
        for q in initial + final + [q for s, d, _ in edges for q in (s, d)]:
            declare(q)
        return graph_from_edges(states, initial, final, edges)

    def file(self) -> MachineFile:
        toks = self.toks
        out = MachineFile()
        while not toks.done():
            if toks.accept("symbols"):
                self.symbols = out.symbols = SymbolTable(self.names())
            elif toks.accept("let"):
                tok = toks.expect_kind("ident")
                if tok.text in KEYWORDS:
                    raise TreeSyntaxError(f"{tok.text!r} is reserved", tok.pos, toks.text)
                toks.expect("=")
                self.env[tok.text] = self.expr()
                out.lets[tok.text] = self.env[tok.text]
            elif toks.accept("main"):
                toks.expect("=")
                out.main = self.expr()
            elif toks.accept("graph"):
                out.graph = self.graph()
            else:
                toks.error("expected 'let', 'main', 'symbols' or 'graph'")
        if (out.main is None) == (out.graph is None):
            raise TreeSyntaxError("a machine file needs exactly one of 'main' or 'graph'",
                                  len(toks.text), toks.text)
        return out


def parse_machine_file(text: str) -> MachineFile:
    return _Reader(text).file()


def parse_expr(text: str, env: Optional[Dict[str, MachineExpr]] = None,
               symbols: Optional[SymbolTable] = None) -> MachineExpr:
    r = _Reader(text)
    r.env.update(env or {})
    r.symbols = symbols
    e = r.expr()
    if not r.toks.done():
        r.toks.error("unexpected trailing input")
    return e


def format_machine_file(main: MachineExpr, lets: Optional[Dict[str, MachineExpr]] = None) -> str:
    lines = [f"let {name} = {format_expr(e)}" for name, e in (lets or {}).items()]
    lines.append(f"main = {format_expr(main)}")
    return "\n".join(lines) + "\n"


def format_graph_file(states: List[str], initial: List[str], final: List[str],
                      edges: List[Tuple[str, str, MachineExpr]],
                      lets: Optional[Dict[str, MachineExpr]] = None,
                      header: str = "") -> str:
    lines = [f"-- {line}" for line in header.splitlines()]
    lines += [f"let {name} = {format_expr(e)}" for name, e in (lets or {}).items()]
    lines.append("graph {")
    lines.append(f"  states {' '.join(states)};")
    lines.append(f"  initial {' '.join(initial)};")
    lines.append(f"  final {' '.join(final)};")
    for src, dst, e in edges:
        lines.append(f"  {src} -> {dst} : {format_expr(e)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
