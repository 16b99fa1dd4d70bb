"""Guards and actions.

A pattern is a tree with variables: a ``str`` is a variable (``"_"`` is the
wildcard), ``()`` is the unit tree and a 2-tuple is a pair.  Ground patterns
are therefore ordinary trees, which is how numerals and symbols appear inside
rules.  A rule ``guard => action`` denotes the partial function that matches
the guard and rebuilds the action from the bound subtrees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import NoClauseApplies, NonlinearGuard, OverlappingGuards, UnboundActionVar
from .expr import MachineExpr, Prim, Seq, alt, pair_expr
from .instr import DELTA, EPS, ONE, PI1, PI2, UNIT_CHECK
from .syntax import Tokens
from .tree import UNIT, SymbolTable, Tree, decode_nat, encode_nat, is_numeral

Pattern = Union[str, tuple]
Binding = Dict[str, Tree]

WILDCARD = "_"


def variables(p: Pattern) -> Iterator[str]:
    """Named variables of ``p`` from left to right, with repetitions, wildcards excluded."""
    stack = [p]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            if x != WILDCARD:
                yield x
        elif x:
            stack.append(x[1])
            stack.append(x[0])


def is_ground(p: Pattern) -> bool:
    if isinstance(p, str):
        return False
    return not p or (is_ground(p[0]) and is_ground(p[1]))


@dataclass(frozen=True)
class Rule:
    guard: Pattern
    action: Pattern

    def __repr__(self) -> str:
        return f"Rule({format_rule(self)})"


def validate_rule(r: Rule) -> None:
    seen = set()
    for v in variables(r.guard):
        if v in seen:
            raise NonlinearGuard(v)
        seen.add(v)
    if WILDCARD in _all_names(r.action):
        raise UnboundActionVar(WILDCARD)
    for v in variables(r.action):
        if v not in seen:
            raise UnboundActionVar(v)


def _all_names(p: Pattern) -> Iterator[str]:
    if isinstance(p, str):
        yield p
    elif p:
        yield from _all_names(p[0])
        yield from _all_names(p[1])


# -- direct semantics --------------------------------------------------------

def match_guard(guard: Pattern, t: Tree) -> Optional[Binding]:
    binding: Binding = {}
    stack = [(guard, t)]
    while stack:
        p, x = stack.pop()
        if isinstance(p, str):
            if p != WILDCARD:
                binding[p] = x
        elif not p:
            if x:
                return None
        else:
            if not x:
                return None
            stack.append((p[1], x[1]))
            stack.append((p[0], x[0]))
    return binding


def instantiate(action: Pattern, binding: Binding) -> Tree:
    if isinstance(action, str):
        return binding[action]
    if not action:
        return UNIT
    return (instantiate(action[0], binding), instantiate(action[1], binding))


def apply_rule(r: Rule, t: Tree) -> Optional[Tree]:
    binding = match_guard(r.guard, t)
    if binding is None:
        return None
    return instantiate(r.action, binding)


# -- unification -------------------------------------------------------------

class _Var:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name


def _rename_apart(p: Pattern, table: Dict[str, _Var]):
    if isinstance(p, str):
        if p == WILDCARD:
            return _Var(p)
        return table.setdefault(p, _Var(p))
    if not p:
        return p
    return (_rename_apart(p[0], table), _rename_apart(p[1], table))


def unifiable(g1: Pattern, g2: Pattern) -> bool:
    """Whether some tree matches both guards (variables of the two are kept apart)."""
    subst: Dict[_Var, object] = {}

    def walk(x):
        while isinstance(x, _Var) and x in subst:
            x = subst[x]
        return x

    def occurs(v, x) -> bool:
        x = walk(x)
        if x is v:
            return True
        if isinstance(x, tuple) and x:
            return occurs(v, x[0]) or occurs(v, x[1])
        return False

    stack = [(_rename_apart(g1, {}), _rename_apart(g2, {}))]
    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if a is b:
            continue
        if isinstance(a, _Var) or isinstance(b, _Var):
            v, other = (a, b) if isinstance(a, _Var) else (b, a)
            if occurs(v, other):
                return False
            subst[v] = other
            continue
        if not a and not b:
            continue
        if not a or not b:
            return False
        stack.append((a[0], b[0]))
        stack.append((a[1], b[1]))
    return True


# -- disjoint unions ---------------------------------------------------------

@dataclass(frozen=True)
class Clauses:
    """``g1 => a1 | g2 => a2 | ...`` with pairwise disjoint guards; one partial function."""

    rules: Tuple[Rule, ...]
    name: Optional[str] = None

    @classmethod
    def of(cls, rules: Sequence[Rule], name: Optional[str] = None) -> "Clauses":
        rules = tuple(rules)
        if not rules:
            raise ValueError("a rule needs at least one clause")
        for r in rules:
            validate_rule(r)
        for i, j in itertools.combinations(range(len(rules)), 2):
            if unifiable(rules[i].guard, rules[j].guard):
                raise OverlappingGuards(i, j)
        return cls(rules, name)

    @cached_property
    def function(self) -> Callable[[Tree], Optional[Tree]]:
        return compile_clauses(self.rules)

    def apply(self, t: Tree) -> Optional[Tree]:
        return self.function(t)

    def label(self) -> str:
        return self.name or format_clauses(self)


def compile_clauses(rules: Sequence[Rule]) -> Callable[[Tree], Optional[Tree]]:
    """Generate a specialised Python matcher for a disjoint list of clauses."""
    consts: List[Tree] = []
    fns = [_gen_clause(r, consts) for r in rules]
    if len(fns) == 1:
        return fns[0]
    fns = tuple(fns)

    def apply(t):
        for f in fns:
            r = f(t)
            if r is not None:
                return r
        return None
    return apply


def _gen_clause(rule: Rule, consts: List[Tree]) -> Callable[[Tree], Optional[Tree]]:
    lines = ["def clause(t):"]
    names: Dict[str, str] = {}
    fresh = itertools.count()

    def const(tree: Tree) -> str:
        consts.append(tree)
        return f"K[{len(consts) - 1}]"

    def walk(p: Pattern, expr: str) -> None:
        if isinstance(p, str):
            if p != WILDCARD:
                names[p] = expr
        elif is_ground(p):
            lines.append(f"    if {expr} != {const(p)}: return None")
        else:
            a, b = f"v{next(fresh)}", f"v{next(fresh)}"
            lines.append(f"    if not {expr}: return None")
            lines.append(f"    {a}, {b} = {expr}")
            walk(p[0], a)
            walk(p[1], b)

    def build(p: Pattern) -> str:
        if isinstance(p, str):
            return names[p]
        if is_ground(p):
            return "()" if not p else const(p)
        return f"({build(p[0])}, {build(p[1])})"

    walk(rule.guard, "t")
    lines.append(f"    return {build(rule.action)}")
    namespace = {"K": consts}
    exec("\n".join(lines), namespace)
    return namespace["clause"]


# -- compilation into instructions -------------------------------------------

def desugar_wildcards(p: Pattern) -> Pattern:
    counter = itertools.count()

    def go(x: Pattern) -> Pattern:
        if isinstance(x, str):
            return f"${next(counter)}" if x == WILDCARD else x
        if not x:
            return x
        return (go(x[0]), go(x[1]))
    return go(p)


def compile_rule(r: Rule) -> MachineExpr:
    """Translate a rule into a composition of instructions, clause by clause."""
    validate_rule(r)
    return _compile(desugar_wildcards(r.guard), r.action)


def _occurs(v: str, p: Pattern) -> bool:
    return any(x == v for x in variables(p))


def _compile(g: Pattern, a: Pattern) -> MachineExpr:
    g_var, a_var = isinstance(g, str), isinstance(a, str)
    if g_var and a_var and g == a:
        return Prim(ONE)
    if g_var and a == UNIT:
        return Prim(EPS)
    if g == UNIT and a == UNIT:
        return Prim(UNIT_CHECK)
    if not g_var and g and a == UNIT:
        return Seq(pair_expr(_compile(g[0], UNIT), _compile(g[1], UNIT)), Prim(EPS))
    if not g_var and g and a_var and _occurs(a, g[0]):
        return Seq(pair_expr(_compile(g[0], a), _compile(g[1], UNIT)), Prim(PI1))
    if not g_var and g and a_var and _occurs(a, g[1]):
        return Seq(pair_expr(_compile(g[0], UNIT), _compile(g[1], a)), Prim(PI2))
    if not a_var and a:
        return Seq(Prim(DELTA), pair_expr(_compile(g, a[0]), _compile(g, a[1])))
    raise NoClauseApplies(f"no translation clause for {format_pattern(g)} => {format_pattern(a)}")


def compile_union(rules: Sequence[Rule]) -> MachineExpr:
    for i, j in itertools.combinations(range(len(rules)), 2):
        if unifiable(rules[i].guard, rules[j].guard):
            raise OverlappingGuards(i, j)
    return alt(*(compile_rule(r) for r in rules))


# -- text --------------------------------------------------------------------

def format_pattern(p: Pattern) -> str:
    if isinstance(p, str):
        return p
    if not p:
        return "()"
    if is_ground(p) and is_numeral(p):
        return f"#{decode_nat(p)}"
    return f"({format_pattern(p[0])},{format_pattern(p[1])})"


def format_rule(r: Rule) -> str:
    return f"{format_pattern(r.guard)} => {format_pattern(r.action)}"


def format_clauses(c: Clauses) -> str:
    return " | ".join(format_rule(r) for r in c.rules)


def read_pattern(toks: Tokens, symbols: Optional[SymbolTable] = None) -> Pattern:
    tok = toks.peek()
    if tok.kind == "num":
        toks.next()
        return encode_nat(int(tok.text[1:]))
    if tok.kind == "int":
        toks.next()
        return encode_nat(int(tok.text))
    if tok.kind == "ident":
        toks.next()
        if symbols is not None and tok.text in symbols:
            return symbols.encode(tok.text)
        return tok.text
    toks.expect("(")
    if toks.accept(")"):
        return UNIT
    first = read_pattern(toks, symbols)
    toks.expect(",")
    second = read_pattern(toks, symbols)
    toks.expect(")")
    return (first, second)


def read_clauses(toks: Tokens, symbols: Optional[SymbolTable] = None,
                 name: Optional[str] = None) -> Clauses:
    rules = []
    while True:
        guard = read_pattern(toks, symbols)
        toks.expect("=>")
        action = read_pattern(toks, symbols)
        rules.append(Rule(guard, action))
        if not toks.accept("|"):
            break
    return Clauses.of(rules, name)


def parse_rule(text: str, symbols: Optional[SymbolTable] = None) -> Rule:
    """Parse a single ``guard => action`` clause and validate it."""
    toks = Tokens(text)
    guard = read_pattern(toks, symbols)
    toks.expect("=>")
    action = read_pattern(toks, symbols)
    if not toks.done():
        toks.error("unexpected trailing input")
    r = Rule(guard, action)
    validate_rule(r)
    return r


def parse_clauses(text: str, symbols: Optional[SymbolTable] = None,
                  name: Optional[str] = None) -> Clauses:
    toks = Tokens(text)
    c = read_clauses(toks, symbols, name)
    if not toks.done():
        toks.error("unexpected trailing input")
    return c
