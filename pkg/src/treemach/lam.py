"""Lambda terms with explicit substitutions, their tree encoding, and a tree
machine performing one beta step.

Terms use de Bruijn indices.  A closure ``u[s]`` carries one of three
substitutions: ``[v]`` (replace index 0 by ``v``), ``[shift]`` and
``[lift s]``.  The step machine navigates nondeterministically to a redex,
contracts it, eliminates the substitutions it created, and proves that it did
so by marking the rewritten subterm with ``ok`` from the leaves up.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Set, Tuple, Union

from .errors import NotATerm, TreeSyntaxError
from .expr import MachineExpr, Named, RuleExpr, Star, alt, seq, under
from .machine import Budget, MachineGraph, RunResult, graph_of_expr, run
from .pattern import Clauses, parse_clauses
from .tree import SymbolTable, Tree


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Index:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("de Bruijn indices are nonnegative")


@dataclass(frozen=True)
class Lam:
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Closure:
    body: "Term"
    subst: "Subst"


@dataclass(frozen=True)
class SubstTerm:
    """``[v]``: index 0 becomes ``v``, the others drop by one."""
    term: "Term"


@dataclass(frozen=True)
class Shift:
    """``[shift]``: every index goes up by one."""


@dataclass(frozen=True)
class Lift:
    """``[lift s]``: ``s`` pushed under one binder."""
    subst: "Subst"


Term = Union[Index, Lam, App, Closure]
Subst = Union[SubstTerm, Shift, Lift]


def is_pure(t: Term) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Closure):
            return False
        if isinstance(x, Lam):
            stack.append(x.body)
        elif isinstance(x, App):
            stack.extend((x.fn, x.arg))
    return True


def term_size(t: Term) -> int:
    """Constructors in the term, counting index ``n`` as ``n + 1`` (its unary encoding)."""
    if isinstance(t, Index):
        return t.n + 1
    if isinstance(t, Lam):
        return 1 + term_size(t.body)
    if isinstance(t, App):
        return 1 + term_size(t.fn) + term_size(t.arg)
    return 1 + term_size(t.body) + _subst_size(t.subst)


def _subst_size(s: Subst) -> int:
    if isinstance(s, SubstTerm):
        return 1 + term_size(s.term)
    if isinstance(s, Lift):
        return 1 + _subst_size(s.subst)
    return 1


def free_bound(t: Term, depth: int = 0) -> int:
    """Smallest ``k`` such that every free index of the pure term ``t`` is below ``k``."""
    if isinstance(t, Index):
        return max(0, t.n - depth + 1)
    if isinstance(t, Lam):
        return free_bound(t.body, depth + 1)
    if isinstance(t, App):
        return max(free_bound(t.fn, depth), free_bound(t.arg, depth))
    raise TypeError("free_bound expects a pure term")


def is_closed(t: Term) -> bool:
    return free_bound(t) == 0


@lru_cache(maxsize=None)
def _terms_exact(size: int, binders: int) -> Tuple[Term, ...]:
    """Pure terms of exactly ``size`` whose free indices are below ``binders``."""
    out: List[Term] = []
    if 1 <= size <= binders:
        out.append(Index(size - 1))
    if size >= 2:
        out.extend(Lam(b) for b in _terms_exact(size - 1, binders + 1))
        for k in range(1, size - 1):
            for f in _terms_exact(k, binders):
                for a in _terms_exact(size - 1 - k, binders):
                    out.append(App(f, a))
    return tuple(out)


def closed_terms(max_size: int) -> Iterator[Term]:
    """Every closed pure term of size at most ``max_size``, smallest first."""
    for size in range(1, max_size + 1):
        yield from _terms_exact(size, 0)


# -- text --------------------------------------------------------------------

def format_term(t: Term) -> str:
    if isinstance(t, Lam):
        return f"\\ {format_term(t.body)}"
    if isinstance(t, App):
        fn = format_term(t.fn)
        if isinstance(t.fn, Lam):
            fn = f"({fn})"
        arg = format_term(t.arg)
        if isinstance(t.arg, (Lam, App)):
            arg = f"({arg})"
        return f"{fn} {arg}"
    return _atom(t)


def _atom(t: Term) -> str:
    if isinstance(t, Index):
        return str(t.n)
    if isinstance(t, Closure):
        return f"{_atom(t.body)}[{format_subst(t.subst)}]"
    return f"({format_term(t)})"


def format_subst(s: Subst) -> str:
    if isinstance(s, SubstTerm):
        return format_term(s.term)
    if isinstance(s, Shift):
        return "shift"
    return f"lift {format_subst(s.subst)}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(shift\b|lift\b)|([\\()\[\]]))")


class _TermReader:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip():
                    bad = pos + len(rest) - len(rest.lstrip())
                    raise TreeSyntaxError("unexpected character", bad, text)
                break
            self.tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TreeSyntaxError("unexpected end of term", len(self.text), self.text)
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            raise TreeSyntaxError(f"expected {tok!r}", self.pos(), self.text)
        self.i += 1

    def term(self) -> Term:
        if self.peek() == "\\":
            self.next()
            return Lam(self.term())
        t = self.postfix()
        while self.peek() not in (None, ")", "]"):
            if self.peek() == "\\":
                self.next()
                return App(t, Lam(self.term()))
            t = App(t, self.postfix())
        return t

    def postfix(self) -> Term:
        t = self.atom()
        while self.peek() == "[":
            self.next()
            t = Closure(t, self.subst())
            self.expect("]")
        return t

    def atom(self) -> Term:
        pos = self.pos()
        tok = self.next()
        if tok.isdigit():
            return Index(int(tok))
        if tok == "(":
            t = self.term()
            self.expect(")")
            return t
        raise TreeSyntaxError(f"unexpected {tok!r}", pos, self.text)

    def subst(self) -> Subst:
        if self.peek() == "shift":
            self.next()
            return Shift()
        if self.peek() == "lift":
            self.next()
            return Lift(self.subst())
        return SubstTerm(self.term())


def parse_term(text: str) -> Term:
    """``\\ t`` is an abstraction, juxtaposition is application, numbers are indices."""
    r = _TermReader(text)
    t = r.term()
    if r.peek() is not None:
        raise TreeSyntaxError(f"unexpected {r.peek()!r}", r.pos(), text)
    return t


# -- encoding ----------------------------------------------------------------

# The two marks 0 and 1 recorded by left/right share the numerals 0 and 1, so
# the term symbols start at code 2.  Tagged pairs then never look like numerals.
LAMBDA_SYMBOLS = SymbolTable(
    ["mark0", "mark1", "lam", "app", "succ", "nought", "subst", "term", "lift", "shift", "ok"])

_LAM = LAMBDA_SYMBOLS.encode("lam")
_APP = LAMBDA_SYMBOLS.encode("app")
_SUCC = LAMBDA_SYMBOLS.encode("succ")
_NOUGHT = LAMBDA_SYMBOLS.encode("nought")
_SUBST = LAMBDA_SYMBOLS.encode("subst")
_TERM = LAMBDA_SYMBOLS.encode("term")
_LIFT = LAMBDA_SYMBOLS.encode("lift")
_SHIFT = LAMBDA_SYMBOLS.encode("shift")


def encode_term(t: Term) -> Tree:
    if isinstance(t, Index):
        out = _NOUGHT
        for _ in range(t.n):
            out = (_SUCC, out)
        return out
    if isinstance(t, Lam):
        return (_LAM, encode_term(t.body))
    if isinstance(t, App):
        return (_APP, (encode_term(t.fn), encode_term(t.arg)))
    return (_SUBST, (encode_term(t.body), encode_subst(t.subst)))


def encode_subst(s: Subst) -> Tree:
    if isinstance(s, SubstTerm):
        return (_TERM, encode_term(s.term))
    if isinstance(s, Shift):
        return _SHIFT
    return (_LIFT, encode_subst(s.subst))


def decode_term(t: Tree) -> Term:
    if t == _NOUGHT:
        return Index(0)
    if not t:
        raise NotATerm(f"{t!r} is not an encoded term")
    tag, x = t
    if tag == _SUCC:
        n = 1
        while x != _NOUGHT:
            if not x or x[0] != _SUCC:
                raise NotATerm(f"{t!r} is not an encoded index")
            x = x[1]
            n += 1
        return Index(n)
    if tag == _LAM:
        return Lam(decode_term(x))
    if tag == _APP and x:
        return App(decode_term(x[0]), decode_term(x[1]))
    if tag == _SUBST and x:
        return Closure(decode_term(x[0]), decode_subst(x[1]))
    raise NotATerm(f"{t!r} is not an encoded term")


def decode_subst(t: Tree) -> Subst:
    if t == _SHIFT:
        return Shift()
    if t and t[0] == _TERM:
        return SubstTerm(decode_term(t[1]))
    if t and t[0] == _LIFT:
        return Lift(decode_subst(t[1]))
    raise NotATerm(f"{t!r} is not an encoded substitution")


# -- reference rewriting -----------------------------------------------------

def _contract(t: Term, beta: bool = True) -> Optional[Term]:
    """The result of the one calculus rule whose left-hand side is ``t``, if any."""
    if isinstance(t, App) and isinstance(t.fn, Lam):
        return Closure(t.fn.body, SubstTerm(t.arg)) if beta else None
    if not isinstance(t, Closure):
        return None
    u, s = t.body, t.subst
    if isinstance(u, Lam):
        return Lam(Closure(u.body, Lift(s)))
    if isinstance(u, App):
        return App(Closure(u.fn, s), Closure(u.arg, s))
    if not isinstance(u, Index):
        return None
    if isinstance(s, SubstTerm):
        return s.term if u.n == 0 else Index(u.n - 1)
    if isinstance(s, Lift):
        return Index(0) if u.n == 0 else Closure(Closure(Index(u.n - 1), s.subst), Shift())
    return Index(u.n + 1)


def upsilon_step(t: Term, beta: bool = True) -> Set[Term]:
    """Every term obtained by one rewrite of the calculus at any position,
    including positions inside substitutions.  ``beta=False`` leaves out the
    beta rule, keeping only the substitution rules."""
    out: Set[Term] = set()
    r = _contract(t, beta)
    if r is not None:
        out.add(r)
    if isinstance(t, Lam):
        out.update(Lam(b) for b in upsilon_step(t.body, beta))
    elif isinstance(t, App):
        out.update(App(f, t.arg) for f in upsilon_step(t.fn, beta))
        out.update(App(t.fn, a) for a in upsilon_step(t.arg, beta))
    elif isinstance(t, Closure):
        out.update(Closure(b, t.subst) for b in upsilon_step(t.body, beta))
        out.update(Closure(t.body, s) for s in _upsilon_subst(t.subst, beta))
    return out


def _upsilon_subst(s: Subst, beta: bool) -> Set[Subst]:
    if isinstance(s, SubstTerm):
        return {SubstTerm(v) for v in upsilon_step(s.term, beta)}
    if isinstance(s, Lift):
        return {Lift(x) for x in _upsilon_subst(s.subst, beta)}
    return set()


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if isinstance(t, Index):
        return Index(t.n + d) if t.n >= cutoff else t
    if isinstance(t, Lam):
        return Lam(shift(t.body, d, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    raise TypeError("shift expects a pure term")


def substitute(t: Term, j: int, v: Term) -> Term:
    """Replace index ``j`` of ``t`` by ``v`` (no renumbering of the others)."""
    if isinstance(t, Index):
        return v if t.n == j else t
    if isinstance(t, Lam):
        return Lam(substitute(t.body, j + 1, shift(v, 1)))
    if isinstance(t, App):
        return App(substitute(t.fn, j, v), substitute(t.arg, j, v))
    raise TypeError("substitute expects a pure term")


def beta_contract(body: Term, arg: Term) -> Term:
    return shift(substitute(body, 0, shift(arg, 1)), -1)


def beta_oracle(t: Term) -> Set[Term]:
    """All one-step beta reducts of a pure term, substitution carried out at once."""
    out: Set[Term] = set()
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            out.add(beta_contract(t.fn.body, t.arg))
        out.update(App(f, t.arg) for f in beta_oracle(t.fn))
        out.update(App(t.fn, a) for a in beta_oracle(t.arg))
    elif isinstance(t, Lam):
        out.update(Lam(b) for b in beta_oracle(t.body))
    elif isinstance(t, Closure):
        raise TypeError("beta_oracle expects a pure term")
    return out


# -- the machine -------------------------------------------------------------

NAVIGATION_RULES = {
    "open": "u => ((), u)",
    "down_lam": "(c, (lam, u)) => ((c, lam), u)",
    "down_sigma": "(c, (subst, (u, s))) => ((c, (subst, s)), u)",
    "left": "(c, (app, (u, v))) => ((c, (app, (0, v))), u)",
    "right": "(c, (app, (u, v))) => ((c, (app, (1, u))), v)",
    "up_lam": "((c, lam), u) => (c, (lam, u))",
    "up_sigma": "((c, (subst, s)), u) => (c, (subst, (u, s)))",
    "up_app0": "((c, (app, (0, v))), u) => (c, (app, (u, v)))",
    "up_app1": "((c, (app, (1, u))), v) => (c, (app, (u, v)))",
    "exit": "((), u) => u",
}

REDUCTION_RULES = {
    "beta": "(app, ((lam, u), v)) => (subst, (u, (term, v)))",
    "lam_sigma": "(subst, ((lam, u), s)) => (lam, (subst, (u, (lift, s))))",
    "app_sigma": "(subst, ((app, (u, v)), s)) => (app, ((subst, (u, s)), (subst, (v, s))))",
    "nought_term": "(subst, (nought, (term, v))) => v",
    "succ_term": "(subst, ((succ, n), (term, _))) => n",
    "nought_lift": "(subst, (nought, (lift, _))) => nought",
    "succ_lift": "(subst, ((succ, n), (lift, s))) => (subst, ((subst, (n, s)), shift))",
    "nought_shift": "(subst, (nought, shift)) => (succ, nought)",
    "succ_shift": "(subst, ((succ, n), shift)) => (succ, (succ, n))",
}

MARKING_RULES = {
    "nought_ok": "nought => (ok, nought)",
    "succ_ok": "(succ, n) => (ok, (succ, n))",
    "lam_ok": "(lam, (ok, u)) => (ok, (lam, u))",
    "app_ok": "(app, ((ok, u), (ok, v))) => (ok, (app, (u, v)))",
    "check_ok": "(ok, u) => u",
}

UNIONS = {
    "up": ["up_lam", "up_sigma", "up_app0", "up_app1"],
    "var_shift": ["nought_shift", "succ_shift"],
    "sigma": ["lam_sigma", "app_sigma", "nought_term", "succ_term", "nought_lift",
              "succ_lift", "var_shift"],
    "rule_ok": ["nought_ok", "succ_ok", "lam_ok", "app_ok"],
}


def _rule_texts() -> Dict[str, str]:
    texts = {**NAVIGATION_RULES, **REDUCTION_RULES, **MARKING_RULES}
    for name, parts in UNIONS.items():
        texts[name] = " | ".join(texts[p] for p in parts)
    return texts


@lru_cache(maxsize=None)
def _lambda_rules() -> Dict[str, Clauses]:
    return {name: parse_clauses(text, symbols=LAMBDA_SYMBOLS, name=name)
            for name, text in _rule_texts().items()}


def build_lambda_rules() -> Dict[str, Clauses]:
    """Every named rule of the step machine, unions included, symbols expanded."""
    return dict(_lambda_rules())


@lru_cache(maxsize=None)
def build_step_machine() -> MachineExpr:
    rules = _lambda_rules()

    def r(name: str) -> MachineExpr:
        return RuleExpr(rules[name])

    move = Named("move", alt(r("down_lam"), r("down_sigma"), r("left"), r("right"), r("up")))
    zip_ = Named("zip", seq(Star(r("up")), r("exit")))
    all_sigma = Named("all_sigma", Star(seq(Star(move), under(r("sigma")))))
    zip_ok = Named("zip_ok", seq(Star(seq(Star(move), under(r("rule_ok")))),
                                 r("exit"), r("check_ok")))
    body = seq(r("beta"), r("open"), all_sigma, zip_ok)
    return Named("step", seq(r("open"), Star(move), under(body), zip_))


@lru_cache(maxsize=None)
def step_graph() -> MachineGraph:
    return graph_of_expr(build_step_machine())


STEP_BUDGET = Budget(max_steps=10 ** 7, max_configs=10 ** 7)


def run_step(t: Term, budget: Budget = STEP_BUDGET) -> RunResult:
    return run(step_graph(), encode_term(t), budget)


def machine_step(t: Term, budget: Budget = STEP_BUDGET) -> Tuple[Set[Term], RunResult]:
    """Decoded one-step reducts of ``t`` computed by the step machine."""
    res = run_step(t, budget)
    return {decode_term(o) for o in res.outputs}, res


@dataclass
class NormalizeResult:
    normal_forms: Set[Term]
    truncated: bool
    reductions: int      # step-machine runs that produced at least one reduct
    runs: int            # step-machine runs in total
    terms: int           # distinct terms visited
    steps: int           # machine steps summed over all runs
    reason: Optional[str] = None
    reducts: Dict[Term, Set[Term]] = field(default_factory=dict, repr=False)


def normalize(t: Term, budget: Budget = STEP_BUDGET, max_terms: int = 10 ** 4) -> NormalizeResult:
    """Explore every reduction sequence of ``t`` with the step machine.

    ``budget`` bounds each run of the step machine; ``max_terms`` bounds the
    reduction graph.  Terms without reducts are collected as normal forms.
    """
    seen = {t}
    frontier = deque([t])
    graph: Dict[Term, Set[Term]] = {}
    normal: Set[Term] = set()
    reductions = runs = steps = 0
    reason = None
    while frontier:
        u = frontier.popleft()
        reducts, res = machine_step(u, budget)
        runs += 1
        steps += res.steps
        if res.truncated:
            reason = res.reason
            break
        graph[u] = reducts
        if not reducts:
            normal.add(u)
            continue
        reductions += 1
        for v in sorted(reducts, key=format_term):
            if v in seen:
                continue
            if len(seen) >= max_terms:
                reason = "max_terms"
                break
            seen.add(v)
            frontier.append(v)
        if reason:
            break
    return NormalizeResult(normal, reason is not None, reductions, runs, len(seen), steps,
                           reason, graph)


def normalize_oracle(t: Term, max_terms: int = 10 ** 4) -> Tuple[Set[Term], bool]:
    """Normal forms reachable with ``beta_oracle``; the flag reports truncation."""
    seen = {t}
    frontier = deque([t])
    normal: Set[Term] = set()
    while frontier:
        u = frontier.popleft()
        reducts = beta_oracle(u)
        if not reducts:
            normal.add(u)
        for v in reducts:
            if v not in seen:
                if len(seen) >= max_terms:
                    return normal, True
                seen.add(v)
                frontier.append(v)
    return normal, False


def church(n: int) -> Term:
    body: Term = Index(0)
    for _ in range(n):
        body = App(Index(1), body)
    return Lam(Lam(body))


CHURCH_PLUS = parse_term(r"\ \ \ \ 3 1 (2 1 0)")


def church_plus(m: Term, n: Term) -> Term:
    return App(App(CHURCH_PLUS, m), n)

