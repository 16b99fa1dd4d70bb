"""Turing machines, a direct simulator, and their translation into tree machines.

The tape is a pair of symbol lists: the cells left of the head (nearest
first) and the cells from the head rightwards.  There is no blank symbol: an
empty right list means the head is past the written part of the tape, and
only a write can extend it.  Moving left off the written part is undefined.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .errors import MalformedTape, TreeSyntaxError
from .expr import MachineExpr, RuleExpr
from .machine import Budget, MachineGraph, graph_from_edges
from .pattern import Clauses, Rule
from .tree import UNIT, SymbolTable, Tree


@dataclass(frozen=True)
class Write:
    symbol: str

    def __str__(self) -> str:
        return f"write {self.symbol}"


@dataclass(frozen=True)
class MoveLeft:
    def __str__(self) -> str:
        return "moveL"


@dataclass(frozen=True)
class MoveRight:
    def __str__(self) -> str:
        return "moveR"


@dataclass(frozen=True)
class Check:
    symbol: str

    def __str__(self) -> str:
        return f"check {self.symbol}"


TMInstr = Union[Write, MoveLeft, MoveRight, Check]


@dataclass(frozen=True)
class TuringMachine:
    alphabet: SymbolTable
    states: Tuple[str, ...]
    initial: FrozenSet[str]
    final: FrozenSet[str]
    edges: Tuple[Tuple[str, str, TMInstr], ...]

    def __post_init__(self):
        known = set(self.states)
        for q in self.initial | self.final:
            if q not in known:
                raise ValueError(f"unknown state {q!r}")
        for src, dst, ins in self.edges:
            if src not in known or dst not in known:
                raise ValueError(f"edge {src}->{dst} uses an unknown state")
            sym = getattr(ins, "symbol", None)
            if sym is not None and sym not in self.alphabet:
                raise ValueError(f"symbol {sym!r} is not in the alphabet")


@dataclass(frozen=True)
class TapeConfig:
    left: Tuple[str, ...] = ()    # nearest cell first
    right: Tuple[str, ...] = ()   # cell under the head first

    def __str__(self) -> str:
        return format_tape(self)


# -- encoding ----------------------------------------------------------------

def encode_tape(c: TapeConfig, alphabet: SymbolTable) -> Tree:
    right: Tree = UNIT
    for sym in reversed(c.right):
        right = (alphabet.encode(sym), right)
    left: Tree = UNIT
    for sym in reversed(c.left):
        left = (left, alphabet.encode(sym))
    return (left, right)


def _symbol(t: Tree, alphabet: SymbolTable) -> str:
    try:
        return alphabet.decode(t)
    except KeyError:
        raise MalformedTape(f"{t!r} does not encode a symbol of the alphabet") from None


def decode_tape(t: Tree, alphabet: SymbolTable) -> TapeConfig:
    if not t:
        raise MalformedTape("a tape is a pair of lists")
    left_t, right_t = t
    right: List[str] = []
    while right_t:
        head, right_t = right_t
        right.append(_symbol(head, alphabet))
    left: List[str] = []
    while left_t:
        left_t, last = left_t
        left.append(_symbol(last, alphabet))
    return TapeConfig(tuple(left), tuple(right))


def tm_rule(ins: TMInstr, alphabet: SymbolTable) -> Clauses:
    """The guard/action rule implementing one Turing-machine instruction on encoded tapes."""
    if isinstance(ins, Write):
        a = alphabet.encode(ins.symbol)
        rules = [Rule(("L", ("_", "R")), ("L", (a, "R"))),
                 Rule(("x", ()), ("x", (a, ())))]
    elif isinstance(ins, MoveRight):
        rules = [Rule(("L", ("x", "R")), (("L", "x"), "R"))]
    elif isinstance(ins, MoveLeft):
        rules = [Rule((("L", "x"), "R"), ("L", ("x", "R")))]
    elif isinstance(ins, Check):
        a = alphabet.encode(ins.symbol)
        rules = [Rule(("L", (a, "R")), ("L", (a, "R")))]
    else:
        raise TypeError(f"not a Turing-machine instruction: {ins!r}")
    return Clauses.of(rules, name=str(ins))


def embed_tm(tm: TuringMachine) -> MachineGraph:
    """Same states and transitions; each instruction replaced by its tree rule."""
    rules: Dict[TMInstr, MachineExpr] = {}
    edges = []
    for src, dst, ins in tm.edges:
        if ins not in rules:
            rules[ins] = RuleExpr(tm_rule(ins, tm.alphabet))
        edges.append((src, dst, rules[ins]))
    return graph_from_edges(list(tm.states), sorted(tm.initial), sorted(tm.final), edges)


# -- direct simulation -------------------------------------------------------

@dataclass
class SimResult:
    outputs: Set[Tuple[str, TapeConfig]]
    steps: int
    configs: int
    truncated: bool = False
    reason: Optional[str] = None
    depths: Dict[Tuple[str, TapeConfig], int] = field(default_factory=dict, repr=False)


def _fire(ins: TMInstr, c: TapeConfig) -> Optional[TapeConfig]:
    if isinstance(ins, Write):
        return TapeConfig(c.left, (ins.symbol,) + c.right[1:])
    if isinstance(ins, MoveRight):
        if not c.right:
            return None
        return TapeConfig((c.right[0],) + c.left, c.right[1:])
    if isinstance(ins, MoveLeft):
        if not c.left:
            return None
        return TapeConfig(c.left[1:], (c.left[0],) + c.right)
    if c.right and c.right[0] == ins.symbol:
        return c
    return None


def simulate_tm(tm: TuringMachine, tape: TapeConfig, budget: Budget = Budget()) -> SimResult:
    out_edges: Dict[str, List[Tuple[TMInstr, str]]] = {q: [] for q in tm.states}
    for src, dst, ins in tm.edges:
        out_edges[src].append((ins, dst))
    seen = set()
    frontier = deque()
    depths: Dict[Tuple[str, TapeConfig], int] = {}
    for q in sorted(tm.initial):
        seen.add((q, tape))
        frontier.append((q, tape, 0))
        if q in tm.final:
            depths[(q, tape)] = 0
    steps = 0
    reason = None
    while frontier and reason is None:
        q, c, d = frontier.popleft()
        for ins, q2 in out_edges[q]:
            if steps >= budget.max_steps:
                reason = "max_steps"
                break
            steps += 1
            c2 = _fire(ins, c)
            if c2 is None or (q2, c2) in seen:
                continue
            if len(seen) >= budget.max_configs:
                reason = "max_configs"
                break
            seen.add((q2, c2))
            frontier.append((q2, c2, d + 1))
            if q2 in tm.final:
                depths[(q2, c2)] = d + 1
    return SimResult(set(depths), steps, len(seen), reason is not None, reason, depths)


# -- text formats ------------------------------------------------------------

def parse_tape(text: str) -> TapeConfig:
    """``"01|1"``: cells left of the head, ``|``, cells from the head on.

    Without ``|`` the head is on the first cell.  Cells are single characters,
    or whitespace-separated names if the text contains whitespace.
    """
    if "|" in text:
        left_text, right_text = text.split("|", 1)
    else:
        left_text, right_text = "", text
    spaced = any(ch.isspace() for ch in text.strip())

    def cells(s: str) -> Tuple[str, ...]:
        return tuple(s.split()) if spaced else tuple(s.strip())
    return TapeConfig(tuple(reversed(cells(left_text))), cells(right_text))


def format_tape(c: TapeConfig) -> str:
    spaced = any(len(sym) != 1 for sym in c.left + c.right)
    join = " ".join if spaced else "".join
    right = join(c.right)
    if not c.left:
        return right
    return join(reversed(c.left)) + (" | " if spaced else "|") + right


def tape_string(c: TapeConfig) -> str:
    """The whole written tape, left to right, ignoring the head position."""
    return "".join(reversed(c.left)) + "".join(c.right)


_LINE = re.compile(r"^\s*(\w+)\s*:\s*(.*?)\s*$")


def parse_tm(text: str) -> TuringMachine:
    alphabet: Sequence[str] = ()
    states: List[str] = []
    initial: List[str] = []
    final: List[str] = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = _LINE.match(raw)
        if not m:
            raise TreeSyntaxError(f"line {lineno}: expected 'key: value'", 0, raw)
        key, words = m.group(1), m.group(2).split()
        if key == "alphabet":
            alphabet = words
        elif key == "states":
            states.extend(words)
        elif key == "initial":
            initial.extend(words)
        elif key == "final":
            final.extend(words)
        elif key == "edge":
            if len(words) < 3:
                _bad(lineno, raw)
            edges.append((words[0], words[1], _parse_instr(words[2:], lineno, raw)))
        else:
            raise TreeSyntaxError(f"line {lineno}: unknown key {key!r}", 0, raw)
    for src, dst, _ in edges:
        for q in (src, dst):
            if q not in states:
                states.append(q)
    return TuringMachine(SymbolTable(alphabet), tuple(states), frozenset(initial),
                         frozenset(final), tuple(edges))


def _bad(lineno: int, raw: str):
    raise TreeSyntaxError(f"line {lineno}: malformed edge", 0, raw)


def _parse_instr(words: List[str], lineno: int, raw: str) -> TMInstr:
    kind, args = words[0], words[1:]
    if kind == "write" and len(args) == 1:
        return Write(args[0])
    if kind == "check" and len(args) == 1:
        return Check(args[0])
    if kind == "moveL" and not args:
        return MoveLeft()
    if kind == "moveR" and not args:
        return MoveRight()
    return _bad(lineno, raw)


def format_tm(tm: TuringMachine) -> str:
    lines = [
        f"alphabet: {' '.join(tm.alphabet)}",
        f"states: {' '.join(tm.states)}",
        f"initial: {' '.join(sorted(tm.initial))}",
        f"final: {' '.join(sorted(tm.final))}",
    ]
    lines += [f"edge: {src} {dst} {ins}" for src, dst, ins in tm.edges]
    return "\n".join(lines) + "\n"


def load_fixture(name: str) -> TuringMachine:
    """Load one of the machines shipped with the package (``binary_increment``, ...)."""
    text = resources.files("treemach.fixtures").joinpath(f"{name}.tm").read_text()
    return parse_tm(text)
