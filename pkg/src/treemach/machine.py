"""Eilenberg machines over trees: state graphs, their execution and costs.

A machine is a finite graph whose edges carry partial functions on trees
(an instruction or a guard/action rule) or nothing at all (an epsilon edge).
It relates an input tree to every tree reachable at a final state.  Runs are
breadth-first searches over (state, tree) configurations with duplicate
elimination, bounded by a step budget and a configuration budget.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import Inconclusive
from .expr import (
    Alt, MachineExpr, Named, PairExpr, Prim, Psi, RuleExpr, Seq, Star, Zero,
)
from .instr import ONE, Instruction, Pair, apply_instr, compile_instr, instr_arity_depth
from .pattern import Clauses, Pattern, Rule
from .tree import Tree

Label = Union[Prim, RuleExpr]
Edge = Tuple[int, Optional[Label], int]


@dataclass(frozen=True)
class Budget:
    max_steps: int = 10**6
    max_configs: int = 10**5

    def __post_init__(self):
        if self.max_steps <= 0 or self.max_configs <= 0:
            raise ValueError("budgets must be positive")


class CostModel(enum.Enum):
    PER_INSTRUCTION = "per-instr"
    DEPTH_WEIGHTED = "depth"

    def cost(self, label: Label) -> int:
        if self is CostModel.PER_INSTRUCTION:
            return 1
        return 1 + label_depth(label)


def _pattern_depth(p: Pattern) -> int:
    if isinstance(p, str) or not p:
        return 0
    return 1 + max(_pattern_depth(p[0]), _pattern_depth(p[1]))


def label_depth(label: Label) -> int:
    """Pair nesting depth of an edge label (how deep into the tree it reaches)."""
    if isinstance(label, Prim):
        return instr_arity_depth(label.instr)
    return max(max(_pattern_depth(r.guard), _pattern_depth(r.action))
               for r in label.clauses.rules)


def format_label(label: Optional[Label]) -> str:
    if label is None:
        return "eps-edge"
    if isinstance(label, Prim):
        from .instr import format_instr
        return format_instr(label.instr)
    return label.clauses.label()


# -- graphs ------------------------------------------------------------------

@dataclass(frozen=True)
class MachineGraph:
    n_states: int
    initial: FrozenSet[int]
    final: FrozenSet[int]
    edges: Tuple[Edge, ...]
    names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        states = range(self.n_states)
        if not (set(self.initial) <= set(states) and set(self.final) <= set(states)):
            raise ValueError("initial and final states must be states of the graph")
        for src, _, dst in self.edges:
            if src not in states or dst not in states:
                raise ValueError(f"edge {src}->{dst} leaves the state set")

    def state_name(self, q: int) -> str:
        return self.names[q] if self.names else f"q{q}"

    @cached_property
    def program(self) -> "_Program":
        return _Program(self)


class _Program:
    """Epsilon-free view of a graph: per state, the labelled moves of its closure."""

    def __init__(self, g: MachineGraph):
        eps: Dict[int, List[int]] = {q: [] for q in range(g.n_states)}
        labelled: Dict[int, List[int]] = {q: [] for q in range(g.n_states)}
        for k, (src, label, dst) in enumerate(g.edges):
            if label is None:
                eps[src].append(dst)
            else:
                labelled[src].append(k)
        fns: Dict[int, Callable] = {}
        self.moves: List[List[Tuple[Callable, Label, int]]] = []
        self.accepting: List[bool] = []
        for q in range(g.n_states):
            closure = _closure(q, eps)
            self.accepting.append(any(p in g.final for p in closure))
            moves = []
            for p in closure:
                for k in labelled[p]:
                    _, label, dst = g.edges[k]
                    if k not in fns:
                        fns[k] = _label_function(label)
                    moves.append((fns[k], label, dst))
            self.moves.append(moves)


def _closure(q: int, eps: Dict[int, List[int]]) -> List[int]:
    seen = [q]
    seen_set = {q}
    i = 0
    while i < len(seen):
        for p in eps[seen[i]]:
            if p not in seen_set:
                seen_set.add(p)
                seen.append(p)
        i += 1
    return seen


def _label_function(label: Label) -> Callable[[Tree], Optional[Tree]]:
    if isinstance(label, Prim):
        return compile_instr(label.instr)
    return label.clauses.function


_LIFT_CACHE: Dict[Tuple[int, Clauses], Clauses] = {}


def lift_label(label: Label, side: int) -> Label:
    """The label acting on component ``side`` (0 left, 1 right) of a pair, the other held."""
    if isinstance(label, Prim):
        if side == 1:
            return Prim(Pair(ONE, label.instr))
        return Prim(Pair(label.instr, ONE))
    key = (side, label.clauses)
    lifted = _LIFT_CACHE.get(key)
    if lifted is None:
        rules = []
        for r in label.clauses.rules:
            used = set(_names(r.guard))
            hold = next(f"$c{k}" for k in itertools.count() if f"$c{k}" not in used)
            if side == 1:
                rules.append(Rule((hold, r.guard), (hold, r.action)))
            else:
                rules.append(Rule((r.guard, hold), (r.action, hold)))
        inner = label.clauses.label()
        name = f"(1,{inner})" if side == 1 else f"({inner},1)"
        lifted = Clauses(tuple(rules), name)
        _LIFT_CACHE[key] = lifted
    return RuleExpr(lifted)


def _names(p: Pattern):
    if isinstance(p, str):
        yield p
    elif p:
        yield from _names(p[0])
        yield from _names(p[1])


def nullable(e: MachineExpr) -> bool:
    """Whether ``e`` has a path that applies no instruction at all."""
    if isinstance(e, Star):
        return True
    if isinstance(e, Seq):
        return nullable(e.first) and nullable(e.second)
    if isinstance(e, Alt):
        return nullable(e.left) or nullable(e.right)
    if isinstance(e, Named):
        return nullable(e.body)
    return False


def _straight_instrs(e: MachineExpr) -> Optional[List[Instruction]]:
    """Flatten a composition of plain instructions into a list, or None."""
    if isinstance(e, Prim):
        return [e.instr]
    if isinstance(e, Named):
        return _straight_instrs(e.body)
    if isinstance(e, Seq):
        a, b = _straight_instrs(e.first), _straight_instrs(e.second)
        return None if a is None or b is None else a + b
    if isinstance(e, PairExpr):
        a, b = _straight_instrs(e.first), _straight_instrs(e.second)
        if a is None or b is None:
            return None
        n = max(len(a), len(b))
        a = a + [ONE] * (n - len(a))
        b = b + [ONE] * (n - len(b))
        return [Pair(x, y) for x, y in zip(a, b)]
    return None


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: List[Edge] = []

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def label(self, label: Label, sides: Tuple[int, ...]) -> Tuple[int, int]:
        for side in reversed(sides):
            label = lift_label(label, side)
        s, t = self.state(), self.state()
        self.edges.append((s, label, t))
        return s, t

    def build(self, e: MachineExpr, sides: Tuple[int, ...] = ()) -> Tuple[int, int]:
        if isinstance(e, (Prim, RuleExpr)):
            return self.label(e, sides)
        if isinstance(e, Psi):
            from .zipper import psi_expr
            return self.build(psi_expr(e.op), sides)
        if isinstance(e, Named):
            return self.build(e.body, sides)
        if isinstance(e, Zero):
            return self.state(), self.state()
        if isinstance(e, Seq):
            s1, t1 = self.build(e.first, sides)
            s2, t2 = self.build(e.second, sides)
            self.edges.append((t1, None, s2))
            return s1, t2
        if isinstance(e, Alt):
            s, t = self.state(), self.state()
            for branch in (e.left, e.right):
                bs, bt = self.build(branch, sides)
                self.edges.append((s, None, bs))
                self.edges.append((bt, None, t))
            return s, t
        if isinstance(e, Star):
            s, t = self.state(), self.state()
            bs, bt = self.build(e.body, sides)
            self.edges.extend([(s, None, t), (s, None, bs), (bt, None, bs), (bt, None, t)])
            return s, t
        if isinstance(e, PairExpr):
            return self.build_pair(e, sides)
        raise TypeError(f"not a machine expression: {e!r}")

    def build_pair(self, e: PairExpr, sides: Tuple[int, ...]) -> Tuple[int, int]:
        instrs = _straight_instrs(e)
        if instrs is not None:
            parts = [self.label(Prim(i), sides) for i in instrs]
        else:
            parts = []
            left_is_identity = isinstance(e.first, Prim) and e.first.instr is ONE
            if not left_is_identity:
                parts.append(self.build(e.first, sides + (0,)))
            if (left_is_identity or nullable(e.first)) and nullable(e.second):
                # Nothing else would reject a non-pair input.
                parts.append(self.label(Prim(Pair(ONE, ONE)), sides))
            parts.append(self.build(e.second, sides + (1,)))
        for (_, t1), (s2, _) in zip(parts, parts[1:]):
            self.edges.append((t1, None, s2))
        return parts[0][0], parts[-1][1]


def graph_of_expr(e: MachineExpr) -> MachineGraph:
    b = _Builder()
    s, t = b.build(e)
    return MachineGraph(b.n, frozenset([s]), frozenset([t]), tuple(b.edges))


def graph_from_edges(states: Sequence[str], initial: Iterable[str], final: Iterable[str],
                     edges: Iterable[Tuple[str, str, MachineExpr]]) -> MachineGraph:
    """Build a graph over named states whose edges carry arbitrary machine expressions."""
    index = {name: k for k, name in enumerate(states)}
    if len(index) != len(states):
        raise ValueError("duplicate state names")
    b = _Builder()
    b.n = len(states)
    for src, dst, e in edges:
        if isinstance(e, (Prim, RuleExpr)):
            b.edges.append((index[src], e, index[dst]))
            continue
        s, t = b.build(e)
        b.edges.append((index[src], None, s))
        b.edges.append((t, None, index[dst]))
    names = tuple(states) + tuple(f"_{k}" for k in range(len(states), b.n))
    return MachineGraph(b.n, frozenset(index[q] for q in initial),
                        frozenset(index[q] for q in final), tuple(b.edges), names)


# -- running -----------------------------------------------------------------

@dataclass
class RunResult:
    outputs: Tuple[Tree, ...]
    steps: int
    configs: int
    truncated: bool = False
    reason: Optional[str] = None
    cost: int = 0
    # Fewest labelled edges on any path producing each output.
    depths: Dict[Tree, int] = field(default_factory=dict, repr=False)
    parents: Optional[dict] = field(default=None, repr=False)
    accepting: Optional[dict] = field(default=None, repr=False)


def run(m: Union[MachineGraph, MachineExpr], t: Tree, budget: Budget = Budget(),
        cost_model: CostModel = CostModel.PER_INSTRUCTION,
        record_paths: bool = False) -> RunResult:
    if not isinstance(m, MachineGraph):
        m = graph_of_expr(m)
    prog = m.program
    moves, accepting = prog.moves, prog.accepting
    max_steps, max_configs = budget.max_steps, budget.max_configs
    per_instr = cost_model is CostModel.PER_INSTRUCTION
    label_cost: Dict[int, int] = {}

    visited = set()
    parents: Optional[dict] = {} if record_paths else None
    depths: Dict[Tree, int] = {}
    accepted: Dict[Tree, Tuple[int, Tree]] = {}
    frontier = deque()
    for q in sorted(m.initial):
        cfg = (q, t)
        if cfg in visited:
            continue
        visited.add(cfg)
        frontier.append((q, t, 0))
        if record_paths:
            parents[cfg] = None
        if accepting[q] and t not in depths:
            depths[t] = 0
            accepted[t] = cfg

    steps = cost = 0
    reason = None
    while frontier and reason is None:
        q, x, d = frontier.popleft()
        d1 = d + 1
        for fn, label, q2 in moves[q]:
            if steps >= max_steps:
                reason = "max_steps"
                break
            steps += 1
            if per_instr:
                cost += 1
            else:
                c = label_cost.get(id(label))
                if c is None:
                    c = label_cost[id(label)] = cost_model.cost(label)
                cost += c
            y = fn(x)
            if y is None:
                continue
            cfg = (q2, y)
            if cfg in visited:
                continue
            if len(visited) >= max_configs:
                reason = "max_configs"
                break
            visited.add(cfg)
            frontier.append((q2, y, d1))
            if record_paths:
                parents[cfg] = ((q, x), label)
            if accepting[q2] and y not in depths:
                depths[y] = d1
                accepted[y] = cfg

    return RunResult(
        outputs=tuple(sorted(depths)),
        steps=steps,
        configs=len(visited),
        truncated=reason is not None,
        reason=reason,
        cost=cost,
        depths=depths,
        parents=parents,
        accepting=accepted if record_paths else None,
    )


@dataclass
class TracePath:
    states: List[int]
    labels: List[Label]
    trees: List[Tree]

    @property
    def output(self) -> Tree:
        return self.trees[-1]

    def cost(self, cost_model: CostModel = CostModel.PER_INSTRUCTION) -> int:
        return sum(cost_model.cost(lbl) for lbl in self.labels)


def trace(m: Union[MachineGraph, MachineExpr], t: Tree, budget: Budget = Budget()) -> List[TracePath]:
    """One witnessing path per output, in canonical output order."""
    res = run(m, t, budget, record_paths=True)
    paths = []
    for out in res.outputs:
        cfg = res.accepting[out]
        states, labels, trees = [], [], []
        while cfg is not None:
            q, x = cfg
            states.append(q)
            trees.append(x)
            parent = res.parents[cfg]
            if parent is None:
                break
            cfg, label = parent
            labels.append(label)
        states.reverse()
        labels.reverse()
        trees.reverse()
        paths.append(TracePath(states, labels, trees))
    return paths


def relation_equal_on(m1, m2, tests: Iterable[Tree],
                      budget: Budget = Budget()) -> Tuple[bool, Optional[Tree]]:
    """Compare two machines on sample inputs; returns (equal, first counterexample)."""
    if not isinstance(m1, MachineGraph):
        m1 = graph_of_expr(m1)
    if not isinstance(m2, MachineGraph):
        m2 = graph_of_expr(m2)
    for t in tests:
        r1, r2 = run(m1, t, budget), run(m2, t, budget)
        if r1.truncated or r2.truncated:
            raise Inconclusive(f"run truncated on input {t!r}")
        if r1.outputs != r2.outputs:
            return False, t
    return True, None


def eval_straight(e: MachineExpr, t: Tree) -> Optional[Tree]:
    """Evaluate a star-free, union-free expression directly, without building a graph."""
    if isinstance(e, Prim):
        return apply_instr(e.instr, t)
    if isinstance(e, RuleExpr):
        return e.clauses.apply(t)
    if isinstance(e, Seq):
        x = eval_straight(e.first, t)
        return None if x is None else eval_straight(e.second, x)
    if isinstance(e, PairExpr):
        if not t:
            return None
        a = eval_straight(e.first, t[0])
        if a is None:
            return None
        b = eval_straight(e.second, t[1])
        return None if b is None else (a, b)
    if isinstance(e, Named):
        return eval_straight(e.body, t)
    if isinstance(e, Psi):
        from .zipper import psi_expr
        return eval_straight(psi_expr(e.op), t)
    if isinstance(e, Zero):
        return None
    raise ValueError(f"{type(e).__name__} is not a straight-line expression")
