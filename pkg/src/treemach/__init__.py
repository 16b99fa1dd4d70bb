"""Tree machines: finite automata whose data are unlabelled binary trees.

Trees are Python tuples: ``()`` is the unit tree and ``(a, b)`` a pair.
"""

from .errors import (
    Inconclusive, MalformedPolish, MalformedTape, NoClauseApplies, NonlinearGuard,
    NotANumeral, NotATerm, OverlappingGuards, TreeMachError, TreeSyntaxError, UnboundActionVar,
)
from .expr import (
    ZERO, Alt, Named, PairExpr, Prim, Psi, PsiInstr, RuleExpr, Seq, Star, Zero, alt,
    format_expr, pair_expr, seq, under,
)
from .instr import DELTA, EPS, ONE, PI1, PI2, UNIT_CHECK, Op, Pair, apply_instr, parse_instr
from .machine import (
    Budget, CostModel, MachineGraph, RunResult, graph_from_edges, graph_of_expr, run, trace,
)
from .machine_file import parse_expr, parse_machine_file
from .pattern import Clauses, Rule, apply_rule, compile_rule, compile_union, parse_rule
from .tree import (
    UNIT, SymbolTable, Tree, decode_nat, encode_nat, from_polish, parse_tree, print_tree,
    to_polish,
)

__version__ = "0.1.0"
