"""Zipper instructions and the finite instruction set built from them.

A zipper is an ordinary tree ``(context, focus)``.  Going down marks the
context with 0 (went left) or 1 (went right), as the numerals ``()`` and
``((),())``.  Lifting rewrites any instruction into a word over the eleven
zipper-level instructions that applies it to the focus only.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict

from .expr import MachineExpr, Prim, Psi, PsiInstr, RuleExpr, seq
from .instr import DELTA, EPS, ONE, PI1, PI2, UNIT_CHECK, Instruction, Op, Pair
from .pattern import Clauses, parse_clauses

ZIPPER_RULES_TEXT = {
    "open": "x => ((), x)",
    "left": "(x, (y, z)) => ((0, (x, z)), y)",
    "right": "(x, (y, z)) => ((1, (x, y)), z)",
    "up": "((0, (x, z)), y) => (x, (y, z)) | ((1, (x, y)), z) => (x, (y, z))",
    "exit": "((), x) => x",
}


@lru_cache(maxsize=None)
def _zipper_rules() -> Dict[str, Clauses]:
    return {name: parse_clauses(text, name=name) for name, text in ZIPPER_RULES_TEXT.items()}


def zipper_rules() -> Dict[str, Clauses]:
    return dict(_zipper_rules())


_LIFTED_OPS = {
    PsiInstr.LIFT1: ONE,
    PsiInstr.LIFTUNIT: UNIT_CHECK,
    PsiInstr.LIFTEPS: EPS,
    PsiInstr.LIFTPI1: PI1,
    PsiInstr.LIFTPI2: PI2,
    PsiInstr.LIFTDELTA: DELTA,
}
_LIFT_OF = {op: psi for psi, op in _LIFTED_OPS.items()}


def psi_expr(op: PsiInstr) -> MachineExpr:
    """The core-language meaning of a zipper-level instruction (a rule or an instruction)."""
    if op in _LIFTED_OPS:
        return Prim(Pair(ONE, _LIFTED_OPS[op]))
    return RuleExpr(_zipper_rules()[op.value])


def lift(i: Instruction) -> MachineExpr:
    """A word over the finite set acting on a zipper as ``(1, i)``."""
    if isinstance(i, Op):
        return Psi(_LIFT_OF[i])
    return seq(Psi(PsiInstr.LEFT), lift(i.first), Psi(PsiInstr.UP),
               Psi(PsiInstr.RIGHT), lift(i.second), Psi(PsiInstr.UP))


def to_finite(i: Instruction) -> MachineExpr:
    return seq(Psi(PsiInstr.OPEN), lift(i), Psi(PsiInstr.EXIT))
