"""Machine expressions: regular expressions whose letters are instructions.

Composition is written ``a . b`` and means "first a, then b".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .instr import ONE, Instruction, Op, Pair, format_instr

if TYPE_CHECKING:
    from .pattern import Clauses


class PsiInstr(enum.Enum):
    """The eleven-element finite instruction set built on the zipper."""

    OPEN = "open"
    LEFT = "left"
    RIGHT = "right"
    UP = "up"
    EXIT = "exit"
    LIFT1 = "lift1"
    LIFTUNIT = "liftunit"
    LIFTEPS = "lifteps"
    LIFTPI1 = "liftpi1"
    LIFTPI2 = "liftpi2"
    LIFTDELTA = "liftdelta"

    def __repr__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Prim:
    instr: Instruction


@dataclass(frozen=True)
class RuleExpr:
    """A guard/action partial function (possibly a disjoint ``|`` union of clauses)."""

    clauses: "Clauses"


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Seq:
    first: "MachineExpr"
    second: "MachineExpr"


@dataclass(frozen=True)
class Alt:
    left: "MachineExpr"
    right: "MachineExpr"


@dataclass(frozen=True)
class Star:
    body: "MachineExpr"


@dataclass(frozen=True)
class Named:
    name: str
    body: "MachineExpr"


@dataclass(frozen=True)
class PairExpr:
    """Componentwise pairing of two machines: (y, z) -> (first(y), second(z))."""

    first: "MachineExpr"
    second: "MachineExpr"


@dataclass(frozen=True)
class Psi:
    op: PsiInstr


MachineExpr = Union[Prim, RuleExpr, Zero, Seq, Alt, Star, Named, PairExpr, Psi]

ZERO = Zero()


def seq(*es: MachineExpr) -> MachineExpr:
    """Right-nested composition of ``es``; the empty composition is ``1``."""
    if not es:
        return Prim(ONE)
    out = es[-1]
    for e in reversed(es[:-1]):
        out = Seq(e, out)
    return out


def alt(*es: MachineExpr) -> MachineExpr:
    if not es:
        return ZERO
    out = es[-1]
    for e in reversed(es[:-1]):
        out = Alt(e, out)
    return out


def pair_expr(first: MachineExpr, second: MachineExpr) -> MachineExpr:
    """Pair two machines, collapsing to a single instruction when both sides are one."""
    if isinstance(first, Prim) and isinstance(second, Prim):
        return Prim(Pair(first.instr, second.instr))
    return PairExpr(first, second)


def under(e: MachineExpr) -> MachineExpr:
    """``(1, e)``: run ``e`` on the right component, keep the left one."""
    return pair_expr(Prim(ONE), e)


def is_straight(e: MachineExpr) -> bool:
    """True for star-free, union-free expressions (a single composite instruction)."""
    if isinstance(e, (Prim, RuleExpr, Psi)):
        return True
    if isinstance(e, Named):
        return is_straight(e.body)
    if isinstance(e, (Seq, PairExpr)):
        return is_straight(e.first) and is_straight(e.second)
    return False


# -- printing ----------------------------------------------------------------

# Precedence contexts; the *_LEFT variants parenthesize a left-nested operand
# so that printing then parsing (which nests to the right) is the identity.
_ALT, _ALT_LEFT, _SEQ, _SEQ_LEFT, _STAR = 0, 0.5, 1, 1.5, 2


def format_expr(e: MachineExpr) -> str:
    return _fmt(e, _ALT)


def _fmt(e: MachineExpr, ctx: float) -> str:
    if isinstance(e, Prim):
        if isinstance(e.instr, Op):
            return e.instr.value
        return format_instr(e.instr)
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Psi):
        return e.op.value
    if isinstance(e, Named):
        return e.name
    if isinstance(e, RuleExpr):
        from .pattern import format_clauses
        return f"[{format_clauses(e.clauses)}]"
    if isinstance(e, PairExpr):
        a, b = _fmt(e.first, _ALT), _fmt(e.second, _ALT)
        sep = "," if " " not in a and " " not in b else ", "
        return f"pair({a}{sep}{b})"
    if isinstance(e, Star):
        inner = _fmt(e.body, _STAR)
        if isinstance(e.body, Star):
            inner = f"({inner})"
        return f"{inner}*"
    if isinstance(e, Seq):
        s = f"{_fmt(e.first, _SEQ_LEFT)} . {_fmt(e.second, _SEQ)}"
        return f"({s})" if ctx > _SEQ else s
    if isinstance(e, Alt):
        s = f"{_fmt(e.left, _ALT_LEFT)} + {_fmt(e.right, _ALT)}"
        return f"({s})" if ctx > _ALT else s
    raise TypeError(f"not a machine expression: {e!r}")
