"""The instruction set: six generators closed under componentwise pairing.

Every instruction is a partial function on trees.  Undefinedness is the
ordinary outcome ``None``; it prunes a branch of a machine run and is not an
error.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import TreeSyntaxError
from .tree import UNIT, Tree


class Op(enum.Enum):
    ONE = "1"
    UNIT = "unit"
    EPS = "eps"
    PI1 = "pi1"
    PI2 = "pi2"
    DELTA = "delta"

    def __repr__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Pair:
    first: "Instruction"
    second: "Instruction"

    def __repr__(self) -> str:
        return format_instr(self)


Instruction = Union[Op, Pair]

ONE, UNIT_CHECK, EPS, PI1, PI2, DELTA = Op.ONE, Op.UNIT, Op.EPS, Op.PI1, Op.PI2, Op.DELTA


def apply_instr(i: Instruction, t: Tree) -> Optional[Tree]:
    if i is Op.ONE:
        return t
    if i is Op.DELTA:
        return (t, t)
    if i is Op.EPS:
        return UNIT
    if i is Op.UNIT:
        return UNIT if not t else None
    if i is Op.PI1:
        return t[0] if t else None
    if i is Op.PI2:
        return t[1] if t else None
    if not t:
        return None
    a = apply_instr(i.first, t[0])
    if a is None:
        return None
    b = apply_instr(i.second, t[1])
    if b is None:
        return None
    return (a, b)


def compile_instr(i: Instruction) -> Callable[[Tree], Optional[Tree]]:
    """Same partial function as ``apply_instr(i, .)``, without re-dispatching on ``i``."""
    if i is Op.ONE:
        return lambda t: t
    if i is Op.DELTA:
        return lambda t: (t, t)
    if i is Op.EPS:
        return lambda t: UNIT
    if i is Op.UNIT:
        return lambda t: None if t else UNIT
    if i is Op.PI1:
        return lambda t: t[0] if t else None
    if i is Op.PI2:
        return lambda t: t[1] if t else None
    f = compile_instr(i.first)
    g = compile_instr(i.second)
    if i.first is Op.ONE:
        def run_right(t):
            if not t:
                return None
            b = g(t[1])
            return None if b is None else (t[0], b)
        return run_right

    def run_pair(t):
        if not t:
            return None
        a = f(t[0])
        if a is None:
            return None
        b = g(t[1])
        return None if b is None else (a, b)
    return run_pair


def instr_arity_depth(i: Instruction) -> int:
    if isinstance(i, Op):
        return 0
    return 1 + max(instr_arity_depth(i.first), instr_arity_depth(i.second))


def format_instr(i: Instruction) -> str:
    if isinstance(i, Op):
        return i.value
    return f"pair({format_instr(i.first)},{format_instr(i.second)})"


_TOKEN = re.compile(r"\s*(pair|unit|eps|pi1|pi2|delta|1|\(|\)|,)")
_OPS = {op.value: op for op in Op}


def parse_instr(text: str) -> Instruction:
    """Parse the textual form ``1 | unit | eps | pi1 | pi2 | delta | pair(i,j)``."""
    pos = 0

    def token() -> str:
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m:
            raise TreeSyntaxError("expected an instruction", pos, text)
        pos = m.end()
        return m.group(1)

    def instr() -> Instruction:
        start = pos
        tok = token()
        if tok in _OPS:
            return _OPS[tok]
        if tok != "pair" or token() != "(":
            raise TreeSyntaxError("expected an instruction", start, text)
        first = instr()
        if token() != ",":
            raise TreeSyntaxError("expected ','", pos, text)
        second = instr()
        if token() != ")":
            raise TreeSyntaxError("expected ')'", pos, text)
        return Pair(first, second)

    result = instr()
    if text[pos:].strip():
        raise TreeSyntaxError("unexpected trailing input", pos, text)
    return result
