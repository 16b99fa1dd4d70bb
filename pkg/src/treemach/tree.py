"""Binary trees, the only datum a tree machine ever manipulates.

A tree is represented by plain Python tuples: the empty tuple ``()`` is the
unit tree and a 2-tuple ``(left, right)`` is a pair.  Tuples are immutable,
hashable and compared structurally, and Python's tuple ordering happens to
be the canonical order we want (unit sorts before every pair, pairs compare
lexicographically).
"""

from __future__ import annotations

import re
from typing import Iterator, Sequence, Tuple, Union

from .errors import MalformedPolish, NotANumeral, TreeSyntaxError

Tree = Union[Tuple[()], Tuple["Tree", "Tree"]]

UNIT: Tree = ()
_EVEN_TAG: Tree = ((), ())  # head of the encoding of 2n+2


def is_pair(t: Tree) -> bool:
    return len(t) == 2


def is_unit(t: Tree) -> bool:
    return len(t) == 0


def node_count(t: Tree) -> int:
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        if x:
            stack.append(x[0])
            stack.append(x[1])
    return n


def depth(t: Tree) -> int:
    """Height of the tree; the unit tree has depth 0."""
    best = 0
    stack = [(t, 0)]
    while stack:
        x, d = stack.pop()
        if x:
            stack.append((x[0], d + 1))
            stack.append((x[1], d + 1))
        elif d > best:
            best = d
    return best


# -- natural numbers ---------------------------------------------------------

def encode_nat(n: int) -> Tree:
    """Binary encoding: 0 = (), 2n+1 = ((), n), 2n+2 = (((),()), n)."""
    if n < 0:
        raise ValueError(f"cannot encode negative number {n}")
    tags = []
    while n > 0:
        if n % 2 == 1:
            tags.append(UNIT)
            n = (n - 1) // 2
        else:
            tags.append(_EVEN_TAG)
            n = (n - 2) // 2
    t: Tree = UNIT
    for tag in reversed(tags):
        t = (tag, t)
    return t


def decode_nat(t: Tree) -> int:
    tags = []
    x = t
    while x:
        tag, x = x
        if tag == UNIT:
            tags.append(1)
        elif tag == _EVEN_TAG:
            tags.append(2)
        else:
            raise NotANumeral(f"{print_tree(t)} is not a numeral")
    n = 0
    for k in reversed(tags):
        n = 2 * n + k
    return n


def is_numeral(t: Tree) -> bool:
    try:
        decode_nat(t)
    except NotANumeral:
        return False
    return True


class SymbolTable:
    """Finite set of names, each encoded as the numeral of its position."""

    def __init__(self, names: Sequence[str]):
        names = list(names)
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValueError(f"duplicate symbol {dup!r}")
        self.names: Tuple[str, ...] = tuple(names)
        self._codes = {name: i for i, name in enumerate(names)}
        self._trees = {name: encode_nat(i) for i, name in enumerate(names)}
        self._by_tree = {tree: name for name, tree in self._trees.items()}

    def __contains__(self, name: object) -> bool:
        return name in self._codes

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __repr__(self) -> str:
        return f"SymbolTable({list(self.names)!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def code(self, name: str) -> int:
        return self._codes[name]

    def encode(self, name: str) -> Tree:
        return self._trees[name]

    def decode(self, t: Tree) -> str:
        """Name of the symbol encoded by ``t``; KeyError if there is none."""
        return self._by_tree[t]


# -- Polish notation ---------------------------------------------------------

def to_polish(t: Tree) -> str:
    out = []
    stack = [t]
    while stack:
        x = stack.pop()
        if x:
            out.append("p")
            stack.append(x[1])
            stack.append(x[0])
        else:
            out.append("u")
    return "".join(out)


def from_polish(s: str) -> Tree:
    # Each open frame is a list holding the components read so far.
    frames: list = []
    result = None
    for i, ch in enumerate(s):
        if result is not None:
            raise MalformedPolish(f"trailing characters at position {i}")
        if ch == "p":
            frames.append([])
            continue
        if ch != "u":
            raise MalformedPolish(f"unexpected character {ch!r} at position {i}")
        value: Tree = UNIT
        while frames:
            frame = frames[-1]
            frame.append(value)
            if len(frame) < 2:
                break
            frames.pop()
            value = (frame[0], frame[1])
        else:
            result = value
    if result is None:
        raise MalformedPolish("incomplete tree" if s else "empty input")
    return result


# -- literal syntax ----------------------------------------------------------

_NUMERAL = re.compile(r"#(\d+)")


class _TreeParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise TreeSyntaxError(message, self.pos, self.text)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip()
        if self.text.startswith(ch, self.pos):
            self.pos += 1
        else:
            self.error(f"expected {ch!r}")

    def tree(self) -> Tree:
        self.skip()
        m = _NUMERAL.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return encode_nat(int(m.group(1)))
        self.expect("(")
        self.skip()
        if self.text.startswith(")", self.pos):
            self.pos += 1
            return UNIT
        left = self.tree()
        self.expect(",")
        right = self.tree()
        self.expect(")")
        return (left, right)


def parse_tree(text: str) -> Tree:
    p = _TreeParser(text)
    t = p.tree()
    p.skip()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    return t


def print_tree(t: Tree, numerals: bool = False) -> str:
    """Canonical text of ``t``; with ``numerals`` set, numeral subtrees print as ``#n``."""
    out = []
    stack: list = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, str):
            out.append(x)
        elif numerals and is_numeral(x):
            out.append(f"#{decode_nat(x)}")
        elif x:
            stack.extend((")", x[1], ",", x[0], "("))
        else:
            out.append("()")
    return "".join(out)
