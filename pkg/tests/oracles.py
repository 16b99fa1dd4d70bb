"""Independent reference semantics used to check the graph-based executor."""

from __future__ import annotations

from typing import FrozenSet

from treemach.expr import Alt, Named, PairExpr, Prim, Psi, RuleExpr, Seq, Star, Zero
from treemach.instr import apply_instr
from treemach.tree import Tree


def denote(e, t: Tree, limit: int = 100_000) -> FrozenSet[Tree]:
    """The relation of ``e`` applied to ``t``, computed directly on sets of trees."""
    if isinstance(e, Prim):
        out = apply_instr(e.instr, t)
        return frozenset() if out is None else frozenset([out])
    if isinstance(e, RuleExpr):
        out = e.clauses.apply(t)
        return frozenset() if out is None else frozenset([out])
    if isinstance(e, Zero):
        return frozenset()
    if isinstance(e, Named):
        return denote(e.body, t, limit)
    if isinstance(e, Psi):
        from treemach.zipper import psi_expr
        return denote(psi_expr(e.op), t, limit)
    if isinstance(e, Seq):
        return frozenset(y for x in denote(e.first, t, limit) for y in denote(e.second, x, limit))
    if isinstance(e, Alt):
        return denote(e.left, t, limit) | denote(e.right, t, limit)
    if isinstance(e, PairExpr):
        if not t:
            return frozenset()
        lefts = denote(e.first, t[0], limit)
        rights = denote(e.second, t[1], limit)
        return frozenset((a, b) for a in lefts for b in rights)
    if isinstance(e, Star):
        reached = {t}
        todo = [t]
        while todo:
            x = todo.pop()
            for y in denote(e.body, x, limit):
                if y not in reached:
                    if len(reached) >= limit:
                        raise RuntimeError("star iteration did not converge")
                    reached.add(y)
                    todo.append(y)
        return frozenset(reached)
    raise TypeError(f"not a machine expression: {e!r}")
