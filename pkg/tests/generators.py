"""Random and exhaustive generators shared by the test modules."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import List, Tuple

from hypothesis import strategies as st

from treemach.expr import Alt, Prim, Seq, Star, ZERO, alt, pair_expr, seq
from treemach.instr import DELTA, EPS, ONE, PI1, PI2, UNIT_CHECK, Instruction, Pair
from treemach.pattern import Rule
from treemach.tree import Tree

OPS = (ONE, UNIT_CHECK, EPS, PI1, PI2, DELTA)


@lru_cache(maxsize=None)
def trees_up_to(depth: int) -> Tuple[Tree, ...]:
    """Every tree of depth at most ``depth`` (the unit tree has depth 0)."""
    if depth == 0:
        return ((),)
    smaller = trees_up_to(depth - 1)
    return ((),) + tuple(itertools.product(smaller, smaller))


def random_tree(rng: random.Random, max_depth: int, p_pair: float = 0.6) -> Tree:
    if max_depth == 0 or rng.random() > p_pair:
        return ()
    return (random_tree(rng, max_depth - 1, p_pair), random_tree(rng, max_depth - 1, p_pair))


def tree_strategy(max_leaves: int = 30):
    return st.recursive(st.just(()), lambda kids: st.tuples(kids, kids), max_leaves=max_leaves)


def random_instr(rng: random.Random, max_depth: int) -> Instruction:
    if max_depth == 0 or rng.random() < 0.4:
        return rng.choice(OPS)
    return Pair(random_instr(rng, max_depth - 1), random_instr(rng, max_depth - 1))


def instr_strategy(max_leaves: int = 12):
    return st.recursive(st.sampled_from(OPS), lambda kids: st.builds(Pair, kids, kids),
                        max_leaves=max_leaves)


def _random_guard(rng: random.Random, depth: int, names: List[str]):
    r = rng.random()
    if depth == 0 or r < 0.3:
        if rng.random() < 0.15:
            return "_"
        name = f"x{len(names)}"
        names.append(name)
        return name
    if r < 0.4:
        return ()
    return (_random_guard(rng, depth - 1, names), _random_guard(rng, depth - 1, names))


def _random_action(rng: random.Random, depth: int, names: List[str]):
    r = rng.random()
    if depth == 0 or r < 0.35:
        if names and rng.random() < 0.8:
            return rng.choice(names)
        return ()
    return (_random_action(rng, depth - 1, names), _random_action(rng, depth - 1, names))


def random_rule(rng: random.Random, max_depth: int = 5) -> Rule:
    """A valid rule: linear guard, action built from the guard's variables."""
    names: List[str] = []
    guard = _random_guard(rng, max_depth, names)
    return Rule(guard, _random_action(rng, max_depth, names))


def matching_tree(rng: random.Random, guard, fill_depth: int = 3) -> Tree:
    """A tree matched by ``guard``; variables are filled with random subtrees."""
    if isinstance(guard, str):
        return random_tree(rng, fill_depth)
    if not guard:
        return ()
    return (matching_tree(rng, guard[0], fill_depth), matching_tree(rng, guard[1], fill_depth))


# Instructions that never enlarge a tree; stars over them terminate quickly.
SHRINKING = (ONE, UNIT_CHECK, EPS, PI1, PI2, Pair(PI1, ONE), Pair(ONE, PI2),
             Pair(EPS, ONE), Pair(PI2, PI1))


def random_expr(rng: random.Random, depth: int):
    """A machine expression whose runs stay small: stars only over shrinking bodies."""
    r = rng.random()
    if depth == 0 or r < 0.25:
        k = rng.random()
        if k < 0.08:
            return ZERO
        if k < 0.2:
            return Prim(DELTA)
        return Prim(rng.choice(SHRINKING))
    if r < 0.45:
        return Seq(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if r < 0.65:
        return Alt(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if r < 0.8:
        return Star(_shrinking_expr(rng, depth - 1))
    return pair_expr(random_expr(rng, depth - 1), random_expr(rng, depth - 1))


def _shrinking_expr(rng: random.Random, depth: int):
    if depth == 0 or rng.random() < 0.5:
        return Prim(rng.choice(SHRINKING))
    if rng.random() < 0.5:
        return seq(_shrinking_expr(rng, depth - 1), _shrinking_expr(rng, depth - 1))
    return alt(_shrinking_expr(rng, depth - 1), _shrinking_expr(rng, depth - 1))
