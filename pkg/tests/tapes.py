"""Enumeration of Turing-machine tapes for exhaustive checks."""

import itertools

from treemach.turing import TapeConfig


def all_tapes(alphabet, max_len):
    """Every tape over ``alphabet`` with at most ``max_len`` cells, at every head position."""
    for n in range(max_len + 1):
        for cells in itertools.product(list(alphabet), repeat=n):
            for head in range(n + 1):
                yield TapeConfig(tuple(reversed(cells[:head])), tuple(cells[head:]))
