"""Exception hierarchy shared by all treemach modules."""

from __future__ import annotations


class TreeMachError(Exception):
    """Base class for every error raised by this package."""


class TreeSyntaxError(TreeMachError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class NotANumeral(TreeMachError):
    pass


class MalformedPolish(TreeMachError):
    pass


class NonlinearGuard(TreeMachError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} occurs more than once in the guard")


class UnboundActionVar(TreeMachError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"action variable {name!r} is not bound by the guard")


class OverlappingGuards(TreeMachError):
    def __init__(self, i: int, j: int):
        self.indices = (i, j)
        super().__init__(f"guards of clauses {i} and {j} overlap")


class NoClauseApplies(TreeMachError):
    pass


class Inconclusive(TreeMachError):
    """A comparison could not be decided because a run hit its budget."""


class MalformedTape(TreeMachError):
    pass


class NotATerm(TreeMachError):
    pass
