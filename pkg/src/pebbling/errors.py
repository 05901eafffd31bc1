"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PebblingError(Exception):
    """Base class for all errors raised by :mod:`pebbling`."""


class GraphError(PebblingError, ValueError):
    """Malformed graph input (self-loop, duplicate edge, bad endpoint)."""


class CycleError(GraphError):
    """The edge set contains a directed cycle."""

    def __init__(self, cycle: list) -> None:
        self.cycle = list(cycle)
        shown = " -> ".join(str(v) for v in self.cycle + self.cycle[:1])
        super().__init__(f"cycle detected: {shown}")


class UnknownVertexError(GraphError, KeyError):
    def __init__(self, vertices) -> None:
        self.vertices = sorted(vertices)
        super().__init__(f"unknown vertex ids: {self.vertices}")

    def __str__(self) -> str:
        return self.args[0]


class OrderMismatchError(GraphError):
    """A vertex sequence is not a (topological) permutation of the graph."""


class ParseError(PebblingError, ValueError):
    def __init__(self, line: int, reason: str) -> None:
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class InvalidSpecError(PebblingError, ValueError):
    """Generator parameters outside their documented range."""


class PreconditionError(PebblingError, ValueError):
    """A scheduler was called outside the regime it is defined for."""


class SeparatorContractError(PebblingError):
    def __init__(self, level: int, reason: str) -> None:
        self.level = level
        self.reason = reason
        super().__init__(f"separator contract violated at recursion level {level}: {reason}")


class InnerScheduleError(PebblingError):
    """The schedule handed to a composing scheduler is not legal on its graph."""
