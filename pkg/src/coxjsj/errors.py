"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CoxJsjError(Exception):
    """Base class for all library errors."""


class ParseError(CoxJsjError):
    """Malformed input text. Carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class GraphError(CoxJsjError):
    """Structurally invalid graph (loop, duplicate edge, unknown vertex)."""


class PreconditionError(CoxJsjError):
    """An operation was called on input outside its domain."""


class SearchBudgetExceeded(CoxJsjError):
    """A budgeted exhaustive search gave up. The answer is inconclusive."""

    def __init__(self, budget: int, what: str = "search") -> None:
        self.budget = budget
        super().__init__(f"inconclusive: {what} exceeded node budget {budget}")


class AmbiguousNeighbour(CoxJsjError):
    """A tree side admits zero or several candidate neighbour orbits."""


class TreeValidationError(CoxJsjError):
    """A built quotient tree violates one of its structural invariants."""


class CapExceeded(CoxJsjError):
    """A Cayley ball outgrew the element cap."""

    def __init__(self, cap: int, attained_radius: int) -> None:
        self.cap = cap
        self.attained_radius = attained_radius
        super().__init__(f"element cap {cap} exceeded; complete up to radius {attained_radius}")


class OnSeparatingSet(CoxJsjError):
    """A group element lies on the separating geodesic or strip."""

    def __init__(self, word: str) -> None:
        super().__init__(f"on separating set: {word or 'ε'}")
