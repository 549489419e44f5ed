"""Shared exception types."""


class BudgetExceededError(Exception):
    """An exhaustive search hit its configured bound before finishing.

    ``found`` carries a partial result count when the search produced one.
    """

    def __init__(self, message: str, found: int | None = None, explored: int | None = None):
        super().__init__(message)
        self.found = found
        self.explored = explored


class NoAmalgamError(RuntimeError):
    """No amalgam was found within the search budget.

    Existence is guaranteed for confluent epimorphisms between connected
    graphs, so this signals a bug or a budget that is too small.
    """


class InvariantViolationError(RuntimeError):
    """An internal invariant that the theory guarantees failed to hold."""
