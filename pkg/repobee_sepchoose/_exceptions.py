"""Exceptions raised by repobee-sepchoose.

.. module:: _exceptions
    :synopsis: Exception hierarchy for repobee-sepchoose. Everything derives
        from :py:class:`repobee_plug.PlugError` so RepoBee reports it cleanly.
"""
import repobee_plug as plug


class SepchooseError(plug.PlugError):
    """Base class for all errors raised by this plugin."""


class GraphError(SepchooseError):
    pass


class VertexOutOfRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class GraphFormatError(GraphError):
    pass


class InvalidVertexSetError(GraphError):
    pass


class ParameterError(SepchooseError):
    pass


class BudgetExceededError(SepchooseError):
    """Raised when an exact computation would exceed its configured budget."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what} exceeds budget of {budget}")
        self.what = what
        self.budget = budget


class NotStableError(SepchooseError):
    pass


class PreconditionError(SepchooseError):
    pass


class SeparationError(SepchooseError):
    pass


class MissingListError(SepchooseError):
    pass


class LPError(SepchooseError):
    """Internal error in the exact LP solver. Should never surface."""
