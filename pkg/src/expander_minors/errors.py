"""Exception types shared across the package."""
from __future__ import annotations


class GraphFormatError(ValueError):
    """Raised when an edge-list, model, or cut file is malformed."""


class DisconnectedGraphError(ValueError):
    """Raised by operations that require a connected input graph."""


class ConvergenceError(RuntimeError):
    """Eigensolver failed to reach the requested residual within its sweep cap."""


class RoutingError(RuntimeError):
    """Flow computation or certificate conversion failed to terminate usefully."""


class CongestionExceeded(RuntimeError):
    """Sampled path family exceeded the vertex-congestion budget.

    Retryable: resampling with a fresh seed may succeed.
    """

    def __init__(self, message: str, worst: int = 0, budget: int = 0):
        super().__init__(message)
        self.worst = worst
        self.budget = budget


class ResampleCapExceeded(RuntimeError):
    """Resampling loop hit its event cap before reaching a disjoint selection.

    Retryable: a fresh seed may succeed.
    """

    def __init__(self, message: str, events: int = 0, cap: int = 0):
        super().__init__(message)
        self.events = events
        self.cap = cap


class TerminalShortage(RuntimeError):
    """Not enough matched terminals to allocate the requested branch sets."""

    def __init__(self, message: str, needed: int = 0, available: int = 0):
        super().__init__(message)
        self.needed = needed
        self.available = available


class SizeGuardRejected(ValueError):
    """Strict-mode embedding rejected a target above the guaranteed size bound."""


class OracleBudgetError(RuntimeError):
    """Exhaustive minor search exceeded its state budget."""
