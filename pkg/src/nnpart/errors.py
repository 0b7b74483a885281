"""Exception types shared across the engine."""


class DimensionMismatchError(ValueError):
    """An input vector or matrix has the wrong dimension."""


class SolverFailureError(RuntimeError):
    """The LP solver broke down numerically (tiny pivots, iteration cap)."""


class EmptyBodyError(RuntimeError):
    """A convex body that must be nonempty turned out to be empty."""


class InconsistentFeedbackError(RuntimeError):
    """Feedback emptied a knowledge set; the environment lied or the harness is buggy."""


class InvariantViolationError(RuntimeError):
    """A structural guarantee failed at runtime; indicates a bug upstream."""


class ConfigurationError(ValueError):
    """A parameter combination is invalid for the requested construction."""


class GenerationError(RuntimeError):
    """A query generator could not produce a valid stream (rejection cap hit)."""


class AdversaryExhaustedError(RuntimeError):
    """The packing adversary ran out of room for new points."""
