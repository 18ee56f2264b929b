"""Failure types shared across the numeric layers."""


class NumericsError(RuntimeError):
    """Base class for numeric failures (non-convergence, lost brackets)."""


class QuadratureError(NumericsError):
    """Panel refinement stopped before reaching the requested tolerance."""


class BracketError(NumericsError):
    """A root bracket could not be established or does not change sign."""


class ShootingError(NumericsError):
    """An ODE shoot ended without producing the required event."""
