"""Exception types shared across the package."""


class MemcritError(Exception):
    """Base class for numerical failures (CLI exit status 2)."""


class NonPhysicalError(MemcritError, ValueError):
    """A model was evaluated outside its region of validity.

    ``quantity`` names the offending intermediate value and ``value`` holds it.
    """

    def __init__(self, message, quantity=None, value=None):
        super().__init__(message)
        self.quantity = quantity
        self.value = value


class ConvergenceError(MemcritError):
    """An iterative method did not reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BracketError(MemcritError, ValueError):
    """Root bracket endpoints do not enclose a sign change."""


class StepSizeError(MemcritError):
    """Adaptive step size fell below the configured minimum."""

    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit status 1)."""
