"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Malformed inputs: bad parameter functions, inconsistent specs, bad grids."""


class DomainError(ValueError):
    """Inputs outside the mathematical domain of an operation."""


class NumericalError(RuntimeError):
    """Numerical non-convergence. Carries the best partial result when available."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ExperimentError(RuntimeError):
    """Degenerate experiment setup (too few points, rank-deficient fits, ...)."""
