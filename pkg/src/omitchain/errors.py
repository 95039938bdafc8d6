"""Exception types shared across the package."""


class OmitChainError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(OmitChainError):
    """Inadmissible configuration or run parameters (bad step size, bad JSON, ...)."""


class MissingDependencyError(OmitChainError):
    """A required companion input (e.g. a steady state in drive mode) was not supplied."""


class SingularSystemError(OmitChainError):
    """A linear solve hit an exactly singular matrix (lossless pole)."""


class ConvergenceError(OmitChainError):
    """Fixed-point iteration did not converge; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class DegenerateInputError(OmitChainError):
    """Inputs put a formula at an undefined 0/0 point."""


class ResolutionError(OmitChainError):
    """Spectrum grid too coarse to resolve a detected window."""


class NotApplicableError(OmitChainError):
    """The requested measurement is undefined for this spectrum shape."""


class DivergenceError(OmitChainError):
    """Time integration produced a non-finite state; carries the time stamp."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class WindowError(OmitChainError):
    """Demodulation window shorter than one probe period or than the trajectory."""
