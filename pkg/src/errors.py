"""
Exception hierarchy for the martingale bounds toolkit.

Every error raised on purpose by the library derives from BoundsError so that
the command-line front end can translate it into a documented exit code.
"""


class BoundsError(Exception):
    """Base class for all errors raised by the toolkit."""
    pass


class DomainError(BoundsError, ValueError):
    """Custom exception for arguments outside a function's mathematical domain."""
    pass


class ProfileValidationError(DomainError):
    """Custom exception for moment profiles no bounded random variable can satisfy."""
    pass


class LawValidationError(DomainError):
    """Custom exception for malformed increment laws, lattice laws and martingale specs."""
    pass


class ResourceGuardError(BoundsError):
    """Raised when an exact dynamic program would exceed its state-step budget."""

    def __init__(self, message: str, state_steps: int, limit: int):
        super().__init__(message)
        self.state_steps = state_steps
        self.limit = limit


class MassConservationError(BoundsError, ArithmeticError):
    """Raised when a dynamic program loses or gains probability mass beyond tolerance."""
    pass


class IOFailure(BoundsError):
    """Raised when an output destination or args file cannot be used."""
    pass
