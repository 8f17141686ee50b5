"""Exception hierarchy shared by every module."""


class CVTeleportError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CVTeleportError, ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class ValidationError(CVTeleportError, ValueError):
    """An input object violates one of its documented invariants."""


class NumericError(CVTeleportError, ArithmeticError):
    """A numerical procedure failed to converge or produced garbage."""


class EvaluationError(NumericError):
    """An integrand returned a non-finite value.

    Attributes
    ----------
    node : complex
        The phase-space point at which the evaluation failed.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class InconsistencyError(NumericError):
    """Two quantities that must agree (or a residue that must vanish) do not."""


class TruncationError(CVTeleportError):
    """A Fock-space truncation is too small for the requested state."""


class HeraldError(CVTeleportError):
    """A heralding event has vanishing probability."""


class TruncationWarning(UserWarning):
    """A Fock-space evaluation ran outside its reliable window."""
