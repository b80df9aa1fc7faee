"""Exception hierarchy shared by the analytic and simulation engines."""


class UnderlayError(Exception):
    """Base class for all toolkit errors."""


class ScenarioError(UnderlayError, ValueError):
    """A scenario document failed to parse or violates a parameter invariant."""


class NumericalError(UnderlayError, ArithmeticError):
    """A numerical kernel did not converge or produced a non-finite result.

    Attributes:
        diagnostics: Free-form details (terms used, step sizes, error estimates)
    """

    def __init__(self, message: str, **diagnostics: object):
        super().__init__(message)
        self.diagnostics = diagnostics


class AcceptanceError(UnderlayError):
    """An analytic-vs-simulation comparison fell outside the acceptance band."""


class InsufficientRecordsError(UnderlayError, ValueError):
    """Too few Monte Carlo records for a statistically meaningful estimate."""
