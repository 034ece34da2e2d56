"""Exception and warning types shared across the package."""


class ValidationError(ValueError):
    """A parameter, vector length, or config field violates its contract."""


class DomainError(ValueError):
    """A closed-form expression was requested outside its validity domain."""


class SingularSystem(ArithmeticError):
    """The coupling matrix is singular or numerically indistinguishable from it.

    Raised at the excluded parameter points, e.g. reciprocal coupling with
    xi at 0 or pi and no non-guided decay, where the weak-drive steady state
    does not exist.
    """


class ZeroExcitation(ArithmeticError):
    """All steady-state amplitudes vanish, so populations cannot be normalized."""


class OverlappingSets(ValueError):
    """Interface and edge site sets intersect (array too small for RIEL)."""


class NearFieldWarning(UserWarning):
    """Interatomic phase below 0.1*pi: guided-mode-only model may be inaccurate."""
