"""Exception hierarchy shared by all modules."""


class PhaseConjError(Exception):
    pass


class InvalidParameter(PhaseConjError, ValueError):
    """A parameter violates a type invariant."""

    def __init__(self, field, message=""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class RegimeUnavailable(PhaseConjError):
    """Phase-conjugation design needs |Omega1 - Omega2| > kappa."""


class DegenerateProduct(PhaseConjError):
    pass


class SingularPoint(PhaseConjError, ZeroDivisionError):
    def __init__(self, where, message=""):
        self.where = where
        super().__init__(message or f"singular point at {where}")


class GridMiss(PhaseConjError, LookupError):
    pass


class StepTooLarge(PhaseConjError):
    pass


class NonPSDDiffusion(PhaseConjError):
    pass


class WindowTooShort(PhaseConjError):
    pass


class PlanMismatch(PhaseConjError):
    pass


class Undefined(PhaseConjError):
    pass
