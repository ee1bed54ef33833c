"""Exception taxonomy shared across the package."""


class HarmlensError(Exception):
    pass


class InvalidMeasureError(HarmlensError, ValueError):
    """Atom list violates the measure contract (empty, negative weight, zero mass)."""


class DomainError(HarmlensError, ValueError):
    """Argument lies outside the domain a routine is defined on."""


class PoleError(DomainError):
    """Evaluation point inside the guard radius of a pole."""


class BranchError(DomainError):
    """Evaluation point on a branch cut."""


class DivisionError(HarmlensError, ArithmeticError):
    """Series division by a series with (near) vanishing constant term."""


class DegenerateError(HarmlensError, ValueError):
    """Geometric check fed degenerate data (zero on the probe circle, non-simple curve)."""


class AccuracyError(HarmlensError, RuntimeError):
    """Requested accuracy not reached; carries the achieved estimates."""

    def __init__(self, message, estimates=None, bad_points=None):
        super().__init__(message)
        self.estimates = estimates
        self.bad_points = bad_points


class SearchFailureError(HarmlensError, RuntimeError):
    """A search asked for more witnesses than it could find; carries what was found."""

    def __init__(self, message, found=None):
        super().__init__(message)
        self.found = found if found is not None else []


class FalsificationError(HarmlensError, RuntimeError):
    """A numerically checked identity failed far beyond tolerance.

    Raised instead of returning garbage: it means either a bug upstream or a
    genuine contradiction with the theory this package implements.
    """
