"""Exception hierarchy shared by every module."""


class GBXIIError(Exception):
    """Base class for errors raised by this package."""


class DomainError(GBXIIError, ValueError):
    """An argument lies outside the domain of the operation."""


class MomentExistenceError(DomainError):
    """A requested moment is infinite.

    ``condition`` holds the violated existence condition, e.g. ``"m > n/p"``.
    """

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class IdentifiabilityError(DomainError):
    """The free-parameter mask spans a flat direction of the likelihood."""


class DegenerateDataError(DomainError):
    """Data carry no spread (all points equal)."""


class ConvergenceError(GBXIIError, RuntimeError):
    """An iterative numerical routine exhausted its budget."""
