"""Exception hierarchy shared by all modules."""


class NCError(Exception):
    """Base class for every error raised by this package."""


class DomainError(NCError, ValueError):
    """An argument lies outside the domain of an operation."""


class SizeLimitError(NCError, ValueError):
    """A requested size exceeds the configured enumeration ceiling."""


class OrderError(NCError, ValueError):
    """A series or characteristic sequence is too short for the request."""


class SolverError(NCError, ArithmeticError):
    """A series equation has no solution at the requested order."""


class MissingDataError(NCError, KeyError):
    """A moment or cumulant value needed by a transform is absent."""
