"""Exception types raised by the solvers."""


class NematicFilmError(Exception):
    """Base class for all package errors."""


class DomainError(NematicFilmError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PositivityError(DomainError):
    """A profile value is not strictly positive."""


class ResolutionError(NematicFilmError, ValueError):
    """Too few samples for the requested discrete operation."""


class MismatchError(NematicFilmError, ValueError):
    """Two objects refer to incompatible problem instances."""


class PeriodicityError(NematicFilmError, ValueError):
    """A director field is not periodic in the azimuthal angle."""


class MissingSolutionError(NematicFilmError, LookupError):
    """A requested catenary root does not exist for this instance."""


class NoSolutionError(NematicFilmError, RuntimeError):
    """The shooting scan found no admissible apex.

    Attributes
    ----------
    scan : tuple of (apex, residual) pairs
        The coarse scan that failed to bracket a root.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = tuple(scan)
