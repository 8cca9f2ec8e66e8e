"""Exception types raised across the package."""


class GasketError(Exception):
    """Base class for errors raised by kochgasket."""


class ParameterError(GasketError, ValueError):
    """An argument is outside its valid range."""


class DegenerateGeometryError(GasketError, ValueError):
    """A polygon collapses (zero area, repeated vertices)."""


class ResourceError(GasketError, RuntimeError):
    """A requested depth exceeds the configured resource cap."""


class InvariantError(GasketError, AssertionError):
    """An internal consistency check failed."""
