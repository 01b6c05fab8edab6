"""Exception types raised across the package."""


class PathCompleteError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(PathCompleteError, ValueError):
    pass


class AsymmetricMatrixError(PathCompleteError, ValueError):
    pass


class InvalidWordError(PathCompleteError, ValueError):
    pass


class GraphError(PathCompleteError, ValueError):
    pass


class NegativeEntryError(PathCompleteError, ValueError):
    pass


class ResourceLimitError(PathCompleteError, RuntimeError):
    """A search or enumeration would exceed its configured cap."""


class GraphIsPathCompleteError(PathCompleteError, ValueError):
    """Synthesis was requested for a graph that admits no counterexample."""


class CycleError(PathCompleteError, ValueError):
    """Raised by topological numbering; ``cycle`` lists the nodes of one cycle."""

    def __init__(self, message, cycle):
        super().__init__(message)
        self.cycle = list(cycle)


class SchemaError(PathCompleteError, ValueError):
    """Malformed input document."""
