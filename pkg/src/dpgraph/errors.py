"""Exception types shared across the library."""


class FormatError(ValueError):
    """A file does not match the expected binary or text layout."""


class GraphStructureError(ValueError):
    """A neighbor graph violates one of its structural invariants."""


class DegenerateGeometryError(ValueError):
    """An angle or direction is undefined because two points coincide."""
