"""Exception types shared across the package.

File-system problems (missing or unreadable files) are reported with the
builtin ``OSError`` family; everything else gets a dedicated class so callers
can tell malformed data, bad geometry, and numerical breakdown apart.
"""


class FormatError(ValueError):
    """Image file is not a supported 8-bit grayscale PGM/PNG."""


class DomainError(ValueError):
    """Input data violates a mathematical precondition (e.g. negative pixels)."""


class ShapeError(ValueError):
    """Operands have incompatible grid dimensions."""


class NumericalError(ArithmeticError):
    """A computation produced or received non-finite values."""
