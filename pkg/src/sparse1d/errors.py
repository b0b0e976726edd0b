"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operand dimensions are incompatible with the requested operation."""


class ConfigError(ValueError):
    """Invalid process count, block count, strategy or distribution."""


class InternalError(RuntimeError):
    """An internal invariant was violated (indicates a bug, not bad input)."""


class ParseError(ValueError):
    """Malformed input file. ``lineno`` is 1-based, or None for EOF errors."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
