"""
Error types
Every failure raised by the toolkit derives from EspDesignsError
"""


class EspDesignsError(Exception):
    """Base class for toolkit errors."""


class FieldConstructionError(EspDesignsError):
    """Reduction polynomial rejected or unsupported extension degree."""


class FieldDivisionError(EspDesignsError, ZeroDivisionError):
    """Division by (or inversion of) the zero element."""


class PreconditionError(EspDesignsError, ValueError):
    """Input violates an operation's precondition.

    Args:
        message: Human readable description
        witness: Optional object that demonstrates the violation
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedFamilyError(EspDesignsError, ValueError):
    """Block-set family or (k, l) pair the toolkit does not generate."""


class ConsistencyError(EspDesignsError):
    """Two computation paths disagree or a proven bound is violated."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BlockFileError(EspDesignsError):
    """Malformed block-set JSON file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(EspDesignsError):
    """Invalid configuration value."""
