"""
Error types shared across the toolkit.

Every error carries the exit code the CLI reports for it.
"""
from typing import Optional


class QadcError(Exception):
    """Base class for toolkit errors"""
    exit_code = 1


class DimensionMismatchError(QadcError):
    """Operands disagree on alphabet size or length"""


class ConstructionError(QadcError):
    """A construction precondition or internal verification failed"""

    def __init__(self, message: str, check: Optional[str] = None):
        super().__init__(message if check is None else f"{message} (failed check: {check})")
        self.check = check


class RegistryLookupError(QadcError, KeyError):
    """No registered inner or outer code for the requested key"""
    exit_code = 2

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class CapacityError(QadcError):
    """Outer alphabet does not fit into the inner code"""


class ParameterRangeError(QadcError, ValueError):
    """Channel parameters outside the trace-preserving range"""
    exit_code = 2


class ResourceLimitError(QadcError):
    """An enumeration or search exceeded its configured cap"""
    exit_code = 3

    def __init__(self, message: str, estimate: Optional[int] = None):
        super().__init__(message if estimate is None else f"{message} (estimated count: {estimate})")
        self.estimate = estimate


class CodeFileError(QadcError):
    """Malformed code or config file"""
    exit_code = 2


class UsageError(QadcError, ValueError):
    """Command-line input that cannot be interpreted"""
    exit_code = 2
