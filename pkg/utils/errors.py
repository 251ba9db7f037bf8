"""
Error types for frobmod.

Every error carries a stable string code so that scripts driving the CLI can
tell failures apart without parsing messages. Operational errors exit with 1;
negative mathematical findings are not errors and never pass through here.
"""

from typing import Optional


class FrobModError(Exception):
    """Base class for all library errors."""

    code = "E_FROBMOD"
    exit_code = 1

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message}


class DescriptorMismatch(FrobModError):
    code = "E_DESCRIPTOR_MISMATCH"


class DivisionByZero(FrobModError, ZeroDivisionError):
    code = "E_DIVISION_BY_ZERO"


class NotDivisible(FrobModError, ArithmeticError):
    """Exact division in a ring where the quotient does not exist."""
    code = "E_NOT_DIVISIBLE"


class UnsupportedRing(FrobModError):
    code = "E_UNSUPPORTED_RING"


class DimensionMismatch(FrobModError):
    code = "E_DIMENSION_MISMATCH"


class SingularBasisChange(FrobModError):
    code = "E_SINGULAR_BASIS_CHANGE"


class NoCanonicalEmbedding(FrobModError):
    code = "E_NO_CANONICAL_EMBEDDING"


class NotUnit(FrobModError):
    code = "E_NOT_UNIT"


class EnumerationCapExceeded(FrobModError):
    code = "E_ENUMERATION_CAP"


class WitnessBoundExceeded(FrobModError):
    code = "E_WITNESS_BOUND"


class BoundExceeded(FrobModError):
    code = "E_BOUND_EXCEEDED"


class PowerBoundExceeded(FrobModError):
    code = "E_POWER_BOUND"


class DegreeGuardExceeded(FrobModError):
    code = "E_DEGREE_GUARD"


class RootCheckFailed(FrobModError):
    code = "E_ROOT_CHECK"


class ValidationError(FrobModError, ValueError):
    code = "E_VALIDATION"


class ParseError(FrobModError, ValueError):
    """Malformed input; line and column are 1-based when known."""

    code = "E_PARSE"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})" if column is not None else f" (line {line})"
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["line"] = self.line
        data["column"] = self.column
        return data
