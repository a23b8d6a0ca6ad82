"""
Custom exception hierarchy for the nonlinearity SDK.

This module provides the exception classes raised while parsing functions,
building fields, enumerating subspaces, analyzing induced distributions and
searching function spaces.
"""


class NonlinearityError(Exception):
    """
    Base exception class for all nonlinearity SDK errors.

    Attributes:
        message (str): Human-readable error message
        error_code (str): Optional error code for programmatic handling
        details (dict): Optional additional error details
    """

    def __init__(self, message, error_code=None, details=None):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message

    def to_dict(self):
        """Convert exception to dictionary representation."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "error_code": self.error_code,
            "details": self.details,
        }


# =====================
# Validation Errors
# =====================


class ValidationError(NonlinearityError):
    """
    Raised when input validation fails.

    Used for malformed truth tables, masks, ranks, arities, etc.
    """

    def __init__(self, message, field=None, value=None, expected=None):
        super().__init__(message, error_code="VALIDATION_ERROR")
        self.details.update({"field": field, "value": value, "expected": expected})


class AnfParseError(ValidationError):
    """Raised when an algebraic normal form string cannot be parsed."""

    def __init__(self, text, reason=None):
        message = f"Invalid ANF expression: {text!r}"
        if reason:
            message += f" ({reason})"
        super().__init__(message, field="anf", value=text)
        self.error_code = "ANF_PARSE_ERROR"
        self.reason = reason


class TruthTableFormatError(ValidationError):
    """Raised when a hex truth table does not match the expected layout."""

    def __init__(self, text, reason=None):
        message = "Invalid truth table"
        if reason:
            message += f": {reason}"
        super().__init__(message, field="truth_table", value=text)
        self.error_code = "TRUTH_TABLE_FORMAT_ERROR"
        self.reason = reason


class ZeroMaskError(ValidationError):
    """Raised when a mask that must be nonzero is zero."""

    def __init__(self, field="mask"):
        super().__init__(f"{field} must be a nonzero mask", field=field, value=0)
        self.error_code = "ZERO_MASK"


class RankOutOfRangeError(ValidationError):
    """Raised when a requested rank lies outside the admissible interval."""

    def __init__(self, r, low, high):
        super().__init__(
            f"Rank r={r} out of range [{low}, {high}]",
            field="r",
            value=r,
            expected=f"{low}..{high}",
        )
        self.error_code = "RANK_OUT_OF_RANGE"
        self.low = low
        self.high = high


class ColumnMismatchError(ValidationError):
    """Raised when a linear map has the wrong number of columns for a function."""

    def __init__(self, expected, actual):
        super().__init__(
            f"Linear map has {actual} columns, expected {expected}",
            field="ncols",
            value=actual,
            expected=expected,
        )
        self.error_code = "COLUMN_MISMATCH"


class SingularMatrixError(ValidationError):
    """Raised when an affine change of variables uses a singular matrix."""

    def __init__(self, rank, size):
        super().__init__(
            f"Matrix is singular over GF(2): rank {rank} < {size}",
            field="matrix",
            value=rank,
            expected=size,
        )
        self.error_code = "SINGULAR_MATRIX"


class ArityError(ValidationError):
    """Raised when an arity is outside the configured limits."""

    def __init__(self, field, value, limit):
        super().__init__(
            f"{field}={value} outside supported range (limit {limit})",
            field=field,
            value=value,
            expected=limit,
        )
        self.error_code = "ARITY_ERROR"


# =====================
# Field Errors
# =====================


class FieldError(NonlinearityError):
    """
    Base class for finite-field construction errors.
    """

    def __init__(self, message, modulus=None):
        super().__init__(message, error_code="FIELD_ERROR")
        self.modulus = modulus
        self.details["modulus"] = modulus


class ReducibleModulusError(FieldError):
    """Raised when the field modulus has a nontrivial factor."""

    def __init__(self, modulus, factor=None):
        message = f"Modulus {modulus:#x} is reducible over GF(2)"
        if factor is not None:
            message += f" (divisible by {factor:#x})"
        super().__init__(message, modulus)
        self.error_code = "REDUCIBLE_MODULUS"
        self.factor = factor
        self.details["factor"] = factor


class DegreeMismatchError(FieldError):
    """Raised when the modulus degree differs from the requested field degree."""

    def __init__(self, modulus, k):
        degree = modulus.bit_length() - 1
        super().__init__(
            f"Modulus {modulus:#x} has degree {degree}, expected {k}", modulus
        )
        self.error_code = "DEGREE_MISMATCH"
        self.k = k
        self.details.update({"k": k, "degree": degree})


# =====================
# Analysis Errors
# =====================


class AnalysisError(NonlinearityError):
    """
    Base class for errors raised by the analysis engine.
    """

    def __init__(self, message):
        super().__init__(message, error_code="ANALYSIS_ERROR")


class EmptySupportError(AnalysisError):
    """Raised when a conventional analysis is requested for the constant-zero function."""

    def __init__(self):
        super().__init__(
            "Function has weight 0; the support distribution is undefined"
        )
        self.error_code = "EMPTY_SUPPORT"


class DenominatorMismatchError(AnalysisError):
    """Raised when distribution classes with different denominators are compared."""

    def __init__(self, left, right):
        super().__init__(f"Cannot compare classes with denominators {left} and {right}")
        self.error_code = "DENOMINATOR_MISMATCH"
        self.details.update({"left": left, "right": right})


class ParameterMismatchError(AnalysisError):
    """Raised when function classes from different (n, m, r) are compared."""

    def __init__(self, left, right):
        super().__init__(f"Cannot compare classes with parameters {left} and {right}")
        self.error_code = "PARAMETER_MISMATCH"
        self.details.update({"left": left, "right": right})


class IncompleteCoverError(AnalysisError):
    """Raised when partial censuses do not cover the subspace index space exactly once."""

    def __init__(self, expected, covered):
        super().__init__(
            f"Partial censuses cover {covered} of {expected} subspaces exactly once"
        )
        self.error_code = "INCOMPLETE_COVER"
        self.details.update({"expected": expected, "covered": covered})


# =====================
# Search Errors
# =====================


class SearchError(NonlinearityError):
    """
    Base class for function-space search errors.
    """

    def __init__(self, message):
        super().__init__(message, error_code="SEARCH_ERROR")


class SpaceTooLargeError(SearchError):
    """Raised when a full enumeration would exceed the configured search cap."""

    def __init__(self, bits, limit, guidance=None):
        message = f"Function space has 2^{bits} members, above the 2^{limit} cap"
        if guidance:
            message += f"; {guidance}"
        super().__init__(message)
        self.error_code = "SPACE_TOO_LARGE"
        self.bits = bits
        self.limit = limit
        self.details.update({"bits": bits, "limit": limit, "guidance": guidance})


# =====================
# Configuration Errors
# =====================


class ConfigurationError(NonlinearityError):
    """
    Base class for configuration-related errors.
    """

    def __init__(self, message, config_key=None, config_value=None):
        super().__init__(message, error_code="CONFIGURATION_ERROR")
        self.config_key = config_key
        self.config_value = config_value
        self.details.update({"config_key": config_key, "config_value": config_value})


# =====================
# Utility Functions
# =====================


def format_error_for_logging(error):
    """
    Format NonlinearityError for structured logging.

    Args:
        error: NonlinearityError instance

    Returns:
        dict: Formatted error information for logging
    """
    if isinstance(error, NonlinearityError):
        return {
            "error_type": error.__class__.__name__,
            "error_code": error.error_code,
            "message": error.message,
            "details": error.details,
        }
    else:
        return {"error_type": error.__class__.__name__, "message": str(error)}
