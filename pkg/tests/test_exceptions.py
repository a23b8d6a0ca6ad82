"""
Tests for the exception hierarchy.
"""

import pytest

from nonlinearity_sdk.exceptions import (
    AnalysisError,
    AnfParseError,
    ArityError,
    ColumnMismatchError,
    ConfigurationError,
    DegreeMismatchError,
    DenominatorMismatchError,
    EmptySupportError,
    FieldError,
    IncompleteCoverError,
    NonlinearityError,
    ParameterMismatchError,
    RankOutOfRangeError,
    ReducibleModulusError,
    SearchError,
    SingularMatrixError,
    SpaceTooLargeError,
    TruthTableFormatError,
    ValidationError,
    ZeroMaskError,
    format_error_for_logging,
)


class TestHierarchy:
    """Every SDK error derives from NonlinearityError through its family."""

    @pytest.mark.parametrize(
        "error,family",
        [
            (AnfParseError("x1 +"), ValidationError),
            (TruthTableFormatError("zz"), ValidationError),
            (ZeroMaskError("b"), ValidationError),
            (RankOutOfRangeError(9, 1, 5), ValidationError),
            (ColumnMismatchError(5, 4), ValidationError),
            (SingularMatrixError(3, 4), ValidationError),
            (ArityError("n", 30, 24), ValidationError),
            (ReducibleModulusError(0x15, 0x7), FieldError),
            (DegreeMismatchError(0x0B, 4), FieldError),
            (EmptySupportError(), AnalysisError),
            (DenominatorMismatchError(16, 8), AnalysisError),
            (ParameterMismatchError((4, 1, 1), (4, 1, 2)), AnalysisError),
            (IncompleteCoverError(155, 100), AnalysisError),
            (SpaceTooLargeError(32, 20), SearchError),
            (ConfigurationError("bad"), NonlinearityError),
        ],
    )
    def test_family(self, error, family):
        assert isinstance(error, family)
        assert isinstance(error, NonlinearityError)
        assert error.error_code


class TestErrorDetails:
    """Test messages and structured details."""

    def test_str_includes_code(self):
        assert str(ZeroMaskError("b")) == "[ZERO_MASK] b must be a nonzero mask"

    def test_rank_details(self):
        error = RankOutOfRangeError(9, 1, 5)
        assert error.details["field"] == "r"
        assert error.details["expected"] == "1..5"

    def test_field_details(self):
        error = DegreeMismatchError(0x0B, 4)
        assert error.details == {"modulus": 0x0B, "k": 4, "degree": 3}
        assert "0x15" in str(ReducibleModulusError(0x15, 0x7))

    def test_space_guidance(self):
        error = SpaceTooLargeError(32, 20, "use a filtered scope")
        assert error.bits == 32
        assert str(error).endswith("use a filtered scope")

    def test_to_dict(self):
        data = IncompleteCoverError(155, 100).to_dict()
        assert data["error_type"] == "IncompleteCoverError"
        assert data["error_code"] == "INCOMPLETE_COVER"
        assert data["details"] == {"expected": 155, "covered": 100}


class TestFormatErrorForLogging:
    """Test log formatting of errors."""

    def test_sdk_error(self):
        data = format_error_for_logging(EmptySupportError())
        assert data["error_code"] == "EMPTY_SUPPORT"

    def test_foreign_error(self):
        assert format_error_for_logging(KeyError("k")) == {"error_type": "KeyError", "message": "'k'"}
