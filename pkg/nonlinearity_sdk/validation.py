"""
Input validation for the nonlinearity SDK.

Validators for arities, masks, ranks, truth tables and the hex truth-table
file format. Validators raise the ValidationError subclasses from
``exceptions``; the ``is_valid_*`` helpers return booleans instead.
"""

import re
from typing import Optional, Sequence

import numpy as np

from .config import get_config
from .exceptions import (
    ArityError,
    RankOutOfRangeError,
    TruthTableFormatError,
    ValidationError,
    ZeroMaskError,
)

# =====================
# Arity Validation
# =====================


class ArityValidator:
    """
    Arity checks against the configured limits.
    """

    @classmethod
    def validate_boolean(cls, n: int) -> None:
        """
        Validate the arity of a conventional Boolean function.

        Raises:
            ArityError: If n is outside 1..max_boolean_arity
        """
        limit = get_config().limits.max_boolean_arity
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ArityError("n", n, limit)
        if not 1 <= n <= limit:
            raise ArityError("n", n, limit)

    @classmethod
    def validate_vectorial(cls, n: int, m: int) -> None:
        """
        Validate the arities of a vectorial Boolean function.

        Raises:
            ArityError: If m > n, n above the vectorial cap, or n + m above the column cap
        """
        limits = get_config().limits
        for name, value in (("n", n), ("m", m)):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ArityError(name, value, limits.max_vectorial_arity)
        if not 1 <= n <= limits.max_vectorial_arity:
            raise ArityError("n", n, limits.max_vectorial_arity)
        if not 1 <= m <= n:
            raise ArityError("m", m, n)
        if n + m > limits.max_vectorial_columns:
            raise ArityError("n+m", n + m, limits.max_vectorial_columns)


# =====================
# Mask Validation
# =====================


class MaskValidator:
    """
    Bit-mask checks.
    """

    @classmethod
    def validate(cls, mask: int, width: int, field: str = "mask", nonzero: bool = True):
        """
        Validate a mask of the given bit width.

        Raises:
            ZeroMaskError: If the mask is zero and nonzero is required
            ValidationError: If the mask does not fit the width
        """
        if not isinstance(mask, (int, np.integer)) or isinstance(mask, bool):
            raise ValidationError(
                f"{field} must be an integer", field=field, value=mask
            )
        if mask < 0 or mask >= (1 << width):
            raise ValidationError(
                f"{field}={mask} does not fit in {width} bits",
                field=field,
                value=mask,
                expected=f"0..{(1 << width) - 1}",
            )
        if nonzero and mask == 0:
            raise ZeroMaskError(field)


# =====================
# Rank Validation
# =====================


class RankValidator:
    """
    Rank bounds for linear maps.
    """

    @classmethod
    def validate(cls, r: int, high: int, low: int = 1) -> None:
        """
        Validate low <= r <= high.

        Raises:
            RankOutOfRangeError: If r is outside the interval
        """
        if not isinstance(r, (int, np.integer)) or isinstance(r, bool):
            raise RankOutOfRangeError(r, low, high)
        if not low <= r <= high:
            raise RankOutOfRangeError(r, low, high)


# =====================
# Truth Table Validation
# =====================


class TruthTableValidator:
    """
    Truth-table shape checks.
    """

    @classmethod
    def validate(cls, table: Sequence[int], n: int, m: int = 1) -> None:
        """
        Validate a truth table of 2^n entries, each below 2^m.

        Raises:
            TruthTableFormatError: If the length or an entry is wrong
        """
        size = 1 << n
        if len(table) != size:
            raise TruthTableFormatError(
                None, f"expected {size} entries for n={n}, got {len(table)}"
            )
        values = np.asarray(table)
        if values.size and (values.min() < 0 or values.max() >= (1 << m)):
            raise TruthTableFormatError(None, f"entries must be in 0..{(1 << m) - 1}")


class HexTableValidator:
    """
    Validation of the hex truth-table file format.

    Conventional functions are bit-packed (index 0 at the most significant
    bit of the first digit); vectorial functions use one or more digits per
    output value in index order.
    """

    HEX_PATTERN = re.compile(r"^[0-9A-Fa-f]+$")

    @classmethod
    def normalize(cls, text: str) -> str:
        """
        Strip whitespace and an optional 0x prefix, and check the digits.

        Raises:
            TruthTableFormatError: If the text is empty or contains non-hex characters
        """
        if not isinstance(text, str):
            raise TruthTableFormatError(text, "truth table must be a string")
        digits = "".join(text.split())
        if digits[:2].lower() == "0x":
            digits = digits[2:]
        if not digits:
            raise TruthTableFormatError(text, "truth table is empty")
        if not cls.HEX_PATTERN.match(digits):
            raise TruthTableFormatError(text, "truth table contains non-hex characters")
        return digits

    @classmethod
    def boolean_digits(cls, n: int) -> int:
        """Number of hex digits of a bit-packed conventional table."""
        return max(1, (1 << n) // 4)

    @classmethod
    def digits_per_entry(cls, m: int) -> int:
        """Number of hex digits per output value of a vectorial table."""
        return (m + 3) // 4

    @classmethod
    def infer_boolean_arity(cls, digits: str) -> int:
        """
        Infer n from the digit count of a bit-packed table.

        Raises:
            TruthTableFormatError: If the digit count is not 4^k-compatible
        """
        bits = len(digits) * 4
        if bits & (bits - 1):
            raise TruthTableFormatError(
                digits, f"{len(digits)} digits is not a power-of-two bit count"
            )
        return bits.bit_length() - 1

    @classmethod
    def infer_vectorial_arity(cls, digits: str, m: int) -> int:
        """
        Infer n from the digit count of a vectorial table.

        Raises:
            TruthTableFormatError: If the entry count is not a power of two
        """
        per_entry = cls.digits_per_entry(m)
        if len(digits) % per_entry:
            raise TruthTableFormatError(
                digits, f"digit count is not a multiple of {per_entry}"
            )
        entries = len(digits) // per_entry
        if entries & (entries - 1):
            raise TruthTableFormatError(
                digits, f"{entries} entries is not a power of two"
            )
        return entries.bit_length() - 1


# =====================
# Convenience Functions
# =====================


def is_valid_arity(n: int, m: Optional[int] = None) -> bool:
    """Check an arity (or arity pair) without raising."""
    try:
        if m is None:
            ArityValidator.validate_boolean(n)
        else:
            ArityValidator.validate_vectorial(n, m)
        return True
    except ValidationError:
        return False


def is_valid_mask(mask: int, width: int) -> bool:
    """Check that a mask is nonzero and fits the width."""
    try:
        MaskValidator.validate(mask, width)
        return True
    except ValidationError:
        return False


def is_valid_rank(r: int, high: int) -> bool:
    """Check 1 <= r <= high."""
    try:
        RankValidator.validate(r, high)
        return True
    except ValidationError:
        return False
