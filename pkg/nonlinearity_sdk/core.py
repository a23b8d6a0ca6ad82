"""
Truth-table representations of conventional and vectorial Boolean functions.

Assignments (x_1, ..., x_n) are encoded as integers with x_1 as the most
significant bit; vectorial outputs (y_1, ..., y_m) likewise with y_1 most
significant. The stacked vector (x, y) is the (n+m)-bit mask ``(x << m) | y``.

This module also houses ANF parsing, the fast Walsh-Hadamard transform, the
GF(2^k) inversion S-box generator and the bent / perfect nonlinear predicates.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Union

import numpy as np

from .config import get_config
from .exceptions import (
    AnfParseError,
    ArityError,
    DegreeMismatchError,
    ReducibleModulusError,
    SingularMatrixError,
    TruthTableFormatError,
    ValidationError,
)
from .subspaces import canonicalize, rank_one_order
from .validation import (
    ArityValidator,
    HexTableValidator,
    MaskValidator,
    TruthTableValidator,
)

# =====================
# Bit Helpers
# =====================


def _parity_table(bits: int) -> np.ndarray:
    table = np.zeros(1, dtype=np.uint8)
    for _ in range(bits):
        table = np.concatenate([table, table ^ 1])
    return table


_PARITY16 = _parity_table(16)


def parity(values) -> np.ndarray:
    """
    Bitwise parity of nonnegative integers.

    Args:
        values: Integer array (or scalar) of values below 2^63

    Returns:
        uint8 array of 0/1 parities with the input's shape
    """
    v = np.asarray(values, dtype=np.int64)
    v = v ^ (v >> 32)
    v ^= v >> 16
    return _PARITY16[v & 0xFFFF]


def fwht(values) -> np.ndarray:
    """
    Fast Walsh-Hadamard transform along the last axis.

    The last axis must have length 2^k; leading axes are transformed
    independently. Uses k * 2^k additions and subtractions per row.

    Returns:
        New int64 array of the same shape
    """
    a = np.array(values, dtype=np.int64)
    lead = a.shape[:-1]
    size = a.shape[-1]
    h = 1
    while h < size:
        view = a.reshape(*lead, -1, 2, h)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] += hi
        view[..., 1, :] = lo - hi
        h <<= 1
    return a


def mobius_transform(values) -> np.ndarray:
    """
    Binary Moebius transform: ANF coefficients <-> truth table.

    Returns:
        New uint8 array with out[x] = XOR of values[u] over all u covered by x
    """
    a = np.array(values, dtype=np.uint8)
    size = a.shape[-1]
    h = 1
    while h < size:
        view = a.reshape(-1, 2, h)
        view[:, 1, :] ^= view[:, 0, :]
        h <<= 1
    return a


def _pack_entries(table: np.ndarray, m: int) -> int:
    """Pack a table into an integer, entry 0 most significant, m bits per entry."""
    shifts = np.arange(m - 1, -1, -1, dtype=np.int64)
    bits = ((table.astype(np.int64)[:, None] >> shifts) & 1).astype(np.uint8).ravel()
    pad = (-bits.size) % 8
    return int.from_bytes(np.packbits(bits).tobytes(), "big") >> pad


def _unpack_entries(value: int, size: int, m: int) -> np.ndarray:
    """Inverse of _pack_entries."""
    nbits = size * m
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise TruthTableFormatError(value, "table integer must be an int")
    value = int(value)
    if value < 0 or value >> nbits:
        raise TruthTableFormatError(value, f"table integer does not fit in {nbits} bits")
    nbytes = (nbits + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "big"), dtype=np.uint8)
    bits = np.unpackbits(raw)[-nbits:]
    weights = np.left_shift(1, np.arange(m - 1, -1, -1, dtype=np.int64))
    return bits.reshape(size, m).astype(np.int64) @ weights


def _arity_from_length(length: int) -> int:
    if length < 2 or length & (length - 1):
        raise TruthTableFormatError(None, f"table length {length} is not a power of two")
    return length.bit_length() - 1


# =====================
# Function Types
# =====================


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """
    Conventional Boolean function given by its truth table.

    Args:
        n: Input arity
        table: 2^n bits, table[i] = f(assignment i)
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        ArityValidator.validate_boolean(self.n)
        table = np.array(self.table, dtype=np.int64)
        TruthTableValidator.validate(table, self.n)
        table = table.astype(np.uint8)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return f"BooleanFunction(n={self.n}, hex={self.to_hex()!r})"

    @property
    def size(self) -> int:
        return 1 << self.n

    def weight(self) -> int:
        """Number of inputs where the function is 1."""
        return int(np.count_nonzero(self.table))

    def support(self) -> np.ndarray:
        """Assignments where the function is 1, ascending, int64."""
        return np.flatnonzero(self.table).astype(np.int64)

    def to_int(self) -> int:
        """Truth table as an integer, entry 0 most significant."""
        return _pack_entries(self.table, 1)

    def to_hex(self) -> str:
        """Bit-packed hex string, index 0 at the most significant bit."""
        digits = HexTableValidator.boolean_digits(self.n)
        return format(self.to_int(), f"0{digits}x")

    def as_vectorial(self) -> "VectorialFunction":
        """View as a vectorial function with m=1."""
        return VectorialFunction(self.n, 1, self.table)

    @classmethod
    def from_table(cls, table: Sequence[int]) -> "BooleanFunction":
        """Build from a truth table, inferring n from its length."""
        return cls(_arity_from_length(len(table)), table)

    @classmethod
    def from_int(cls, value: int, n: int) -> "BooleanFunction":
        """Inverse of to_int."""
        ArityValidator.validate_boolean(n)
        return cls(n, _unpack_entries(value, 1 << n, 1))

    @classmethod
    def from_hex(cls, text: str, n: Optional[int] = None) -> "BooleanFunction":
        """
        Parse the bit-packed hex truth-table format.

        Raises:
            TruthTableFormatError: If the digit count does not match n
        """
        digits = HexTableValidator.normalize(text)
        if n is None:
            n = HexTableValidator.infer_boolean_arity(digits)
        ArityValidator.validate_boolean(n)
        expected = HexTableValidator.boolean_digits(n)
        if len(digits) != expected:
            raise TruthTableFormatError(
                text, f"expected {expected} hex digits for n={n}, got {len(digits)}"
            )
        return cls.from_int(int(digits, 16), n)


@dataclass(frozen=True, eq=False)
class VectorialFunction:
    """
    Vectorial Boolean function (S-box) from n to m bits.

    Args:
        n: Input arity
        m: Output arity, at most n
        table: 2^n output values, each below 2^m
    """

    n: int
    m: int
    table: np.ndarray

    def __post_init__(self):
        ArityValidator.validate_vectorial(self.n, self.m)
        table = np.array(self.table, dtype=np.int64)
        TruthTableValidator.validate(table, self.n, self.m)
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, VectorialFunction):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.table.tobytes()))

    def __repr__(self):
        return f"VectorialFunction(n={self.n}, m={self.m}, hex={self.to_hex()!r})"

    @property
    def size(self) -> int:
        return 1 << self.n

    def graph_points(self) -> np.ndarray:
        """The 2^n stacked vectors (x, F(x)) as (n+m)-bit masks."""
        return (np.arange(self.size, dtype=np.int64) << self.m) | self.table

    def component(self, b: int) -> BooleanFunction:
        """Shortcut for component_function(self, b)."""
        return component_function(self, b)

    def coordinate(self, j: int) -> BooleanFunction:
        """Coordinate function y_j, 1-based."""
        if not 1 <= j <= self.m:
            raise ValidationError(
                f"coordinate index {j} out of range", field="j", value=j, expected=f"1..{self.m}"
            )
        return component_function(self, 1 << (self.m - j))

    def to_int(self) -> int:
        """Truth table as an integer, entry 0 most significant, m bits per entry."""
        return _pack_entries(self.table, self.m)

    def to_hex(self) -> str:
        """Hex string with ceil(m/4) digits per output value in index order."""
        per_entry = HexTableValidator.digits_per_entry(self.m)
        return "".join(format(int(v), f"0{per_entry}x") for v in self.table)

    @classmethod
    def from_table(cls, table: Sequence[int], m: int) -> "VectorialFunction":
        """Build from output values, inferring n from the length."""
        return cls(_arity_from_length(len(table)), m, table)

    @classmethod
    def from_int(cls, value: int, n: int, m: int) -> "VectorialFunction":
        """Inverse of to_int."""
        ArityValidator.validate_vectorial(n, m)
        return cls(n, m, _unpack_entries(value, 1 << n, m))

    @classmethod
    def from_hex(cls, text: str, m: int, n: Optional[int] = None) -> "VectorialFunction":
        """
        Parse the per-entry hex truth-table format.

        Raises:
            TruthTableFormatError: If the digit count or an entry is wrong
        """
        digits = HexTableValidator.normalize(text)
        per_entry = HexTableValidator.digits_per_entry(m)
        inferred = HexTableValidator.infer_vectorial_arity(digits, m)
        if n is not None and n != inferred:
            raise TruthTableFormatError(
                text, f"expected {(1 << n) * per_entry} hex digits for n={n}"
            )
        values = [
            int(digits[i : i + per_entry], 16) for i in range(0, len(digits), per_entry)
        ]
        return cls(inferred, m, values)


# =====================
# ANF
# =====================


@dataclass(frozen=True)
class AnfExpression:
    """
    Algebraic normal form: a set of monomials, each a set of variable indices.

    The empty monomial is the constant term 1.
    """

    n: int
    monomials: FrozenSet[FrozenSet[int]]

    def __post_init__(self):
        monomials = frozenset(frozenset(mono) for mono in self.monomials)
        for mono in monomials:
            for index in mono:
                if not 1 <= index <= self.n:
                    raise AnfParseError(str(sorted(mono)), f"x{index} out of range 1..{self.n}")
        object.__setattr__(self, "monomials", monomials)

    def __str__(self):
        if not self.monomials:
            return "0"
        ordered = sorted(self.monomials, key=lambda mono: (-len(mono), sorted(mono)))
        return " + ".join(
            "*".join(f"x{i}" for i in sorted(mono)) if mono else "1" for mono in ordered
        )


_VARIABLE = re.compile(r"x(\d+)")


def parse_anf(text: str, n: int) -> AnfExpression:
    """
    Parse a sum of products over x1..xn and the constant 1.

    Whitespace is ignored; duplicated monomials cancel over GF(2).

    Raises:
        AnfParseError: On empty input, an unknown token or an index out of range
    """
    if not isinstance(text, str):
        raise AnfParseError(text, "expression must be a string")
    compact = "".join(text.split())
    if not compact:
        raise AnfParseError(text, "empty input")

    monomials = set()
    for term in compact.split("+"):
        if not term:
            raise AnfParseError(text, "empty term")
        variables = set()
        for factor in term.split("*"):
            if factor == "1":
                continue
            match = _VARIABLE.fullmatch(factor)
            if not match:
                raise AnfParseError(text, f"unknown token {factor!r}")
            index = int(match.group(1))
            if not 1 <= index <= n:
                raise AnfParseError(text, f"x{index} out of range 1..{n}")
            variables.add(index)
        monomials ^= {frozenset(variables)}
    return AnfExpression(n, frozenset(monomials))


def anf_to_function(expression: AnfExpression) -> BooleanFunction:
    """Evaluate an ANF on all 2^n assignments."""
    n = expression.n
    coefficients = np.zeros(1 << n, dtype=np.uint8)
    for mono in expression.monomials:
        coefficients[sum(1 << (n - i) for i in mono)] ^= 1
    return BooleanFunction(n, mobius_transform(coefficients))


# =====================
# Walsh-Hadamard Spectrum
# =====================


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """
    W_a = 2^-n * sum_x (-1)^(f(x) + a.x), kept as integer numerators.

    Args:
        n: Arity
        numerators: S_a = 2^n * W_a for every mask a
    """

    n: int
    numerators: np.ndarray

    @property
    def denominator(self) -> int:
        return 1 << self.n

    def __getitem__(self, a: int) -> Fraction:
        return Fraction(int(self.numerators[a]), self.denominator)

    def __len__(self):
        return self.numerators.size

    @property
    def values(self) -> List[Fraction]:
        return [Fraction(int(s), self.denominator) for s in self.numerators]

    def max_abs(self, nonzero_only: bool = False) -> Fraction:
        """Largest |W_a|, optionally over a != 0 only."""
        numerators = self.numerators[1:] if nonzero_only else self.numerators
        return Fraction(int(np.max(np.abs(numerators))), self.denominator)

    def parseval_sum(self) -> Fraction:
        """Sum of W_a^2; always exactly 1."""
        total = sum(int(s) * int(s) for s in self.numerators)
        return Fraction(total, self.denominator * self.denominator)

    def to_fractions(self) -> List[str]:
        """Values as "numerator/denominator" strings over 2^n."""
        return [f"{int(s)}/{self.denominator}" for s in self.numerators]


def walsh_spectrum(f: BooleanFunction) -> WalshSpectrum:
    """Walsh-Hadamard spectrum of f by the fast butterfly transform."""
    signs = 1 - 2 * f.table.astype(np.int64)
    numerators = fwht(signs)
    numerators.flags.writeable = False
    return WalshSpectrum(f.n, numerators)


def graph_walsh_spectrum(F: VectorialFunction) -> np.ndarray:
    """
    Integer spectrum sum_x (-1)^(a.x + b.F(x)) for every pair of masks.

    Computed by one transform of the graph indicator over 2^(n+m) points.

    Returns:
        int64 array of shape (2^n, 2^m) indexed [a, b]
    """
    indicator = np.zeros(1 << (F.n + F.m), dtype=np.int64)
    indicator[F.graph_points()] = 1
    return fwht(indicator).reshape(1 << F.n, 1 << F.m)


def classical_nonlinearity(f: BooleanFunction) -> int:
    """Minimum Hamming distance from f to the affine functions."""
    spectrum = walsh_spectrum(f)
    return (1 << (f.n - 1)) - int(np.max(np.abs(spectrum.numerators))) // 2


def correlation_probability(f: BooleanFunction, a: int) -> Fraction:
    """
    Exact fraction of inputs x with a.x = f(x).

    Raises:
        ZeroMaskError: If a is zero
    """
    MaskValidator.validate(a, f.n, field="a")
    xs = np.arange(f.size, dtype=np.int64)
    agree = int(np.count_nonzero(parity(xs & a) == f.table))
    return Fraction(agree, f.size)


def component_function(F: VectorialFunction, b: int) -> BooleanFunction:
    """
    The component b.F(x).

    Raises:
        ZeroMaskError: If b is zero
    """
    MaskValidator.validate(b, F.m, field="b")
    return BooleanFunction(F.n, parity(F.table & b))


def is_balanced(f: Union[BooleanFunction, VectorialFunction]) -> bool:
    """Every output value is taken equally often."""
    if isinstance(f, VectorialFunction):
        counts = np.bincount(f.table, minlength=1 << f.m)
        return bool(np.all(counts == counts[0]))
    return 2 * f.weight() == f.size


def is_bent(f: BooleanFunction) -> bool:
    """True iff n is even and every |W_a| equals 2^(-n/2)."""
    if f.n % 2:
        return False
    magnitude = 1 << (f.n // 2)
    return bool(np.all(np.abs(walsh_spectrum(f).numerators) == magnitude))


def is_perfect_nonlinear(F: VectorialFunction) -> bool:
    """True iff every nonzero component b.F is bent."""
    if F.n % 2:
        return False
    magnitude = 1 << (F.n // 2)
    spectrum = graph_walsh_spectrum(F)
    return bool(np.all(np.abs(spectrum[:, 1:]) == magnitude))


@dataclass(frozen=True)
class LinearApproximation:
    """
    Best rank-1 linear approximation.

    For conventional functions (m=0) the mask is a and the approximation is
    a.x = f(x); for vectorial functions the mask is (a << m) | b and the
    approximation is a.x = b.F(x).
    """

    mask: int
    n: int
    m: int
    correlation: Fraction

    @property
    def input_mask(self) -> int:
        return self.mask >> self.m

    @property
    def output_mask(self) -> int:
        return self.mask & ((1 << self.m) - 1)

    @property
    def probability(self) -> Fraction:
        """Probability that the approximation holds."""
        return (1 + self.correlation) / 2


def best_linear_approximation(
    function: Union[BooleanFunction, VectorialFunction]
) -> LinearApproximation:
    """
    The nonzero mask with the largest |correlation|.

    Ties go to the first mask in the canonical rank-1 enumeration order.
    """
    if isinstance(function, BooleanFunction):
        n, m = function.n, 0
        spectrum = walsh_spectrum(function).numerators
    else:
        n, m = function.n, function.m
        spectrum = graph_walsh_spectrum(function).ravel()
    order = rank_one_order(n + m)
    best = int(order[np.argmax(np.abs(spectrum[order]))])
    return LinearApproximation(best, n, m, Fraction(int(spectrum[best]), 1 << n))


# =====================
# Affine Change of Variables
# =====================


def _matrix_rows(matrix, n: int) -> List[int]:
    """Normalize an n x n bit matrix (row masks or 0/1 array) to row masks."""
    if isinstance(matrix, np.ndarray) and matrix.ndim == 2:
        if matrix.shape != (n, n):
            raise ValidationError(
                f"matrix must be {n}x{n}", field="matrix", value=matrix.shape
            )
        weights = np.left_shift(1, np.arange(n - 1, -1, -1, dtype=np.int64))
        return [int(v) for v in (matrix.astype(np.int64) & 1) @ weights]
    rows = [int(row) for row in matrix]
    if len(rows) != n:
        raise ValidationError(f"matrix must have {n} rows", field="matrix", value=len(rows))
    for row in rows:
        MaskValidator.validate(row, n, field="matrix", nonzero=False)
    return rows


def apply_affine_change(f: BooleanFunction, A, b: int = 0) -> BooleanFunction:
    """
    g(x) = f(Ax + b).

    Args:
        f: Function to transform
        A: Invertible n x n matrix over GF(2), as row masks or a 0/1 array
        b: Translation mask

    Raises:
        SingularMatrixError: If A is not invertible
    """
    rows = _matrix_rows(A, f.n)
    rank = canonicalize(rows, f.n).rank
    if rank < f.n:
        raise SingularMatrixError(rank, f.n)
    MaskValidator.validate(b, f.n, field="b", nonzero=False)

    xs = np.arange(f.size, dtype=np.int64)
    image = np.zeros_like(xs)
    for i, row in enumerate(rows):
        image |= parity(xs & row).astype(np.int64) << (f.n - 1 - i)
    return BooleanFunction(f.n, f.table[image ^ b])


# =====================
# GF(2^k) Inversion S-box
# =====================


def _poly_mod(a: int, b: int) -> int:
    degree = b.bit_length() - 1
    while a and a.bit_length() - 1 >= degree:
        a ^= b << (a.bit_length() - 1 - degree)
    return a


def smallest_factor(modulus: int) -> Optional[int]:
    """Smallest nontrivial divisor of a GF(2) polynomial by trial division."""
    degree = modulus.bit_length() - 1
    for d in range(1, degree // 2 + 1):
        for candidate in range(1 << d, 1 << (d + 1)):
            if _poly_mod(modulus, candidate) == 0:
                return candidate
    return None


def is_irreducible(modulus: int) -> bool:
    """Irreducibility over GF(2) of a polynomial given as a bit mask."""
    return modulus >= 2 and smallest_factor(modulus) is None


def gf_multiply(a: int, b: int, modulus: int, k: int) -> int:
    """Product in GF(2)[x]/(modulus) of two elements below 2^k."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if (a >> k) & 1:
            a ^= modulus
    return result


def _gf_power(a: int, exponent: int, modulus: int, k: int) -> int:
    result = 1
    while exponent:
        if exponent & 1:
            result = gf_multiply(result, a, modulus, k)
        a = gf_multiply(a, a, modulus, k)
        exponent >>= 1
    return result


def gf_inverse_sbox(k: int, modulus: int) -> VectorialFunction:
    """
    The inversion S-box x -> x^-1 of GF(2^k), with 0 -> 0.

    Args:
        k: Field degree
        modulus: Field polynomial with the degree-k bit set (0x13 = x^4+x+1)

    Raises:
        ArityError: If k exceeds the configured S-box degree
        DegreeMismatchError: If the modulus does not have degree k
        ReducibleModulusError: If the modulus factors over GF(2)
    """
    limit = get_config().limits.max_sbox_degree
    if not isinstance(k, int) or not 1 <= k <= limit:
        raise ArityError("k", k, limit)
    if not isinstance(modulus, int) or modulus.bit_length() - 1 != k:
        raise DegreeMismatchError(int(modulus), k)
    factor = smallest_factor(modulus)
    if factor is not None:
        raise ReducibleModulusError(modulus, factor)

    exponent = (1 << k) - 2
    table = [0] + [_gf_power(i, exponent, modulus, k) for i in range(1, 1 << k)]
    return VectorialFunction(k, k, table)