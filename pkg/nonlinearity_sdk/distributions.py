"""
Induced distributions and their exact class keys.

A rank-r map U pushes the uniform distribution on the support of f (or on the
graph of F) forward to a distribution q on r-bit outcomes. q is held as
integer counts over a common denominator D, and classes of distributions are
identified by the exact key (N, prod c^c) instead of floating-point entropy.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .core import BooleanFunction, VectorialFunction, parity
from .exceptions import (
    ColumnMismatchError,
    DenominatorMismatchError,
    EmptySupportError,
    ValidationError,
)
from .subspaces import LinearMap

ClassKey = Tuple[int, int]


# =====================
# Distribution Types
# =====================


@dataclass(frozen=True)
class InducedDistribution:
    """
    Exact distribution q_z = counts[z] / denominator over r-bit outcomes z.
    """

    r: int
    counts: Tuple[int, ...]
    denominator: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 1 << self.r:
            raise ValidationError(
                f"expected {1 << self.r} counts for r={self.r}",
                field="counts",
                value=len(counts),
            )
        if any(c < 0 for c in counts) or sum(counts) != self.denominator:
            raise ValidationError(
                "counts must be nonnegative and sum to the denominator",
                field="counts",
                value=counts,
                expected=self.denominator,
            )
        object.__setattr__(self, "counts", counts)

    @property
    def zero_count(self) -> int:
        return sum(1 for c in self.counts if c == 0)

    @property
    def entropy_key(self) -> int:
        return entropy_key(self.counts)

    @property
    def probabilities(self) -> List[Fraction]:
        return [Fraction(c, self.denominator) for c in self.counts]

    @property
    def bias(self) -> Fraction:
        """q_0 - q_1 for r = 1."""
        if self.r != 1:
            raise ValidationError("bias is defined for r=1 only", field="r", value=self.r)
        return Fraction(self.counts[0] - self.counts[1], self.denominator)

    def to_json(self) -> List[str]:
        """Outcome-ordered "numerator/denominator" strings over the common denominator."""
        return [f"{c}/{self.denominator}" for c in self.counts]


@dataclass(frozen=True)
class DistributionClass:
    """
    Induced distributions sharing (N, entropy key) at a fixed analysis.

    The representative is the member with the smallest canonical index.
    """

    zero_count: int
    entropy_key: int
    size: int
    representative: InducedDistribution
    representative_map: LinearMap
    representative_index: int

    @property
    def denominator(self) -> int:
        return self.representative.denominator

    @property
    def entropy_bits(self) -> float:
        return support_entropy(self.representative)

    @property
    def order_key(self) -> ClassKey:
        return (self.zero_count, self.entropy_key)

    def to_dict(self, decimals: int = 5) -> dict:
        return {
            "N": self.zero_count,
            "H": round(self.entropy_bits, decimals),
            "size": self.size,
            "counts": list(self.representative.counts),
        }


# =====================
# Entropy and Keys
# =====================


@lru_cache(maxsize=65536)
def _product_key(nonzero: Tuple[int, ...]) -> int:
    return math.prod(c**c for c in nonzero)


def entropy_key(counts: Sequence[int]) -> int:
    """prod over nonzero counts of c^c; larger key means smaller support entropy."""
    return _product_key(tuple(sorted(int(c) for c in counts if c > 0)))


def support_entropy(distribution: InducedDistribution) -> float:
    """Base-2 entropy of q on its support."""
    total = distribution.denominator
    return 0.0 - math.fsum(
        (c / total) * math.log2(c / total) for c in distribution.counts if c > 0
    )


def class_key(distribution: InducedDistribution) -> ClassKey:
    """(zero count, entropy key)."""
    return (distribution.zero_count, distribution.entropy_key)


@lru_cache(maxsize=65536)
def multiset_key(counts: Tuple[int, ...]) -> ClassKey:
    """Class key of a count multiset given as a tuple."""
    return (sum(1 for c in counts if c == 0), entropy_key(counts))


def compare_distribution_classes(a: DistributionClass, b: DistributionClass) -> int:
    """
    Order on classes: larger N wins, then smaller entropy.

    Returns:
        1 if a > b, -1 if a < b, 0 if equal

    Raises:
        DenominatorMismatchError: If the classes come from different denominators
    """
    if a.denominator != b.denominator:
        raise DenominatorMismatchError(a.denominator, b.denominator)
    return (a.order_key > b.order_key) - (a.order_key < b.order_key)


# =====================
# Counting Kernels
# =====================


def outcome_codes(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """
    Outcomes z = U p for a block of maps and a set of points.

    Args:
        points: int64 masks of shape (..., D)
        rows: int64 row masks of shape (S, r)

    Returns:
        int64 array of shape (..., S, D)
    """
    points = np.asarray(points, dtype=np.int64)
    rows = np.asarray(rows, dtype=np.int64)
    expanded = points[..., None, :]
    codes = np.zeros(points.shape[:-1] + (rows.shape[0], points.shape[-1]), dtype=np.int64)
    for j in range(rows.shape[1]):
        codes <<= 1
        codes |= parity(rows[:, j, None] & expanded)
    return codes


def count_outcomes(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """
    Outcome counts for every map in a block.

    Returns:
        int64 array of shape (..., S, 2^r)
    """
    codes = outcome_codes(points, rows)
    width = 1 << rows.shape[1]
    flat = codes.reshape(-1, codes.shape[-1])
    offsets = np.arange(flat.shape[0], dtype=np.int64)[:, None] * width
    counts = np.bincount((flat + offsets).ravel(), minlength=flat.shape[0] * width)
    return counts.reshape(codes.shape[:-1] + (width,))


@dataclass(frozen=True, eq=False)
class MultisetGroups:
    """
    Rows of a counts matrix grouped by count multiset.

    Args:
        keys: Class key of each distinct multiset
        multisets: Distinct multisets, each sorted descending
        first: Position of the first row holding each multiset
        sizes: Number of rows holding each multiset
        inverse: Multiset number of every row
    """

    keys: List[ClassKey]
    multisets: np.ndarray
    first: np.ndarray
    sizes: np.ndarray
    inverse: np.ndarray


def group_multisets(counts: np.ndarray) -> MultisetGroups:
    """Group the rows of a (b, 2^r) counts matrix by their count multisets."""
    ordered = -np.sort(-counts, axis=1)
    multisets, first, inverse, sizes = np.unique(
        ordered, axis=0, return_index=True, return_inverse=True, return_counts=True
    )
    keys = [multiset_key(tuple(int(c) for c in row)) for row in multisets]
    return MultisetGroups(keys, multisets, first, sizes, inverse.reshape(-1))


# =====================
# Induced Distributions
# =====================


def _induce(points: np.ndarray, U: LinearMap, denominator: int) -> InducedDistribution:
    rows = np.array([U.rows], dtype=np.int64)
    counts = count_outcomes(points, rows)[0]
    return InducedDistribution(U.r, tuple(int(c) for c in counts), denominator)


def induce_conventional(f: BooleanFunction, U: LinearMap) -> InducedDistribution:
    """
    q over r-bit outcomes from the uniform distribution on the support of f.

    Raises:
        ColumnMismatchError: If U does not have n columns
        EmptySupportError: If f is constant zero
    """
    if U.ncols != f.n:
        raise ColumnMismatchError(f.n, U.ncols)
    support = f.support()
    if support.size == 0:
        raise EmptySupportError()
    return _induce(support, U, int(support.size))


def induce_vectorial(F: VectorialFunction, U: LinearMap) -> InducedDistribution:
    """
    q over r-bit outcomes from the uniform distribution on the graph of F.

    Raises:
        ColumnMismatchError: If U does not have n + m columns
    """
    if U.ncols != F.n + F.m:
        raise ColumnMismatchError(F.n + F.m, U.ncols)
    return _induce(F.graph_points(), U, F.size)
