"""
Rank-r binary matrices up to row equivalence.

Every r-dimensional subspace of GF(2)^N is represented by its reduced row
echelon form. Column 0 is the most significant bit of a row mask, so for the
stacked vector (x, y) column j < n is x_{j+1} and column n + j is y_{j+1}.

The canonical order sorts pivot-column sets lexicographically and, within a
pivot set, the free entries as an integer. Free entries are taken row-major
(row 0 first, columns ascending) and the first one is the most significant
bit. Since the free-entry count of a row depends only on its own pivot, any
index can be ranked or unranked in O(r * N) big-integer steps.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_config
from .exceptions import ArityError, ValidationError
from .parallel import split_interval
from .validation import MaskValidator, RankValidator

MAX_COLUMNS = 64
MAX_STREAM_COLUMNS = 62  # int64 row masks


# =====================
# Linear Maps
# =====================


@dataclass(frozen=True)
class LinearMap:
    """
    Canonical RREF matrix U of rank r over ncols columns.

    Args:
        ncols: Column count N (n for conventional, n + m for vectorial)
        rows: r row masks of width N
        pivot_cols: Strictly increasing pivot column of each row
    """

    ncols: int
    rows: Tuple[int, ...]
    pivot_cols: Tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(row) for row in self.rows)
        pivots = tuple(int(col) for col in self.pivot_cols)
        if len(rows) != len(pivots):
            raise ValidationError(
                "each row needs exactly one pivot column",
                field="pivot_cols",
                value=pivots,
            )

        previous = -1
        for i, (row, pivot) in enumerate(zip(rows, pivots)):
            if not previous < pivot < self.ncols:
                raise ValidationError(
                    "pivot columns must be strictly increasing and inside the matrix",
                    field="pivot_cols",
                    value=pivots,
                )
            if row >> (self.ncols - pivot) or not (row >> (self.ncols - 1 - pivot)) & 1:
                raise ValidationError(
                    f"row {i} does not lead at column {pivot}", field="rows", value=row
                )
            previous = pivot

        for pivot in pivots:
            bit = 1 << (self.ncols - 1 - pivot)
            if sum(1 for row in rows if row & bit) != 1:
                raise ValidationError(
                    f"pivot column {pivot} is not reduced", field="rows", value=rows
                )

        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "pivot_cols", pivots)

    @property
    def r(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rref_rows(cls, rows: Sequence[int], ncols: int) -> "LinearMap":
        """Build from rows already in RREF, reading pivots off the leading bits."""
        rows = tuple(int(row) for row in rows)
        return cls(ncols, rows, tuple(ncols - row.bit_length() for row in rows))

    def column_name(self, col: int, n: Optional[int] = None) -> str:
        n = self.ncols if n is None else n
        return f"x{col + 1}" if col < n else f"y{col - n + 1}"

    def render(self, n: Optional[int] = None) -> List[str]:
        """
        Rows as linear forms, e.g. ["x3+x5"] or ["x1+y2+y3"].

        Args:
            n: Number of input columns; the remaining ncols - n are outputs
        """
        rendered = []
        for row in self.rows:
            terms = [
                self.column_name(col, n)
                for col in range(self.ncols)
                if (row >> (self.ncols - 1 - col)) & 1
            ]
            rendered.append("+".join(terms))
        return rendered

    def to_matrix(self) -> np.ndarray:
        """r x ncols 0/1 matrix."""
        shifts = np.arange(self.ncols - 1, -1, -1, dtype=np.int64)
        rows = np.array(self.rows, dtype=np.int64).reshape(-1, 1)
        return ((rows >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True)
class Canonicalization:
    """RREF of arbitrary rows together with their rank."""

    linear_map: LinearMap
    rank: int
    requested: int

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.requested


@dataclass(frozen=True, order=True)
class SubspaceRange:
    """Half-open interval [lo, hi) of canonical enumeration indices."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ValidationError(
                f"invalid range [{self.lo}, {self.hi})", field="range", value=(self.lo, self.hi)
            )

    @property
    def size(self) -> int:
        return self.hi - self.lo


# =====================
# Counting
# =====================


@lru_cache(maxsize=None)
def _gaussian(N: int, r: int) -> int:
    if r < 0 or r > N:
        return 0
    numerator = denominator = 1
    for i in range(r):
        numerator *= (1 << (N - i)) - 1
        denominator *= (1 << (r - i)) - 1
    return numerator // denominator


def _validate_columns(N: int, limit: int = MAX_COLUMNS) -> None:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or not 0 <= N <= limit:
        raise ArityError("ncols", N, limit)


def gaussian_binomial(N: int, r: int) -> int:
    """
    Number of r-dimensional subspaces of GF(2)^N.

    Raises:
        RankOutOfRangeError: If r is outside 0..N
    """
    _validate_columns(N)
    RankValidator.validate(r, N, low=0)
    return _gaussian(int(N), int(r))


def _validate_shape(N: int, r: int) -> None:
    _validate_columns(N, MAX_STREAM_COLUMNS)
    RankValidator.validate(r, N)


@lru_cache(maxsize=4096)
def _layout(N: int, pivots: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """Pivot bits per row plus (row, bit shift) of every free slot in order."""
    pivot_set = set(pivots)
    base = tuple(1 << (N - 1 - p) for p in pivots)
    slot_rows, slot_shifts = [], []
    for i, p in enumerate(pivots):
        for col in range(p + 1, N):
            if col not in pivot_set:
                slot_rows.append(i)
                slot_shifts.append(N - 1 - col)
    return base, tuple(slot_rows), tuple(slot_shifts)


def _group_size(N: int, r: int, i: int, pivot: int, prefix_free: int) -> int:
    """Matrices whose first i pivots are fixed and whose pivot i is `pivot`."""
    free = (N - 1 - pivot) - (r - 1 - i)
    return _gaussian(N - 1 - pivot, r - 1 - i) << (prefix_free + free)


def _unrank_pivots(N: int, r: int, index: int) -> Tuple[Tuple[int, ...], int]:
    pivots = []
    prefix_free = 0
    pivot = -1
    remaining = index
    for i in range(r):
        pivot += 1
        while True:
            size = _group_size(N, r, i, pivot, prefix_free)
            if remaining < size:
                break
            remaining -= size
            pivot += 1
        pivots.append(pivot)
        prefix_free += (N - 1 - pivot) - (r - 1 - i)
    return tuple(pivots), remaining


def _next_pivots(pivots: Tuple[int, ...], N: int) -> Optional[Tuple[int, ...]]:
    """Lexicographic successor of a pivot set, None after the last one."""
    r = len(pivots)
    current = list(pivots)
    for i in range(r - 1, -1, -1):
        if current[i] != i + N - r:
            current[i] += 1
            for j in range(i + 1, r):
                current[j] = current[j - 1] + 1
            return tuple(current)
    return None


# =====================
# Ranking
# =====================


def unrank_rref(N: int, r: int, index: int) -> LinearMap:
    """
    The LinearMap at a canonical enumeration index.

    Raises:
        RankOutOfRangeError: If r is outside 1..N
        ValidationError: If index is outside [0, gaussian_binomial(N, r))
    """
    _validate_shape(N, r)
    total = _gaussian(N, r)
    if not 0 <= index < total:
        raise ValidationError(
            f"index {index} outside [0, {total})", field="index", value=index
        )
    pivots, k = _unrank_pivots(N, r, index)
    base, slot_rows, slot_shifts = _layout(N, pivots)
    rows = list(base)
    free = len(slot_rows)
    for s, (row, shift) in enumerate(zip(slot_rows, slot_shifts)):
        if (k >> (free - 1 - s)) & 1:
            rows[row] |= 1 << shift
    return LinearMap(N, tuple(rows), pivots)


def rank_rref(linear_map: LinearMap) -> int:
    """Canonical enumeration index of a LinearMap."""
    N, r = linear_map.ncols, linear_map.r
    _validate_shape(N, r)
    index = 0
    prefix_free = 0
    previous = -1
    for i, pivot in enumerate(linear_map.pivot_cols):
        for skipped in range(previous + 1, pivot):
            index += _group_size(N, r, i, skipped, prefix_free)
        prefix_free += (N - 1 - pivot) - (r - 1 - i)
        previous = pivot

    _, slot_rows, slot_shifts = _layout(N, linear_map.pivot_cols)
    k = 0
    for row, shift in zip(slot_rows, slot_shifts):
        k = (k << 1) | ((linear_map.rows[row] >> shift) & 1)
    return index + k


def rank_one_order(N: int) -> np.ndarray:
    """All nonzero N-bit masks in canonical rank-1 order (leading bit first, then ascending)."""
    _validate_shape(N, 1)
    return np.concatenate(
        [np.arange(1 << (N - 1 - p), 1 << (N - p), dtype=np.int64) for p in range(N)]
    )


# =====================
# Enumeration
# =====================


def iter_rref_blocks(
    N: int,
    r: int,
    lo: int = 0,
    hi: Optional[int] = None,
    max_rows: int = 1 << 16,
) -> Iterator[Tuple[int, np.ndarray]]:
    """
    Stream the canonical enumeration over [lo, hi) as row blocks.

    Yields:
        (start_index, rows) with rows an int64 array of shape (b, r), b <= max_rows;
        blocks never straddle two pivot sets

    Raises:
        ArityError: If a pivot set has more free entries than the configured block bits
    """
    _validate_shape(N, r)
    total = _gaussian(N, r)
    hi = total if hi is None else hi
    if not 0 <= lo <= hi <= total:
        raise ValidationError(
            f"range [{lo}, {hi}) outside [0, {total})", field="range", value=(lo, hi)
        )
    if lo == hi:
        return

    limit_bits = get_config().limits.max_subspace_block_bits
    max_rows = max(1, int(max_rows))
    pivots, k = _unrank_pivots(N, r, lo)
    index = lo
    while index < hi:
        base, slot_rows, slot_shifts = _layout(N, pivots)
        free = len(slot_rows)
        if free > limit_bits:
            raise ArityError("free_entries", free, limit_bits)
        block_end = 1 << free
        while k < block_end and index < hi:
            count = min(block_end - k, hi - index, max_rows)
            ks = np.arange(k, k + count, dtype=np.int64)
            rows = np.empty((count, r), dtype=np.int64)
            rows[:] = base
            for s, (row, shift) in enumerate(zip(slot_rows, slot_shifts)):
                rows[:, row] |= ((ks >> (free - 1 - s)) & 1) << shift
            yield index, rows
            index += count
            k += count
        if index < hi:
            pivots = _next_pivots(pivots, N)
            k = 0


def enumerate_rref(
    N: int, r: int, lo: int = 0, hi: Optional[int] = None
) -> Iterator[LinearMap]:
    """
    Every rank-r RREF matrix over N columns exactly once, in canonical order.

    Raises:
        RankOutOfRangeError: If r is outside 1..N
    """
    for _, rows in iter_rref_blocks(N, r, lo, hi):
        for row in rows:
            yield LinearMap.from_rref_rows(row.tolist(), N)


def all_rref_rows(N: int, r: int) -> np.ndarray:
    """The whole canonical enumeration as one (u, r) int64 array."""
    blocks = [rows for _, rows in iter_rref_blocks(N, r)]
    return np.concatenate(blocks) if blocks else np.empty((0, r), dtype=np.int64)


def canonicalize(rows: Sequence[int], ncols: int) -> Canonicalization:
    """
    Gaussian elimination over GF(2) to the canonical RREF.

    Rank deficiency is reported through Canonicalization.rank, never raised.
    """
    _validate_columns(ncols)
    work = [int(row) for row in rows]
    for row in work:
        MaskValidator.validate(row, ncols, field="rows", nonzero=False)

    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == len(work):
            break
        bit = 1 << (ncols - 1 - col)
        found = next((i for i in range(rank, len(work)) if work[i] & bit), None)
        if found is None:
            continue
        work[rank], work[found] = work[found], work[rank]
        for i in range(len(work)):
            if i != rank and work[i] & bit:
                work[i] ^= work[rank]
        pivots.append(col)
        rank += 1

    linear_map = LinearMap(ncols, tuple(work[:rank]), tuple(pivots))
    return Canonicalization(linear_map, rank, len(work))


def split_range(N: int, r: int, parts: int) -> List[SubspaceRange]:
    """
    Disjoint cover of [0, gaussian_binomial(N, r)) by at most `parts` ranges.

    Each range streams independently through iter_rref_blocks.
    """
    total = gaussian_binomial(N, r)
    return [SubspaceRange(lo, hi) for lo, hi in split_interval(total, parts)]
