"""
r-dimensional nonlinearity analysis.

For a function and a dimension r, every rank-r map U (one per row-equivalence
class) induces a distribution q. The distributions are grouped into classes by
(N, entropy key), ordered, and the largest class gives (N_f, H_f).

Enumeration is sharded by canonical subspace index. Each shard yields a
PartialCensus; merging partials that tile the index space reproduces the
single-process result exactly.
"""

import csv
import io
import json
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_config
from .core import BooleanFunction, VectorialFunction, graph_walsh_spectrum, walsh_spectrum
from .distributions import (
    ClassKey,
    DistributionClass,
    InducedDistribution,
    count_outcomes,
    group_multisets,
)
from .exceptions import (
    EmptySupportError,
    IncompleteCoverError,
    ParameterMismatchError,
    ValidationError,
)
from .logging import get_analysis_logger, log_operation
from .parallel import run_sharded
from .subspaces import (
    LinearMap,
    SubspaceRange,
    gaussian_binomial,
    iter_rref_blocks,
    rank_one_order,
    split_range,
    unrank_rref,
)
from .validation import RankValidator

AnyFunction = Union[BooleanFunction, VectorialFunction]

CONVENTIONAL = "conventional"
VECTORIAL = "vectorial"

# Below this many subspaces a worker pool costs more than it saves.
MIN_PARALLEL_SUBSPACES = 4096


# =====================
# Analysis Targets
# =====================


@dataclass(frozen=True, eq=False)
class AnalysisTarget:
    """The point set a function contributes: its support or its graph."""

    mode: str
    n: int
    m: int
    ncols: int
    denominator: int
    points: np.ndarray


def analysis_target(function: AnyFunction) -> AnalysisTarget:
    """
    Raises:
        EmptySupportError: For a constant-zero conventional function
    """
    if isinstance(function, BooleanFunction):
        support = function.support()
        if support.size == 0:
            raise EmptySupportError()
        # conventional targets have no output columns, so m is 0
        return AnalysisTarget(CONVENTIONAL, function.n, 0, function.n, int(support.size), support)
    if isinstance(function, VectorialFunction):
        return AnalysisTarget(
            VECTORIAL,
            function.n,
            function.m,
            function.n + function.m,
            function.size,
            function.graph_points(),
        )
    raise ValidationError(
        "expected a BooleanFunction or VectorialFunction",
        field="function",
        value=type(function).__name__,
    )


# =====================
# Reports
# =====================


@dataclass(frozen=True)
class NonlinearityReport:
    """
    Full class census for one function and one r.

    Classes are sorted descending under the class order, so classes[0] is the
    largest class and carries (N_f, H_f).
    """

    mode: str
    n: int
    m: int
    r: int
    u: int
    c: int
    classes: Tuple[DistributionClass, ...]

    @property
    def top(self) -> DistributionClass:
        return self.classes[0]

    @property
    def n_f(self) -> int:
        return self.top.zero_count

    @property
    def h_f(self) -> float:
        return self.top.entropy_bits

    @property
    def t_q(self) -> int:
        return self.top.size

    @property
    def u_q(self) -> LinearMap:
        return self.top.representative_map

    @property
    def q(self) -> InducedDistribution:
        return self.top.representative

    @property
    def class_key(self) -> ClassKey:
        return self.top.order_key

    @property
    def census(self) -> Tuple[Tuple[int, int, int], ...]:
        """(N, entropy key, size) of every class, in order."""
        return tuple((cls.zero_count, cls.entropy_key, cls.size) for cls in self.classes)

    def to_dict(self, decimals: Optional[int] = None) -> dict:
        decimals = get_config().output.entropy_decimals if decimals is None else decimals
        return {
            "mode": self.mode,
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "u": self.u,
            "c": self.c,
            "N_f": self.n_f,
            "H_f": round(self.h_f, decimals),
            "T_q": self.t_q,
            "U_q": self.u_q.render(self.n),
            "q": self.q.to_json(),
            "classes": [cls.to_dict(decimals) for cls in self.classes],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


TABLE_COLUMNS = ("r", "u", "c", "U_q", "q", "N_f", "H_f", "T_q")


def _table_row(report: NonlinearityReport, decimals: int) -> List[str]:
    return [
        str(report.r),
        str(report.u),
        str(report.c),
        "; ".join(report.u_q.render(report.n)),
        "(" + ", ".join(report.q.to_json()) + ")",
        str(report.n_f),
        f"{report.h_f:.{decimals}f}",
        str(report.t_q),
    ]


def reports_to_markdown(
    reports: Sequence[NonlinearityReport], decimals: Optional[int] = None
) -> str:
    """Markdown table with one row per report."""
    decimals = get_config().output.entropy_decimals if decimals is None else decimals
    lines = [
        "| " + " | ".join(TABLE_COLUMNS) + " |",
        "|" + "|".join("---" for _ in TABLE_COLUMNS) + "|",
    ]
    for report in reports:
        lines.append("| " + " | ".join(_table_row(report, decimals)) + " |")
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: Sequence[NonlinearityReport], decimals: Optional[int] = None) -> str:
    decimals = get_config().output.entropy_decimals if decimals is None else decimals
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for report in reports:
        writer.writerow(_table_row(report, decimals))
    return buffer.getvalue()


def reports_to_json(reports: Sequence[NonlinearityReport]) -> str:
    return json.dumps([report.to_dict() for report in reports], indent=2)


# =====================
# Partial Censuses
# =====================


@dataclass
class ClassTally:
    """Size and earliest member of one class inside a partial census."""

    size: int
    first_index: int
    first_counts: Tuple[int, ...]

    def absorb(self, other: "ClassTally") -> None:
        self.size += other.size
        if other.first_index < self.first_index:
            self.first_index = other.first_index
            self.first_counts = other.first_counts


@dataclass
class PartialCensus:
    """
    Class tallies over a set of canonical subspace index ranges.
    """

    mode: str
    n: int
    m: int
    r: int
    ncols: int
    denominator: int
    ranges: List[Tuple[int, int]] = field(default_factory=list)
    tallies: Dict[ClassKey, ClassTally] = field(default_factory=dict)

    @property
    def parameters(self) -> Tuple:
        return (self.mode, self.n, self.m, self.r, self.ncols, self.denominator)

    @property
    def covered(self) -> int:
        return sum(hi - lo for lo, hi in self.ranges)

    def add_block(self, start: int, counts: np.ndarray) -> None:
        """Tally a block of consecutive subspaces starting at index `start`."""
        if counts.shape[0] == 0:
            return
        groups = group_multisets(counts)
        for key, first, size in zip(groups.keys, groups.first, groups.sizes):
            tally = ClassTally(
                int(size), start + int(first), tuple(int(c) for c in counts[first])
            )
            if key in self.tallies:
                self.tallies[key].absorb(tally)
            else:
                self.tallies[key] = tally

        end = start + counts.shape[0]
        if self.ranges and self.ranges[-1][1] == start:
            self.ranges[-1] = (self.ranges[-1][0], end)
        else:
            self.ranges.append((start, end))

    def merge(self, other: "PartialCensus") -> "PartialCensus":
        """
        Combine two partials into a new one.

        Raises:
            ParameterMismatchError: If the partials describe different analyses
        """
        if self.parameters != other.parameters:
            raise ParameterMismatchError(self.parameters, other.parameters)
        merged = PartialCensus(*self.parameters)
        merged.ranges = sorted(self.ranges + other.ranges)
        for source in (self, other):
            for key, tally in source.tallies.items():
                copy = ClassTally(tally.size, tally.first_index, tally.first_counts)
                if key in merged.tallies:
                    merged.tallies[key].absorb(copy)
                else:
                    merged.tallies[key] = copy
        return merged

    def to_report(self) -> NonlinearityReport:
        """
        Raises:
            IncompleteCoverError: If the ranges do not tile the index space exactly once
        """
        total = gaussian_binomial(self.ncols, self.r)
        position = 0
        for lo, hi in sorted(r for r in self.ranges if r[0] < r[1]):
            if lo != position:
                raise IncompleteCoverError(total, self.covered)
            position = hi
        if position != total or self.covered != total:
            raise IncompleteCoverError(total, self.covered)

        classes = []
        for key in sorted(self.tallies, reverse=True):
            tally = self.tallies[key]
            classes.append(
                DistributionClass(
                    zero_count=key[0],
                    entropy_key=key[1],
                    size=tally.size,
                    representative=InducedDistribution(
                        self.r, tally.first_counts, self.denominator
                    ),
                    representative_map=unrank_rref(self.ncols, self.r, tally.first_index),
                    representative_index=tally.first_index,
                )
            )
        return NonlinearityReport(
            mode=self.mode,
            n=self.n,
            m=self.m,
            r=self.r,
            u=total,
            c=len(classes),
            classes=tuple(classes),
        )


def _empty_census(target: AnalysisTarget, r: int) -> PartialCensus:
    return PartialCensus(
        target.mode, target.n, target.m, r, target.ncols, target.denominator
    )


def census_range(
    function: AnyFunction, r: int, subspaces: Optional[SubspaceRange] = None
) -> PartialCensus:
    """
    Partial census over one range of the canonical enumeration.

    Raises:
        EmptySupportError: For a constant-zero conventional function
        RankOutOfRangeError: If r is outside the mode's bounds
    """
    target = analysis_target(function)
    RankValidator.validate(r, target.ncols)
    if subspaces is None:
        subspaces = SubspaceRange(0, gaussian_binomial(target.ncols, r))

    census = _empty_census(target, r)
    max_rows = max(1, get_config().parallel.block_elements // target.points.size)
    analysis_logger = get_analysis_logger()
    analysis_logger.log_shard_started("subspaces", subspaces.lo, subspaces.hi, r=r)
    started = time.perf_counter()

    for start, rows in iter_rref_blocks(
        target.ncols, r, subspaces.lo, subspaces.hi, max_rows
    ):
        census.add_block(start, count_outcomes(target.points, rows))

    analysis_logger.log_shard_completed(
        "subspaces", subspaces.lo, subspaces.hi, time.perf_counter() - started, r=r
    )
    return census


def _census_task(task) -> PartialCensus:
    function, r, lo, hi = task
    return census_range(function, r, SubspaceRange(lo, hi))


def merge_partial(censuses: Sequence[PartialCensus]) -> NonlinearityReport:
    """
    Merge partial censuses over disjoint ranges into a report.

    Raises:
        ParameterMismatchError: If partials come from different analyses
        IncompleteCoverError: If the ranges overlap or leave gaps
    """
    if not censuses:
        raise ValidationError("no partial censuses to merge", field="censuses", value=0)
    return reduce(PartialCensus.merge, censuses).to_report()


# =====================
# Analysis
# =====================


@log_operation("analyze")
def analyze(function: AnyFunction, r: int, jobs: Optional[int] = None) -> NonlinearityReport:
    """
    Exact class census of all rank-r maps for a function.

    Args:
        function: BooleanFunction (conventional mode) or VectorialFunction
        r: Dimension, 1..n conventional or 1..n+m vectorial
        jobs: Worker processes (defaults to the configured job count)

    Raises:
        EmptySupportError: For a constant-zero conventional function
        RankOutOfRangeError: If r is outside the mode's bounds
    """
    target = analysis_target(function)
    RankValidator.validate(r, target.ncols)
    settings = get_config().parallel
    jobs = settings.jobs if jobs is None else jobs
    u = gaussian_binomial(target.ncols, r)

    if jobs <= 1 or u < MIN_PARALLEL_SUBSPACES:
        jobs = 1
        subspaces = [SubspaceRange(0, u)]
    else:
        subspaces = split_range(target.ncols, r, jobs * settings.shards_per_job)

    tasks = [(function, r, rng.lo, rng.hi) for rng in subspaces]
    summary = run_sharded(_census_task, tasks, jobs)
    report = merge_partial(summary.results)

    get_analysis_logger().log_census(
        report.mode,
        report.n,
        report.m,
        r,
        report.u,
        report.c,
        shards=summary.shards,
        jobs=summary.jobs,
        duration_seconds=summary.execution_time,
    )
    return report


@log_operation("analyze_r1_fast")
def analyze_r1_fast(function: AnyFunction) -> NonlinearityReport:
    """
    The r=1 report from one Walsh-Hadamard transform instead of enumeration.

    For a nonzero mask a, the support counts satisfy c0 - c1 = -S_a / 2 in
    conventional mode; in vectorial mode c0 - c1 is the graph spectrum value.
    """
    target = analysis_target(function)
    if isinstance(function, BooleanFunction):
        bias = -(walsh_spectrum(function).numerators // 2)
    else:
        bias = graph_walsh_spectrum(function).ravel()

    order = rank_one_order(target.ncols)
    zeros = (target.denominator + bias[order]) // 2
    counts = np.stack([zeros, target.denominator - zeros], axis=1)

    census = _empty_census(target, 1)
    census.add_block(0, counts)
    return merge_partial([census])


def analyze_range(
    function: AnyFunction, ranks: Sequence[int], jobs: Optional[int] = None
) -> List[NonlinearityReport]:
    """analyze for several dimensions, in the given order."""
    return [analyze(function, r, jobs) for r in ranks]
