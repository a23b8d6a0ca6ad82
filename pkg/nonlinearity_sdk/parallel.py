"""
Process-pool sharding for exhaustive enumerations.

Work is described as index intervals that are split into shards, mapped over
a ``multiprocessing.Pool`` and handed back in shard order, so callers can
merge results deterministically whatever the worker count.
"""

import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

from .exceptions import ValidationError
from .logging import get_logger


@dataclass
class ShardSummary:
    """
    Timing summary of a sharded run.

    Args:
        shards: Number of shards executed
        jobs: Worker processes used
        execution_time: Wall time in seconds
    """

    shards: int
    jobs: int
    execution_time: Optional[float] = None
    results: List[Any] = field(default_factory=list, repr=False)


def split_interval(total: int, parts: int) -> List[Tuple[int, int]]:
    """
    Split [0, total) into at most `parts` nonempty, nearly equal intervals.

    Raises:
        ValidationError: If parts < 1 or total < 0
    """
    if not isinstance(parts, int) or parts < 1:
        raise ValidationError("parts must be a positive integer", field="parts", value=parts)
    if total < 0:
        raise ValidationError("total must be nonnegative", field="total", value=total)
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]


def uncovered_intervals(total: int, covered: Iterable[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Gaps of [0, total) not covered by the given intervals."""
    gaps = []
    position = 0
    for lo, hi in sorted(covered):
        if lo > position:
            gaps.append((position, lo))
        position = max(position, hi)
    if position < total:
        gaps.append((position, total))
    return gaps


def split_intervals(intervals: Sequence[Tuple[int, int]], parts: int) -> List[Tuple[int, int]]:
    """Split several intervals into about `parts` shards in total, proportionally to size."""
    total = sum(hi - lo for lo, hi in intervals)
    shards = []
    for lo, hi in intervals:
        share = max(1, -(-parts * (hi - lo) // total)) if total else 1
        shards.extend((lo + a, lo + b) for a, b in split_interval(hi - lo, share))
    return shards


def run_sharded(
    worker: Callable[[Any], Any],
    tasks: Sequence[Any],
    jobs: int = 1,
    on_result: Optional[Callable[[Any], None]] = None,
) -> ShardSummary:
    """
    Run a picklable worker over tasks, optionally in a process pool.

    Results come back in task order. ``on_result`` is called in the parent
    process as each result arrives, which is where checkpoints are written.

    Args:
        worker: Module-level function taking one task
        tasks: Task descriptions
        jobs: Worker processes; 1 runs inline
        on_result: Callback for each result, in task order

    Returns:
        ShardSummary with the ordered results
    """
    tasks = list(tasks)
    processes = max(1, min(int(jobs), len(tasks)))
    start = time.perf_counter()
    summary = ShardSummary(shards=len(tasks), jobs=processes)

    def collect(result):
        if on_result is not None:
            on_result(result)
        summary.results.append(result)

    if processes == 1:
        for task in tasks:
            collect(worker(task))
    else:
        get_logger().debug(
            "Starting worker pool", operation="pool", jobs=processes, shards=len(tasks)
        )
        with multiprocessing.Pool(processes=processes) as pool:
            for result in pool.imap(worker, tasks, chunksize=1):
                collect(result)

    summary.execution_time = time.perf_counter() - start
    return summary
