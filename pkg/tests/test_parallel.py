"""
Tests for interval splitting and sharded execution.
"""

import pytest

from nonlinearity_sdk.exceptions import ValidationError
from nonlinearity_sdk.parallel import (
    run_sharded,
    split_interval,
    split_intervals,
    uncovered_intervals,
)


def interval_sum(task):
    lo, hi = task
    return sum(range(lo, hi))


class TestIntervals:
    """Test interval helpers."""

    def test_split_interval(self):
        assert split_interval(10, 3) == [(0, 3), (3, 6), (6, 10)]
        assert split_interval(2, 5) == [(0, 1), (1, 2)]
        assert split_interval(0, 4) == []

    def test_split_interval_rejects(self):
        with pytest.raises(ValidationError):
            split_interval(10, 0)
        with pytest.raises(ValidationError):
            split_interval(-1, 2)

    def test_uncovered(self):
        assert uncovered_intervals(100, [(10, 20), (0, 5), (15, 30)]) == [(5, 10), (30, 100)]
        assert uncovered_intervals(10, [(0, 10)]) == []
        assert uncovered_intervals(10, []) == [(0, 10)]

    def test_split_intervals_tiles(self):
        gaps = [(5, 10), (30, 100)]
        shards = split_intervals(gaps, 4)
        covered = sorted(i for lo, hi in shards for i in range(lo, hi))
        assert covered == list(range(5, 10)) + list(range(30, 100))
        assert len(shards) >= 2


class TestRunSharded:
    """Test ordered sharded execution."""

    def test_inline(self):
        seen = []
        tasks = split_interval(1000, 7)
        summary = run_sharded(interval_sum, tasks, jobs=1, on_result=seen.append)
        assert summary.results == seen
        assert sum(summary.results) == sum(range(1000))
        assert (summary.shards, summary.jobs) == (7, 1)
        assert summary.execution_time >= 0

    def test_no_tasks(self):
        summary = run_sharded(interval_sum, [], jobs=4)
        assert summary.results == []

    @pytest.mark.parallel
    def test_pool_preserves_order(self):
        tasks = split_interval(5000, 9)
        summary = run_sharded(interval_sum, tasks, jobs=3)
        assert summary.jobs == 3
        assert summary.results == [interval_sum(task) for task in tasks]
