"""
Tests for the structured logging framework.
"""

import json
import logging

import pytest

from nonlinearity_sdk.config import update_config
from nonlinearity_sdk.exceptions import SearchError
from nonlinearity_sdk.logging import (
    StructuredFormatter,
    configure_logging,
    get_analysis_logger,
    get_logger,
    log_operation,
)
from nonlinearity_sdk.nonlinearity import analyze


@pytest.fixture
def records():
    """Collect decoded log records at DEBUG level."""
    logger = get_logger()
    collected = []

    class Collector(logging.Handler):
        def emit(self, record):
            collected.append(json.loads(record.getMessage()))

    handler = Collector()
    previous = logger.logger.level
    logger.logger.addHandler(handler)
    logger.set_level("DEBUG")
    yield collected
    logger.logger.removeHandler(handler)
    logger.logger.setLevel(previous)
    logger.clear_context()


class TestStructuredFormatter:
    """Test JSON formatting."""

    def make_record(self, message):
        return logging.LogRecord("nonlinearity_sdk", logging.INFO, __file__, 1, message, None, None)

    def test_adds_level(self):
        text = StructuredFormatter().format(self.make_record(json.dumps({"message": "hi"})))
        assert json.loads(text) == {"message": "hi", "level": "INFO"}

    def test_plain_messages_pass_through(self):
        assert StructuredFormatter().format(self.make_record("plain text")) == "plain text"


class TestNonlinearityLogger:
    """Test the logger wrapper."""

    def test_context(self, records):
        logger = get_logger()
        logger.set_context(run="a")
        logger.info("first", value=1)
        logger.clear_context()
        logger.info("second")
        assert records[0]["context"] == {"run": "a"}
        assert records[0]["value"] == 1
        assert records[1]["context"] == {}

    def test_error_details(self, records):
        get_logger().error("search failed", error=SearchError("empty"))
        assert records[0]["error_type"] == "SearchError"
        assert records[0]["error_code"] == "SEARCH_ERROR"

    def test_level_filtering(self, records):
        get_logger().set_level("WARNING")
        get_logger().info("hidden")
        get_logger().warning("shown")
        assert [record["message"] for record in records] == ["shown"]


class TestLogOperation:
    """Test the performance-tracking decorator."""

    def test_success(self, records):
        @log_operation("double")
        def double(x):
            return 2 * x

        assert double(4) == 8
        assert records[0]["operation_type"] == "start"
        assert records[-1]["operation_type"] == "end"
        assert records[-1]["success"] is True

    def test_failure_is_reraised(self, records):
        @log_operation("explode")
        def explode():
            raise SearchError("boom")

        with pytest.raises(SearchError):
            explode()
        assert records[-1]["success"] is False
        assert "boom" in records[-1]["results"]["error"]

    def test_disabled_by_config(self, records):
        update_config(logging={"log_performance": False})

        @log_operation("quiet")
        def quiet():
            return 1

        assert quiet() == 1
        assert [record for record in records if record.get("operation") == "quiet"] == []


class TestAnalysisLogging:
    """Test census and shard records."""

    def test_analyze_logs_census(self, records, example_function):
        analyze(example_function, 2)
        census = [record for record in records if record.get("operation") == "census"]
        assert census[0]["u"] == 155
        assert census[0]["c"] == 5
        shards = [record for record in records if record.get("operation") == "shard"]
        assert {record["kind"] for record in shards} == {"subspaces"}

    def test_search_progress(self, records):
        get_analysis_logger().log_search_progress(10, None, 2)
        assert records[0]["message"] == "Search progress: 10/?"


class TestConfigureLogging:
    """Test global logging setup."""

    def test_file_output(self, tmp_path):
        path = tmp_path / "logs" / "run.log"
        try:
            configure_logging(level="INFO", file_path=str(path), console=False)
            get_logger().info("to file", stage="test")
        finally:
            configure_logging(level="WARNING")
        line = json.loads(path.read_text().splitlines()[0])
        assert line["message"] == "to file"
        assert line["level"] == "INFO"
