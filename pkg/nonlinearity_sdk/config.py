"""
Configuration management for the nonlinearity SDK.

Holds the enumeration limits, parallel execution settings, logging settings
and output formatting options. Settings can be overridden from environment
variables and persisted to JSON files.
"""

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .exceptions import ConfigurationError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LimitsConfig:
    """Arity caps and search bounds."""

    max_boolean_arity: int = 24  # n for conventional functions
    max_vectorial_arity: int = 16  # n for vectorial functions
    max_vectorial_columns: int = 24  # n + m
    max_sbox_degree: int = 8  # k for the inversion S-box generator
    max_search_bits: int = 20  # m * 2^n cap for scope="all"
    max_subspace_block_bits: int = 62  # free entries per pivot set (int64 ranks)

    def __post_init__(self):
        """Validate limits after initialization."""
        if not 1 <= self.max_boolean_arity <= 24:
            raise ConfigurationError(
                "max_boolean_arity must be in 1..24",
                "max_boolean_arity",
                self.max_boolean_arity,
            )
        if not 1 <= self.max_vectorial_arity <= self.max_vectorial_columns:
            raise ConfigurationError(
                "max_vectorial_arity must be positive and at most max_vectorial_columns",
                "max_vectorial_arity",
                self.max_vectorial_arity,
            )
        if self.max_vectorial_columns > 24:
            raise ConfigurationError(
                "max_vectorial_columns cannot exceed 24",
                "max_vectorial_columns",
                self.max_vectorial_columns,
            )
        if not 1 <= self.max_sbox_degree <= 16:
            raise ConfigurationError(
                "max_sbox_degree must be in 1..16",
                "max_sbox_degree",
                self.max_sbox_degree,
            )
        if self.max_search_bits <= 0:
            raise ConfigurationError(
                "max_search_bits must be positive",
                "max_search_bits",
                self.max_search_bits,
            )
        if not 1 <= self.max_subspace_block_bits <= 62:
            raise ConfigurationError(
                "max_subspace_block_bits must be in 1..62",
                "max_subspace_block_bits",
                self.max_subspace_block_bits,
            )


@dataclass
class ParallelConfig:
    """Worker pool and numpy working-set settings."""

    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    shards_per_job: int = 4  # ranges handed out per worker
    block_elements: int = 1 << 22  # cap on rows * points per numpy block

    def __post_init__(self):
        """Validate parallel configuration."""
        if self.jobs <= 0:
            raise ConfigurationError("jobs must be positive", "jobs", self.jobs)
        if self.shards_per_job <= 0:
            raise ConfigurationError(
                "shards_per_job must be positive",
                "shards_per_job",
                self.shards_per_job,
            )
        if self.block_elements < 1024:
            raise ConfigurationError(
                "block_elements must be at least 1024",
                "block_elements",
                self.block_elements,
            )


@dataclass
class LoggingConfig:
    """Configuration for logging system."""

    level: str = "WARNING"  # Default log level (stderr stays quiet for CLI use)
    structured: bool = True  # Use structured JSON logging
    enable_file: bool = False  # Log to file
    log_file: Optional[str] = None  # Log file path
    log_performance: bool = True  # Log operation timings

    def __post_init__(self):
        if self.level.upper() not in LOG_LEVELS:
            raise ConfigurationError("Invalid log level", "level", self.level)
        self.level = self.level.upper()


@dataclass
class OutputConfig:
    """Report formatting and census output settings."""

    entropy_decimals: int = 5  # H rendering in reports
    default_format: str = "json"  # json | csv | md
    table_tolerance: float = 1e-3  # entropy tolerance against reference tables
    max_examples: int = 8  # example members kept per function class
    census_filename: str = "census.jsonl"
    summary_filename: str = "summary.json"

    def __post_init__(self):
        if self.default_format not in ("json", "csv", "md"):
            raise ConfigurationError(
                "default_format must be json, csv or md",
                "default_format",
                self.default_format,
            )
        if not 0 <= self.entropy_decimals <= 15:
            raise ConfigurationError(
                "entropy_decimals must be in 0..15",
                "entropy_decimals",
                self.entropy_decimals,
            )
        if self.table_tolerance <= 0:
            raise ConfigurationError(
                "table_tolerance must be positive",
                "table_tolerance",
                self.table_tolerance,
            )
        if self.max_examples < 1:
            raise ConfigurationError(
                "max_examples must be at least 1", "max_examples", self.max_examples
            )


@dataclass
class AnalyzerConfig:
    """Main SDK configuration combining all settings."""

    limits: LimitsConfig = field(default_factory=LimitsConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        """Validate the complete configuration."""
        # Sections validate themselves in __post_init__

        if self.logging.log_file and self.logging.enable_file:
            log_path = Path(self.logging.log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AnalyzerConfig":
        """Create configuration from dictionary."""
        data = dict(data)
        unknown = set(data) - {"limits", "parallel", "logging", "output"}
        if unknown:
            raise ConfigurationError(
                f"Unknown configuration sections: {sorted(unknown)}",
                "sections",
                sorted(unknown),
            )
        try:
            return cls(
                limits=LimitsConfig(**data.get("limits", {})),
                parallel=ParallelConfig(**data.get("parallel", {})),
                logging=LoggingConfig(**data.get("logging", {})),
                output=OutputConfig(**data.get("output", {})),
            )
        except TypeError as e:
            raise ConfigurationError(f"Invalid configuration field: {e}")


# Configuration Manager
class ConfigManager:
    """
    Centralized configuration management with environment support.
    """

    _instance: Optional["ConfigManager"] = None
    _config: Optional[AnalyzerConfig] = None

    def __new__(cls) -> "ConfigManager":
        """Singleton pattern for global configuration."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._config = self._create_default_config()

    def _create_default_config(self) -> AnalyzerConfig:
        """Create default configuration."""
        return self._apply_env_overrides(AnalyzerConfig())

    def _apply_env_overrides(self, config: AnalyzerConfig) -> AnalyzerConfig:
        """Apply environment variable overrides."""
        try:
            if jobs := os.getenv("NONLINEARITY_JOBS"):
                config.parallel = ParallelConfig(
                    jobs=int(jobs),
                    shards_per_job=config.parallel.shards_per_job,
                    block_elements=config.parallel.block_elements,
                )

            if block_elements := os.getenv("NONLINEARITY_BLOCK_ELEMENTS"):
                config.parallel = ParallelConfig(
                    jobs=config.parallel.jobs,
                    shards_per_job=config.parallel.shards_per_job,
                    block_elements=int(block_elements),
                )

            if search_bits := os.getenv("NONLINEARITY_MAX_SEARCH_BITS"):
                limits = asdict(config.limits)
                limits["max_search_bits"] = int(search_bits)
                config.limits = LimitsConfig(**limits)
        except ValueError as e:
            raise ConfigurationError(f"Invalid environment override: {e}")

        if level := os.getenv("NONLINEARITY_LOG_LEVEL"):
            logging_data = asdict(config.logging)
            logging_data["level"] = level
            config.logging = LoggingConfig(**logging_data)

        return config

    def get_config(self) -> AnalyzerConfig:
        """Get current configuration."""
        return self._config

    def set_config(self, config: AnalyzerConfig) -> None:
        """Set new configuration."""
        config.validate()
        self._config = config

    def update_config(self, **sections: Dict[str, Any]) -> None:
        """Update configuration sections with partial changes."""
        current = self._config.to_dict()
        for section, changes in sections.items():
            if section not in current:
                raise ConfigurationError(
                    f"Unknown configuration section: {section}", section, changes
                )
            current[section].update(changes)
        self.set_config(AnalyzerConfig.from_dict(current))

    def load_from_file(self, file_path: Union[str, Path]) -> None:
        """Load configuration from JSON file."""
        path = Path(file_path)

        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {file_path}")

        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in configuration file: {e}")

        self.set_config(AnalyzerConfig.from_dict(data))

    def save_to_file(self, file_path: Union[str, Path]) -> None:
        """Save current configuration to JSON file."""
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)

        try:
            with open(path, "w", encoding="utf-8") as f:
                json.dump(self._config.to_dict(), f, indent=2)
        except OSError as e:
            raise ConfigurationError(f"Error saving configuration: {e}")

    def reset_to_defaults(self) -> None:
        """Reset configuration to defaults."""
        self._config = self._create_default_config()


# Global configuration instance
_config_manager = ConfigManager()


def get_config() -> AnalyzerConfig:
    """Get the global SDK configuration."""
    return _config_manager.get_config()


def set_config(config: AnalyzerConfig) -> None:
    """Set the global SDK configuration."""
    _config_manager.set_config(config)


def update_config(**sections: Dict[str, Any]) -> None:
    """Update global configuration with partial changes."""
    _config_manager.update_config(**sections)


def load_config_from_file(file_path: Union[str, Path]) -> None:
    """Load configuration from file."""
    _config_manager.load_from_file(file_path)


def save_config_to_file(file_path: Union[str, Path]) -> None:
    """Save configuration to file."""
    _config_manager.save_to_file(file_path)


def reset_config() -> None:
    """Reset the global configuration to defaults (environment applied)."""
    _config_manager.reset_to_defaults()
