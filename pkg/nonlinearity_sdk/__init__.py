"""
Nonlinearity SDK

Exact r-dimensional nonlinearity of Boolean functions and S-boxes: every
rank-r linear map of the inputs (or of input and output jointly) is
enumerated once per row-equivalence class, the induced distributions are
grouped by zero count and support entropy, and the largest class yields the
parameters (N_f, H_f).

Architecture:
- Core: Truth tables, ANF parsing, Walsh-Hadamard spectra, GF(2^k) S-boxes
- Subspaces: Canonical enumeration of rank-r maps (RREF ranking/unranking)
- Distributions: Induced distributions and exact class keys
- Nonlinearity: Sharded class censuses and reports
- Optimal: Function-class order and optimal function search
- Reference: Built-in reference functions and tables
- Configuration: Centralized configuration management
- Validation: Input validation
- Logging: Structured logging with performance tracking
- Exceptions: Hierarchical error handling
"""

from .config import (
    AnalyzerConfig,
    ConfigManager,
    LimitsConfig,
    LoggingConfig,
    OutputConfig,
    ParallelConfig,
    get_config,
    load_config_from_file,
    reset_config,
    save_config_to_file,
    set_config,
    update_config,
)
from .core import (
    AnfExpression,
    BooleanFunction,
    LinearApproximation,
    VectorialFunction,
    WalshSpectrum,
    anf_to_function,
    apply_affine_change,
    best_linear_approximation,
    classical_nonlinearity,
    component_function,
    correlation_probability,
    fwht,
    gf_inverse_sbox,
    gf_multiply,
    graph_walsh_spectrum,
    is_balanced,
    is_bent,
    is_irreducible,
    is_perfect_nonlinear,
    parse_anf,
    walsh_spectrum,
)
from .distributions import (
    DistributionClass,
    InducedDistribution,
    compare_distribution_classes,
    entropy_key,
    induce_conventional,
    induce_vectorial,
    support_entropy,
)

# Error handling
from .exceptions import (
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
)

# Logging framework
from .logging import (
    configure_logging,
    get_analysis_logger,
    get_logger,
    get_performance_tracker,
    log_operation,
)
from .nonlinearity import (
    NonlinearityReport,
    PartialCensus,
    analyze,
    analyze_r1_fast,
    analyze_range,
    census_range,
    merge_partial,
    reports_to_csv,
    reports_to_json,
    reports_to_markdown,
)
from .optimal import (
    FunctionCensus,
    FunctionClass,
    PerfectNonlinearCheck,
    SearchResult,
    bent_coordinate_candidates,
    compare_function_classes,
    optimal_search,
    random_candidates,
    verify_optimal_equals_pn,
    write_census_jsonl,
    write_summary_json,
)
from .reference import (
    EXAMPLE_ANF,
    TABLE_1,
    TABLE_2,
    check_report,
    example_boolean_function,
    example_inverse_sbox,
    reproduce_table,
)
from .subspaces import (
    LinearMap,
    SubspaceRange,
    canonicalize,
    enumerate_rref,
    gaussian_binomial,
    iter_rref_blocks,
    rank_rref,
    unrank_rref,
)
from .validation import (
    ArityValidator,
    HexTableValidator,
    MaskValidator,
    RankValidator,
    TruthTableValidator,
    is_valid_arity,
    is_valid_mask,
    is_valid_rank,
)

__version__ = "0.1.0"
__license__ = "MIT"

__all__ = [
    # Functions and spectra
    "BooleanFunction",
    "VectorialFunction",
    "AnfExpression",
    "WalshSpectrum",
    "LinearApproximation",
    "parse_anf",
    "anf_to_function",
    "fwht",
    "walsh_spectrum",
    "graph_walsh_spectrum",
    "classical_nonlinearity",
    "correlation_probability",
    "component_function",
    "best_linear_approximation",
    "apply_affine_change",
    "is_balanced",
    "is_bent",
    "is_perfect_nonlinear",
    "gf_multiply",
    "is_irreducible",
    "gf_inverse_sbox",
    # Subspaces
    "LinearMap",
    "SubspaceRange",
    "gaussian_binomial",
    "unrank_rref",
    "rank_rref",
    "enumerate_rref",
    "iter_rref_blocks",
    "canonicalize",
    # Distributions
    "InducedDistribution",
    "DistributionClass",
    "induce_conventional",
    "induce_vectorial",
    "entropy_key",
    "support_entropy",
    "compare_distribution_classes",
    # Analysis
    "NonlinearityReport",
    "PartialCensus",
    "analyze",
    "analyze_r1_fast",
    "analyze_range",
    "census_range",
    "merge_partial",
    "reports_to_markdown",
    "reports_to_csv",
    "reports_to_json",
    # Optimal functions
    "FunctionClass",
    "FunctionCensus",
    "SearchResult",
    "PerfectNonlinearCheck",
    "compare_function_classes",
    "optimal_search",
    "verify_optimal_equals_pn",
    "random_candidates",
    "bent_coordinate_candidates",
    "write_census_jsonl",
    "write_summary_json",
    # Reference data
    "EXAMPLE_ANF",
    "TABLE_1",
    "TABLE_2",
    "example_boolean_function",
    "example_inverse_sbox",
    "check_report",
    "reproduce_table",
    # Configuration management
    "AnalyzerConfig",
    "LimitsConfig",
    "ParallelConfig",
    "LoggingConfig",
    "OutputConfig",
    "ConfigManager",
    "get_config",
    "set_config",
    "update_config",
    "reset_config",
    "load_config_from_file",
    "save_config_to_file",
    # Exceptions
    "NonlinearityError",
    "ValidationError",
    "AnfParseError",
    "TruthTableFormatError",
    "ZeroMaskError",
    "RankOutOfRangeError",
    "ColumnMismatchError",
    "SingularMatrixError",
    "ArityError",
    "FieldError",
    "ReducibleModulusError",
    "DegreeMismatchError",
    "AnalysisError",
    "EmptySupportError",
    "DenominatorMismatchError",
    "ParameterMismatchError",
    "IncompleteCoverError",
    "SearchError",
    "SpaceTooLargeError",
    "ConfigurationError",
    # Validation
    "ArityValidator",
    "MaskValidator",
    "RankValidator",
    "TruthTableValidator",
    "HexTableValidator",
    "is_valid_arity",
    "is_valid_mask",
    "is_valid_rank",
    # Logging
    "configure_logging",
    "get_logger",
    "get_performance_tracker",
    "get_analysis_logger",
    "log_operation",
]
