"""Maximize monotone submodular objectives over sliding windows of a stream."""

__version__ = "0.1.0"

from .core import (
    BestSoFar,
    Bounds,
    CountingOracle,
    Item,
    StreamAlgorithm,
    SubmodularOracle,
    Window,
    monotone_wrap,
    window_members,
)
from .objectives import (
    CholState,
    CoverageOracle,
    IVMOracle,
    KernelParams,
    NumericDegeneracyError,
    StaleExtensionError,
    chol_extend,
    coverage_value,
    estimate_upper_bound,
    ivm_marginal,
    ivm_value,
    se_kernel,
)
from .streaming import SieveStream, brute_force_opt, greedy_select, threshold_grid
from .sliding import (
    PrioritySample,
    SieveGreedy,
    SieveNaive,
    SlidingWindowDP,
    SlidingWindowReduction,
    ThresholdGreedy,
    dp_threshold_grid,
    sieve_reduction,
)
from .ingest import (
    DatasetStore,
    ParseError,
    gen_drift_vectors,
    gen_set_stream,
    load_dense_csv,
    load_set_stream,
    normalize_columns_then_rows,
    write_set_stream,
)
from .bench import (
    MetricsRecord,
    RunConfig,
    parse_cli,
    run_benchmark,
    run_many,
    write_metrics_csv,
)

__all__ = [
    "BestSoFar",
    "Bounds",
    "CholState",
    "CountingOracle",
    "CoverageOracle",
    "DatasetStore",
    "IVMOracle",
    "Item",
    "KernelParams",
    "MetricsRecord",
    "NumericDegeneracyError",
    "ParseError",
    "PrioritySample",
    "RunConfig",
    "SieveGreedy",
    "SieveNaive",
    "SieveStream",
    "SlidingWindowDP",
    "SlidingWindowReduction",
    "StaleExtensionError",
    "StreamAlgorithm",
    "SubmodularOracle",
    "ThresholdGreedy",
    "Window",
    "brute_force_opt",
    "chol_extend",
    "coverage_value",
    "dp_threshold_grid",
    "estimate_upper_bound",
    "gen_drift_vectors",
    "gen_set_stream",
    "greedy_select",
    "ivm_marginal",
    "ivm_value",
    "load_dense_csv",
    "load_set_stream",
    "monotone_wrap",
    "normalize_columns_then_rows",
    "parse_cli",
    "run_benchmark",
    "run_many",
    "se_kernel",
    "sieve_reduction",
    "threshold_grid",
    "window_members",
    "write_metrics_csv",
    "write_set_stream",
]
