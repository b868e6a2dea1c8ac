from ldpbayes.bench.config import EXPERIMENTS, DataConfig, ExperimentConfig, SGDOptions, load_config
from ldpbayes.bench.experiments import (
    EXPERIMENT_RUNNERS,
    CoverageResult,
    ExperimentTable,
    run_coverage,
    run_ecdf_deviation,
    run_histogram_compare,
    run_regression_compare,
)
from ldpbayes.bench.metrics import auc, ecdf, ecdf_deviation, is_trivial, is_unordered, is_unusable, rmse
from ldpbayes.bench.output import read_table, write_result, write_table

__all__ = [
    "EXPERIMENTS",
    "EXPERIMENT_RUNNERS",
    "CoverageResult",
    "DataConfig",
    "ExperimentConfig",
    "ExperimentTable",
    "SGDOptions",
    "auc",
    "ecdf",
    "ecdf_deviation",
    "is_trivial",
    "is_unordered",
    "is_unusable",
    "load_config",
    "read_table",
    "rmse",
    "run_coverage",
    "run_ecdf_deviation",
    "run_histogram_compare",
    "run_regression_compare",
    "write_result",
    "write_table",
]
