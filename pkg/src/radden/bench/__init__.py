"""Benchmark harness: config parsing, dataset generation, sweeps, reports."""
from .config import (ALGORITHMS, BaselineSpec, DatasetSpec, ExperimentConfig,
                     SweepSpec, TrainSpec, load_config, parse_config)
from .datasets import generate_pair
from .report import summarize, write_plot_data
from .sweep import (ResultRow, csv_content_hash, evaluate_grid_point,
                    load_rows, run_sweep, write_rows)
from .tuning import grid_search

__all__ = [
    "ALGORITHMS", "BaselineSpec", "DatasetSpec", "ExperimentConfig",
    "SweepSpec", "TrainSpec", "load_config", "parse_config", "generate_pair",
    "summarize", "write_plot_data", "ResultRow", "csv_content_hash",
    "evaluate_grid_point", "grid_search", "load_rows", "run_sweep",
    "write_rows",
]
