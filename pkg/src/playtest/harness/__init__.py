"""Experiment runner, report writer, and the command line interface."""

from .config import (
    Budget,
    ConfigError,
    ExperimentConfig,
    load_experiment_config,
    parse_experiment_config,
)
from .report import load_report_bundle, summarize, write_report
from .runner import MissingAsset, ReportBundle, run_experiment

__all__ = [
    "Budget",
    "ConfigError",
    "ExperimentConfig",
    "MissingAsset",
    "ReportBundle",
    "load_experiment_config",
    "load_report_bundle",
    "parse_experiment_config",
    "run_experiment",
    "summarize",
    "write_report",
]
