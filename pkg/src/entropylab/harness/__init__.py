"""Config-driven experiment runner, report emitter, and result cache."""

from .cache import cache_dir, cache_lookup, cache_store
from .config import (
    EXPERIMENT_KINDS,
    ConfigError,
    ExperimentConfig,
    default_config,
    parse_config,
)
from .reporting import format_report, load_report, summary_json, write_report
from .runner import CaseRecord, RunReport, Verdict, config_hash, run_experiment

__all__ = [
    "EXPERIMENT_KINDS",
    "CaseRecord",
    "ConfigError",
    "ExperimentConfig",
    "RunReport",
    "Verdict",
    "cache_dir",
    "cache_lookup",
    "cache_store",
    "config_hash",
    "default_config",
    "format_report",
    "load_report",
    "parse_config",
    "run_experiment",
    "summary_json",
    "write_report",
]
