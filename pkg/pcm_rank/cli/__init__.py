"""Command line and the ranking pipeline behind it."""

from .config import Method, Metric, OutputFormat, RunConfig, RunConfigSchema, load_run_config
from .pipeline import RunResult, check_report, run

__all__ = [
    # Configuration
    "RunConfig",
    "RunConfigSchema",
    "load_run_config",
    "Method",
    "Metric",
    "OutputFormat",
    # Pipeline
    "run",
    "RunResult",
    "check_report",
]
