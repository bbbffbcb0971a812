"""Error handling module for pcm-rank.

This module provides exception classes and error handlers for the library
and the command line.
"""

from .error_handlers import (
    ErrorHandlers,
    handle_generic_exception,
    handle_rank_exception,
    handle_validation_error,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateInputError,
    DisconnectedGraphError,
    ExitCode,
    InputError,
    InternalError,
    PcmConstructionError,
    PcmRankException,
    RankingMismatchError,
    ResultsParseError,
    ScaleError,
    TournamentValidationError,
)

__all__ = [
    # Exception classes
    "ExitCode",
    "PcmRankException",
    "InputError",
    "ResultsParseError",
    "TournamentValidationError",
    "ScaleError",
    "PcmConstructionError",
    "RankingMismatchError",
    "DegenerateInputError",
    "DisconnectedGraphError",
    "ConvergenceError",
    "ConfigError",
    "InternalError",
    # Error handlers
    "ErrorHandlers",
    "handle_rank_exception",
    "handle_validation_error",
    "handle_generic_exception",
]
