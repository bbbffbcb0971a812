"""Exception classes for pcm-rank errors.

This module provides a hierarchy of exception classes for the library and the
command line, with RFC 7807-style problem documents, automatic logging, and
debug information.

Every exception carries the process exit code the CLI uses for it, in place of
an HTTP status:

    ======  ==========================================
    code    meaning
    ======  ==========================================
    0       success
    1       unexpected internal error
    2       parse or validation error
    3       disconnected comparison graph
    4       solver non-convergence
    5       bad configuration
    ======  ==========================================

Example problem document:
    {
        "type": "/errors/disconnected_graph_error",
        "title": "Disconnected Comparison Graph",
        "status": 3,
        "detail": "Comparison graph has 2 connected components",
        "fields": {"components": [["UKR", "RUS1"], ["HUN"]]}
    }
"""

import enum
import logging
import sys
import traceback
from pprint import pformat
from typing import Any

from ..utils import convert_camel_to_snake

logger = logging.getLogger(__name__)

ERROR_TYPE_BASE_URL = "/errors"


class ExitCode(enum.IntEnum):
    """Process exit codes of the ``pcm-rank`` command."""

    SUCCESS = 0
    INTERNAL_ERROR = 1
    INPUT_ERROR = 2
    DISCONNECTED_GRAPH = 3
    NON_CONVERGENCE = 4
    BAD_CONFIG = 5


def _is_debug_mode() -> bool:
    """Check if the package logger is enabled for DEBUG output."""
    return logging.getLogger("pcm_rank").isEnabledFor(logging.DEBUG)


def _get_error_type_uri(error_code: str) -> str:
    """Generate the RFC 7807 'type' URI for an error.

    Args:
        error_code: The snake_case error code

    Returns:
        URI string for the error type
    """
    return f"{ERROR_TYPE_BASE_URL}/{error_code}"


class PcmRankException(Exception):
    """Base exception class for all pcm-rank errors.

    Attributes:
        TITLE: Human-readable error title (default: "Error")
        MESSAGE_PREFIX: Prefix for error messages (default: "")
        EXIT_CODE: Exit code of the CLI for this error (default: 1)
        INCLUDE_TRACEBACK: Whether to include the traceback in the problem document.
            Set to None to include it only when DEBUG logging is enabled.
        debug_context: Additional context information for debugging

    Example:
        >>> class MyCustomError(PcmRankException):
        ...     TITLE = "Custom Error"
        ...     EXIT_CODE = ExitCode.INPUT_ERROR
        >>> raise MyCustomError("Something went wrong", team="UKR")
    """

    TITLE = "Error"
    MESSAGE_PREFIX = ""
    EXIT_CODE = ExitCode.INTERNAL_ERROR
    INCLUDE_TRACEBACK: bool | None = None
    debug_context: dict[str, Any] = {}

    def __init__(self, message: str | None = None, **kwargs: Any) -> None:
        """Initialize the exception.

        Args:
            message: Error message to display
            **kwargs: Additional context information (JSON-serialisable)
        """
        self.custom_args: dict[str, Any] = {k: v for k, v in kwargs.items() if v is not None}
        self.debug_context = self.get_debug_context(**kwargs)

        if message is None:
            self.message = self.MESSAGE_PREFIX or self.TITLE
        elif self.MESSAGE_PREFIX:
            self.message = f"{self.MESSAGE_PREFIX}: {message}"
        else:
            self.message = message

        super().__init__(self.message)

        self.log_exception()

    @classmethod
    def error_code(cls) -> str:
        """Get the error code for this exception type.

        Returns:
            Snake-case error code derived from class name
        """
        return convert_camel_to_snake(cls.__name__)

    def get_debug_context(self, **kwargs: Any) -> dict[str, Any]:
        """Get debugging context information.

        Args:
            **kwargs: Additional context information to include

        Returns:
            Dictionary containing debug context
        """
        return dict(kwargs)

    def _should_include_traceback(self) -> bool:
        if self.INCLUDE_TRACEBACK is not None:
            return self.INCLUDE_TRACEBACK
        return _is_debug_mode()

    def to_problem(self) -> dict[str, Any]:
        """Create an RFC 7807-style problem document.

        The document contains ``type``, ``title``, ``status`` (the exit code)
        and ``detail``; ``fields`` holds the keyword context, and ``debug``
        is only present when DEBUG logging is enabled.

        Returns:
            JSON-serialisable problem document
        """
        problem: dict[str, Any] = {
            "type": _get_error_type_uri(self.error_code()),
            "title": self.TITLE,
            "status": int(self.EXIT_CODE),
            "detail": self.message,
        }

        if self.custom_args:
            problem["fields"] = self.custom_args

        if _is_debug_mode():
            debug_info: dict[str, Any] = {
                "error_code": self.error_code(),
                "context": self.debug_context,
            }
            if self._should_include_traceback() and self.__traceback__ is not None:
                debug_info["traceback"] = traceback.format_list(traceback.extract_tb(self.__traceback__))
            problem["debug"] = debug_info

        return problem

    def log_exception(self) -> None:
        """Log the exception with the appropriate level based on severity."""
        try:
            msg = f"{self.TITLE} ({self.error_code()}): {self.message}"
            if self.custom_args:
                msg += f"\n{pformat(self.custom_args)}"

            extra: dict[str, Any] = {"error_code": self.error_code()}

            if self.EXIT_CODE == ExitCode.INTERNAL_ERROR:
                logger.critical(msg, extra=extra, exc_info=True)
            elif self.EXIT_CODE == ExitCode.NON_CONVERGENCE:
                logger.error(msg, extra=extra)
            else:
                logger.warning(msg, extra=extra)
        except Exception as e:
            logger.critical(f"Error logging exception: {e}", exc_info=True)


class InputError(PcmRankException):
    """Invalid tournament, roster, scale or ranking input."""

    TITLE = "Invalid Input"
    EXIT_CODE = ExitCode.INPUT_ERROR


class ResultsParseError(InputError):
    """A results or roster file could not be parsed.

    Attributes:
        line: 1-based line number of the offending row (header is line 1)
        fields: Dictionary of column names to error messages
        location: File the error was found in
    """

    TITLE = "Results Parse Error"

    line: int | None = None
    fields: dict[str, str] = {}
    location: str = "results"

    def __init__(
        self,
        message: str | None = None,
        line: int | None = None,
        fields: dict[str, str] | None = None,
        location: str = "results",
        **kwargs: Any,
    ) -> None:
        self.line = line
        self.fields = fields or {}
        self.location = location
        if message is None:
            message = "Malformed row"
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message, line=line, location=location, errors=self.fields or None, **kwargs)


class TournamentValidationError(InputError):
    """A tournament violates one of its structural invariants."""

    TITLE = "Invalid Tournament"


class ScaleError(InputError):
    """A ratio scale violates the draw, reciprocity or monotonicity rules."""

    TITLE = "Invalid Ratio Scale"


class PcmConstructionError(InputError):
    """A pairwise comparison matrix could not be built from the results."""

    TITLE = "Invalid Comparison Matrix"


class RankingMismatchError(InputError):
    """Two rankings do not cover the same teams."""

    TITLE = "Ranking Mismatch"


class DegenerateInputError(InputError):
    """Input is too small or too uniform for the requested computation."""

    TITLE = "Degenerate Input"


class DisconnectedGraphError(PcmRankException):
    """The comparison graph is not connected, so the weights are not unique."""

    TITLE = "Disconnected Comparison Graph"
    EXIT_CODE = ExitCode.DISCONNECTED_GRAPH

    def __init__(self, components: list[list[str]], message: str | None = None, **kwargs: Any) -> None:
        self.components = components
        if message is None:
            message = f"Comparison graph has {len(components)} connected components"
        super().__init__(message, components=components, **kwargs)


class ConvergenceError(PcmRankException):
    """An iterative solver stopped at its iteration cap.

    Attributes:
        residual: Achieved residual or last improvement when the cap was hit
        state: Last solver state, for callers that want to inspect it
    """

    TITLE = "Solver Did Not Converge"
    EXIT_CODE = ExitCode.NON_CONVERGENCE

    def __init__(
        self,
        message: str | None = None,
        residual: float | None = None,
        state: Any = None,
        **kwargs: Any,
    ) -> None:
        self.residual = residual
        self.state = state
        super().__init__(message, residual=residual, **kwargs)


class ConfigError(PcmRankException):
    """Invalid run configuration."""

    TITLE = "Invalid Configuration"
    EXIT_CODE = ExitCode.BAD_CONFIG

    def __init__(self, message: str | None = None, fields: dict[str, Any] | None = None, **kwargs: Any) -> None:
        self.fields = fields or {}
        if message is None:
            message = "Invalid configuration"
        super().__init__(message, errors=self.fields or None, **kwargs)


class InternalError(PcmRankException):
    """Unexpected failure."""

    TITLE = "Internal Error"
    EXIT_CODE = ExitCode.INTERNAL_ERROR

    def get_debug_context(self, **kwargs: Any) -> dict[str, Any]:
        """Get debugging context including exception information.

        Args:
            **kwargs: Additional context information

        Returns:
            Dictionary with base context plus exception details
        """
        debug_context = super().get_debug_context(**kwargs)

        exc_type, exc_value, _exc_traceback = sys.exc_info()
        if exc_type is not None:
            debug_context["exception"] = {
                "type": str(exc_type.__name__),
                "value": str(exc_value),
            }
        return debug_context
