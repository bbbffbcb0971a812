"""Error handlers for the pcm-rank command line.

This module provides handler functions that turn exceptions into an exit code
and a problem document, and an ErrorHandlers class that dispatches an
exception to the most specific registered handler.
"""

import logging
from collections.abc import Callable
from typing import Any

import marshmallow as ma

from .exceptions import ConfigError, InternalError, PcmRankException

logger = logging.getLogger(__name__)

HandlerResult = tuple[int, dict[str, Any]]
Handler = Callable[[Any], HandlerResult]


def handle_rank_exception(e: PcmRankException) -> HandlerResult:
    """Handle PcmRankException and its subclasses.

    Args:
        e: The pcm-rank exception to handle

    Returns:
        Exit code and problem document
    """
    return int(e.EXIT_CODE), e.to_problem()


def handle_validation_error(e: ma.ValidationError) -> HandlerResult:
    """Handle marshmallow validation errors escaping a configuration load.

    Args:
        e: The validation error

    Returns:
        Exit code and problem document of the equivalent ConfigError
    """
    messages = e.messages if isinstance(e.messages, dict) else {"_schema": e.messages}
    exc = ConfigError(fields=messages)
    return handle_rank_exception(exc)


def handle_generic_exception(e: Exception) -> HandlerResult:
    """Handle generic Python exceptions.

    Args:
        e: The exception to handle

    Returns:
        Exit code and problem document of an InternalError
    """
    exc = InternalError(message=f"Unhandled Exception: {e}")
    logger.critical("Encountered Unhandled Exception!", extra=exc.get_debug_context())
    return handle_rank_exception(exc)


class ErrorHandlers:
    """Registry of exception handlers used by the CLI.

    Handlers are looked up along the exception's MRO, so the most specific
    registered type wins and ``Exception`` acts as the fallback.

    Example:
        >>> handlers = ErrorHandlers()
        >>> code, problem = handlers.handle(ConfigError("bad"))
        >>> code
        5
    """

    def __init__(self) -> None:
        self._handlers: dict[type[BaseException], Handler] = {}
        self.register_error_handler(PcmRankException, handle_rank_exception)
        self.register_error_handler(ma.ValidationError, handle_validation_error)
        self.register_error_handler(Exception, handle_generic_exception)

    def register_error_handler(self, exc_type: type[BaseException], handler: Handler) -> None:
        """Register a handler for an exception type.

        Args:
            exc_type: Exception class to handle
            handler: Callable returning (exit code, problem document)
        """
        self._handlers[exc_type] = handler

    def handle(self, e: BaseException) -> HandlerResult:
        """Dispatch an exception to its handler.

        Args:
            e: The exception to handle

        Returns:
            Exit code and problem document
        """
        for klass in type(e).__mro__:
            handler = self._handlers.get(klass)
            if handler is not None:
                return handler(e)
        return handle_generic_exception(Exception(str(e)))
