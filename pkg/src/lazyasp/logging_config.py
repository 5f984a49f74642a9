"""
Structured logging configuration using structlog.

Log lines are JSON documents written through the standard library handler
(stderr), so answer sets on stdout stay machine readable. Until
``configure_logging`` is called, importing the package installs a stderr
default that only lets warnings through.
"""

import logging
import sys

import structlog


def _processors(renderer) -> list:
    return [
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        # run_id from context if available
        structlog.contextvars.merge_contextvars,
        structlog.processors.format_exc_info,
        renderer,
    ]


def configure_logging(level: str = "WARNING", json: bool = True) -> None:
    """
    Configure process-wide structured logging using structlog.

    Sets up JSON-formatted logging with timestamps, log levels and the
    run identifier bound by the solver. Should be called once at startup.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json: Render JSON lines; otherwise use structlog's console renderer
    """
    renderer = structlog.processors.JSONRenderer() if json else structlog.dev.ConsoleRenderer()
    structlog.configure(
        processors=_processors(renderer),
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        level=getattr(logging, level.upper()),
        force=True,
    )


def install_default_logging() -> None:
    """
    Send warnings and errors to stderr as JSON if structlog is unconfigured.

    structlog's own default prints every level to stdout.
    """
    if structlog.is_configured():
        return
    structlog.configure(
        processors=_processors(structlog.processors.JSONRenderer()),
        wrapper_class=structlog.make_filtering_bound_logger(logging.WARNING),
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get a structlog logger instance.

    Args:
        name: Logger name (typically __name__ of the module)

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


install_default_logging()
