"""structlog configuration driven by LoggingSettings."""

import logging
import sys

import structlog

from src.utils.config import LoggingSettings


def configure_logging(settings: LoggingSettings) -> None:
    """Install console or JSON rendering for all structlog loggers.

    Args:
        settings: Logging section of the application settings.
    """
    level = getattr(logging, settings.level.value)
    stream = settings.log_file.open("a", encoding="utf-8") if settings.log_file else sys.stderr

    processors: list[structlog.typing.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
    ]
    if settings.include_timestamps:
        processors.append(structlog.processors.TimeStamper(fmt="iso", utc=True))
    if settings.format == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=stream),
        cache_logger_on_first_use=False,
    )
