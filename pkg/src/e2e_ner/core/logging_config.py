"""
Logging configuration.

stdlib logging owns the handlers (stderr, optional file); structlog renders
key-value events through it.
"""

import logging
import sys
from pathlib import Path

import structlog

_structlog_configured = False


def _configure_structlog(fmt: str = "console") -> None:
    global _structlog_configured

    renderer: structlog.types.Processor
    if fmt == "json":
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.processors.KeyValueRenderer(
            key_order=["event"], sort_keys=True
        )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    _structlog_configured = True


def setup_logging(
    level: str = "INFO", log_file: str | None = None, fmt: str = "console"
) -> None:
    """Configure application logging; log lines go to stderr only."""

    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    root_logger = logging.getLogger()
    root_logger.setLevel(level.upper())

    # drop handlers from a previous setup
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(log_format))
    root_logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(log_format))
        root_logger.addHandler(file_handler)

    # quiet third-party loggers
    logging.getLogger("asyncio").setLevel(logging.WARNING)
    logging.getLogger("markdown_it").setLevel(logging.WARNING)

    _configure_structlog(fmt)

    get_logger(__name__).debug("logging_configured", level=level, log_file=log_file)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Structured logger bound to ``name``."""
    if not _structlog_configured:
        _configure_structlog()
    return structlog.stdlib.get_logger(name)
