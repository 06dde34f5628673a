import logging
import os
import sys
from pathlib import Path
from typing import Optional

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVEL_ENV = "NULLCURVE_LOG_LEVEL"


def default_level() -> str:
    """Return the log level named by NULLCURVE_LOG_LEVEL, or WARNING."""
    level = os.environ.get(LOG_LEVEL_ENV, "WARNING").upper()
    if level not in logging.getLevelNamesMapping():
        return "WARNING"
    return level


def setup_logger(
    name: str,
    level: Optional[str] = None,
    log_file: Optional[Path] = None,
    format_string: Optional[str] = None,
) -> logging.Logger:
    """
    Set up a logger with console and optional file output.

    Console output goes to stderr so that data written to stdout stays
    machine-readable.

    Args:
        name: Logger name (typically __name__)
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL);
            defaults to NULLCURVE_LOG_LEVEL or WARNING
        log_file: Optional path to log file
        format_string: Optional custom format string

    Returns:
        Configured logger instance
    """
    if format_string is None:
        format_string = DEFAULT_FORMAT
    if level is None:
        level = default_level()

    numeric_level = getattr(logging, level.upper())
    logger = logging.getLogger(name)
    logger.setLevel(numeric_level)
    formatter = logging.Formatter(format_string)

    # Avoid adding duplicate handlers; a reconfigure only changes levels
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(numeric_level)
    else:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(numeric_level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_file:
        target = str(log_file.resolve())
        has_file = any(
            isinstance(h, logging.FileHandler) and h.baseFilename == target
            for h in logger.handlers
        )
        if not has_file:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setLevel(numeric_level)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    # Library loggers hang below "src"; stop at this handler
    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger under the package root logger.

    Module loggers carry no handlers of their own; records propagate to the
    "src" root logger, which is configured once on first use.

    Args:
        name: Logger name

    Returns:
        Logger instance
    """
    root = logging.getLogger("src")
    if not root.handlers:
        setup_logger("src")
    return logging.getLogger(name)
