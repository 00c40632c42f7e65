"""
Logging setup shared by the CLI and the tests.
"""

import logging
import sys

from pythonjsonlogger import jsonlogger

TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str = "WARNING", json_format: bool = False) -> None:
    """
    Install a single stderr handler on the package logger.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ...)
        json_format: Use python-json-logger instead of the plain text format
    """
    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(TEXT_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))

    root = logging.getLogger("rackgeom")
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level.upper())
    root.propagate = False
