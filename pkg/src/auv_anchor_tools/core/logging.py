"""Logging for the ``auv_anchor_tools`` logger tree.

Numerical modules log under ``auv_anchor_tools.<module>``. Nothing is ever
written to stdout, which carries only the command summaries.
"""

import logging
import sys
from typing import Optional

ROOT_NAME = "auv_anchor_tools"
CONSOLE_FORMAT = "[%(levelname)s] %(message)s"
FILE_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

logger = logging.getLogger(ROOT_NAME)
logger.addHandler(logging.NullHandler())


def _handler(handler: logging.Handler, level: int, fmt: str) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt))
    return handler


def setup_logging(debug: bool = False, log_file: Optional[str] = None) -> logging.Logger:
    """Attach the stderr handler (WARNING, DEBUG with ``debug``) and an
    optional DEBUG file handler, replacing any handlers from earlier calls.
    """
    logger.handlers.clear()
    logger.setLevel(logging.DEBUG if debug or log_file else logging.WARNING)
    logger.addHandler(
        _handler(logging.StreamHandler(sys.stderr), logging.DEBUG if debug else logging.WARNING, CONSOLE_FORMAT)
    )
    if log_file:
        logger.addHandler(_handler(logging.FileHandler(log_file, encoding="utf-8"), logging.DEBUG, FILE_FORMAT))
    return logger


def get_logger(name: str) -> logging.Logger:
    return logger.getChild(name)
