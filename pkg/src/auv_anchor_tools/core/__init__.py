"""Core utilities for AUV Anchor Tools"""

from .errors import (
    EXIT_INFEASIBLE,
    EXIT_NUMERIC,
    EXIT_VALIDATION,
    AnchorToolsError,
    InfeasibleError,
    InputError,
    NumericError,
)
from .logging import setup_logging, get_logger, logger
from .renderer import DisplayRenderer
from .artifacts import ArtifactWriter
from .validators import validate_seed, validate_step, validate_workers

__all__ = [
    "EXIT_VALIDATION",
    "EXIT_INFEASIBLE",
    "EXIT_NUMERIC",
    "AnchorToolsError",
    "InputError",
    "InfeasibleError",
    "NumericError",
    "setup_logging",
    "get_logger",
    "logger",
    "DisplayRenderer",
    "ArtifactWriter",
    "validate_seed",
    "validate_step",
    "validate_workers",
]
