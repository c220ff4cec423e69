"""Input validation utilities for command-line flags."""

import math
from typing import Optional, Tuple

MAX_SEED = 2**64 - 1


def validate_seed(seed_input: str) -> Tuple[bool, Optional[int], Optional[str]]:
    """Validate a ``--seed`` value.

    Args:
        seed_input: Decimal or 0x-prefixed hexadecimal string

    Returns:
        Tuple of (is_valid, seed, error_message)
    """
    text = (seed_input or "").strip().replace("_", "")
    if not text:
        return False, None, "Seed must not be empty"
    try:
        seed = int(text, 16) if text.lower().startswith("0x") else int(text, 10)
    except ValueError:
        return (
            False,
            None,
            (
                f"Invalid seed: {seed_input!r}\n"
                "  ✓ Right: 20250101 or 0x1f2e3d4c"
            ),
        )
    if not 0 <= seed <= MAX_SEED:
        return False, None, f"Seed {seed} is outside the unsigned 64-bit range"
    return True, seed, None


def validate_step(step: Optional[float]) -> Tuple[bool, Optional[str]]:
    """Validate a ``--step-m`` traversal step.

    Returns:
        Tuple of (is_valid, error_message)
    """
    if step is None:
        return True, None
    if not math.isfinite(step) or step <= 0:
        return False, f"Traversal step must be a positive number of meters, got {step}"
    return True, None


def validate_workers(workers: Optional[int]) -> Tuple[bool, Optional[str]]:
    if workers is None:
        return True, None
    if workers < 1:
        return False, f"--workers must be >= 1, got {workers}"
    return True, None
