"""Order-preserving parallel map over a thread pool."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..config import RuntimeConfig

logger = logging.getLogger("auv_anchor_tools.parallel")

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: Optional[int] = None,
) -> List[R]:
    """Apply ``func`` to every item and return results in input order.

    Work is spread over a thread pool sized from ``max_workers`` or the
    runtime setting. With one worker the map runs inline, which keeps
    tracebacks simple when debugging.
    """
    items = list(items)
    workers = max_workers or RuntimeConfig.get_max_workers()
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("Mapping %d tasks over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        # Executor.map yields in submission order regardless of completion order
        return list(pool.map(func, items))
