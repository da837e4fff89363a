"""
Worker Pool and Deterministic Reductions

Long sweeps (over secants, Dijkstra sources or query rows) are cut into
fixed-size chunks. Chunks may run on a thread pool, but their partial results
are always combined in chunk order by a fixed pairwise tree, so the answer
does not depend on how many workers ran.

Usage:
    configure_threads(4)
    partials = map_chunks(lambda a, b: float(np.sum(x[a:b])), chunk_bounds(len(x)))
    total = tree_sum(partials)
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Secants per chunk; part of the reduction shape, so it must not depend on the thread count
SECANT_CHUNK = 1 << 16

_threads = 1


def configure_threads(threads: int) -> None:
    """Set the worker count used by map_chunks."""
    global _threads
    _threads = max(1, int(threads))
    logger.debug("worker pool capped at %d threads", _threads)


@lru_cache(maxsize=None)
def _pool(threads: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="secsel")


def chunk_bounds(n_items: int, chunk: int = SECANT_CHUNK) -> List[Tuple[int, int]]:
    """Split range(n_items) into consecutive (start, stop) pieces of at most ``chunk``."""
    return [(start, min(start + chunk, n_items)) for start in range(0, n_items, chunk)]


def map_chunks(fn: Callable[[int, int], T], bounds: Sequence[Tuple[int, int]]) -> List[T]:
    """Apply ``fn(start, stop)`` to every chunk and return the results in chunk order."""
    if _threads <= 1 or len(bounds) <= 1:
        return [fn(start, stop) for start, stop in bounds]
    return list(_pool(_threads).map(lambda bound: fn(*bound), bounds))


def tree_sum(values: Sequence[float]) -> float:
    """Pairwise sum whose association order only depends on len(values)."""
    values = list(values)
    if not values:
        return 0.0
    while len(values) > 1:
        paired = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return float(values[0])
