"""
Fixed-partition parallel map and reductions.

Work is split into chunks of ``settings.PARALLEL_CHUNK`` items regardless of
how many threads run them, and partial results are combined by a pairwise
tree in chunk order. A result is therefore bitwise identical for any
``UNIFORMITY_THREADS`` value.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def chunks(items: Sequence[T], size: int | None = None) -> list[Sequence[T]]:
    size = max(1, size or settings.PARALLEL_CHUNK)
    return [items[i:i + size] for i in range(0, len(items), size)]


def ordered_map(func: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply ``func`` to every item; results come back in item order."""
    items = list(items)
    threads = max(1, settings.UNIFORMITY_THREADS)
    if threads == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def tree_sum(values: Sequence):
    """Pairwise sum in a fixed order; returns 0 for an empty sequence."""
    values = list(values)
    if not values:
        return 0
    while len(values) > 1:
        paired = [values[i] + values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


def chunked_sum(func: Callable[[T], R], items: Sequence[T]):
    """
    Sum ``func(item)`` over items with a thread-count independent order.

    Args:
        func: Per-item evaluation
        items: Items to evaluate

    Returns:
        Tree-reduced total of the per-chunk sequential sums
    """
    def run_chunk(chunk: Sequence[T]):
        return tree_sum([func(item) for item in chunk])

    parts = chunks(items)
    logger.debug(f"chunked_sum: {len(items)} items in {len(parts)} chunks")
    return tree_sum(ordered_map(run_chunk, parts))
