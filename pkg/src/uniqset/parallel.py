"""Partition a deterministic work list across a process pool."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def chunk_bounds(total: int, parts: int) -> list[tuple[int, int]]:
    """Split range(total) into at most `parts` contiguous [start, end) pieces."""
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    size = (total + parts - 1) // parts
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def map_chunks[T, R](
    task: Callable[[Sequence[T]], R], items: Sequence[T], workers: int = 1
) -> list[R]:
    """Apply task to contiguous chunks of items, in order.

    With workers > 1 the chunks run in a ProcessPoolExecutor, so task and
    items must be picklable. Results keep the chunk order.
    """
    bounds = chunk_bounds(len(items), workers)
    chunks = [items[start:end] for start, end in bounds]
    if workers <= 1 or len(chunks) <= 1:
        return [task(chunk) for chunk in chunks]
    logger.debug(
        "dispatching %d items in %d chunks to %d workers", len(items), len(chunks), workers
    )
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, chunks))
