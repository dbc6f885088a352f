"""Ordered fan-out over a thread pool.

The kernels release the GIL inside LAPACK, so threads are enough. Results
always come back in input order and every reduction downstream runs in that
order, which is what keeps outputs byte-identical whatever
``MODALSPARSE_THREADS`` is set to.
"""

from __future__ import annotations

import concurrent.futures
from collections.abc import Callable, Iterable
from typing import TypeVar

from modalsparse.config import worker_count

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(item) for item in items]``, possibly in parallel.

    ``workers`` defaults to ``config.worker_count()``; 1 runs inline with no
    pool at all. An exception from any item propagates to the caller.
    """
    items = list(items)
    workers = worker_count() if workers is None else max(1, workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
