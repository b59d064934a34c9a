"""Worker-pool helper shared by quadrature and point-sampling checks.

Results always come back in submission order, so sums over them are reproducible no
matter how many threads ran.

Dependencies: concurrent.futures, os (stdlib).
"""

from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from .constants import THREADS_ENV_VAR
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Number of worker threads requested through the environment.

    :return: 0 for sequential execution.
    :raises ConfigurationError: If the variable is not a non-negative integer.
    """
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV_VAR}={raw!r} is not an integer") from None
    if value < 0:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be >= 0, got {value}")
    return value


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Apply ``fn`` to every item, possibly concurrently, keeping input order.

    :param fn: Pure function of one item.
    :param items: Work items.
    :return: Results in the order of ``items``.
    """
    work = list(items)
    workers = worker_count()
    if workers <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    logger.debug("dispatching %d work items to %d threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
