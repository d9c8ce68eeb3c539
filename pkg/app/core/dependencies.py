"""
Core dependencies and utilities
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterator

logger = logging.getLogger("app")


@contextmanager
def worker_pool(jobs: int = 1) -> Iterator[Callable]:
    """
    Order-preserving map over pages

    Yields the builtin map for a single job and a process pool's map otherwise;
    results come back in input order either way.
    """
    if jobs <= 1:
        yield map
        return
    logger.info(f"Starting worker pool with {jobs} processes")
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        yield executor.map
    logger.info("Worker pool shut down")
