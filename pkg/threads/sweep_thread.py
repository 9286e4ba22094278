"""
Worker pool for partitionable sweeps and searches.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence

from utils.config import Config
from utils.logger import logger


def _run_batch(fn: Callable[[Any], Any], batch: Sequence[Any]) -> List[Any]:
    return [fn(item) for item in batch]


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Worker count: explicit value, else the config's `workers`, where 0 means
    one less than the CPU count (at least 1).
    """
    if workers is None:
        workers = Config().get_int("workers")
    if workers <= 0:
        workers = max(1, (os.cpu_count() or 2) - 1)
    return workers


class SweepRunner:
    """
    Maps a function over items in batches on an executor.

    Processes are used for CPU-bound work; with a single worker (or
    use_threads set) a thread pool runs the batches instead. Results come
    back in input order.
    """

    def __init__(self, workers: Optional[int] = None, use_threads: bool = False,
                 progress: Optional[Callable[[int, int], None]] = None):
        """
        Args:
            workers (int, optional): Worker count (see resolve_workers)
            use_threads (bool): Force a ThreadPoolExecutor
            progress (callable, optional): Called with (batches_done, batches_total)
        """
        self.max_workers = resolve_workers(workers)
        self.use_threads = use_threads or self.max_workers == 1
        self.progress = progress

    def map(self, fn: Callable[[Any], Any], items: Sequence[Any]) -> List[Any]:
        """
        Apply fn to every item.

        Args:
            fn (callable): Module-level function (picklable for process pools)
            items (Sequence): Work items

        Returns:
            List: fn(item) for each item, in order
        """
        items = list(items)
        if not items:
            return []
        executor_class = ThreadPoolExecutor if self.use_threads else ProcessPoolExecutor

        # Split items into batches for parallel processing
        batch_size = max(1, len(items) // self.max_workers)
        batches = [items[i:i + batch_size] for i in range(0, len(items), batch_size)]
        logger.info(f"Running {len(items)} items in {len(batches)} batches on "
                    f"{self.max_workers} {'threads' if self.use_threads else 'processes'}")

        start = time.time()
        results: List[Any] = []
        with executor_class(max_workers=self.max_workers) as executor:
            futures = [executor.submit(_run_batch, fn, batch) for batch in batches]
            for i, future in enumerate(futures):
                results.extend(future.result())
                if self.progress:
                    self.progress(i + 1, len(batches))
                logger.debug(f"Progress: {i + 1}/{len(batches)} batches")

        logger.info(f"Finished {len(items)} items in {time.time() - start:.2f} seconds")
        return results
