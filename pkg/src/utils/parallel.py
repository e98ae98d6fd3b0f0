"""
Worker Pool
Order-preserving map over picklable task descriptors
"""
import logging
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def run_chunks(fn, tasks: list, jobs: int = 1) -> list:
    """
    Apply fn to each task and return results in task order.

    Args:
        fn: Top-level (picklable) function of one argument
        tasks: Task descriptors
        jobs: Worker processes; 1 runs in-process

    Returns:
        List of results aligned with tasks
    """
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    logger.debug("dispatching %d tasks to %d workers", len(tasks), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))
