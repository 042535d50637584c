"""
Deterministic chunked ensembles
"""
import logging

import numpy as np
from pathos.multiprocessing import ProcessingPool as Pool


logger = logging.getLogger(__name__)


def chunk_sizes(total, chunk_size):
    """Split total into fixed-size chunks, independent of worker count"""
    if total < 0 or chunk_size < 1:
        raise ValueError('total must be >= 0 and chunk_size >= 1')
    sizes = [chunk_size] * (total // chunk_size)
    if total % chunk_size:
        sizes.append(total % chunk_size)
    return sizes


def spawn_seeds(seed, count):
    """Return count independent child seed sequences of seed"""
    return np.random.SeedSequence(seed).spawn(count)


def run_chunks(fn, tasks, jobs=1):
    """Map fn over tasks, in task order, on up to jobs processes"""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    logger.debug('Running %d chunks on %d workers', len(tasks), jobs)
    pool = Pool(nodes=jobs)
    try:
        return pool.map(fn, tasks)
    finally:
        pool.close()
        pool.join()
        pool.clear()
