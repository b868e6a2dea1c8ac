"""Concurrent repeats with deterministic per-repeat seeds."""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ldpbayes.inference import PosteriorSampler
from ldpbayes.settings import Config

logger = logging.getLogger(__name__)

_local = threading.local()


def repeat_rng(seed, *counters):
    """Generator for one unit of work, derived from the master seed and its position."""
    return np.random.default_rng([seed, *counters])


def sampler_for(model, config):
    """Per-thread compiled sampler, reused across repeats with same-shaped data."""
    cache = getattr(_local, "samplers", None)
    if cache is None:
        cache = _local.samplers = {}
    key = (model, config)
    if key not in cache:
        cache[key] = PosteriorSampler(model, config)
    return cache[key]


def run_repeats(func, tasks, threads=None):
    """Map `func` over `tasks` on a thread pool; results keep task order."""
    tasks = list(tasks)
    workers = max(1, min(threads or Config.threads(), len(tasks) or 1))
    logger.debug("Running %d tasks on %d threads", len(tasks), workers)
    if workers == 1:
        return [func(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))
