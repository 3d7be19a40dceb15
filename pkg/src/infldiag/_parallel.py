"""Deterministic parallel mapping.

Workers receive fully-resolved argument tuples and results land in
pre-indexed slots, so the output is identical for serial and parallel
execution. Fork start method keeps warm numba kernels available in children.
"""

import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor


def default_threads():
    env = os.environ.get("INFLDIAG_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn, items, threads):
    """Ordered map of ``fn`` over ``items`` with ``threads`` processes.

    ``threads <= 1`` (or a single item) runs serially in-process.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    workers = min(threads, len(items))
    try:
        ctx = mp.get_context("fork")
    except ValueError:  # pragma: no cover - non-posix
        ctx = mp.get_context()
    chunk = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(fn, items, chunksize=chunk))
