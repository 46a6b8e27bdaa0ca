"""Deterministic chunked parallel map.

Work is cut into chunks whose boundaries depend only on the problem size,
never on the thread count, and results come back in chunk order.  Any
reduction done over the returned list is therefore bit-identical for every
thread count.
"""

import os
import threading
from concurrent.futures import ThreadPoolExecutor

_lock = threading.Lock()
_threads = max(1, int(os.environ.get("LINNIKPS_THREADS", "1") or 1))


def set_threads(n):
    global _threads
    if n < 1:
        raise ValueError("thread count must be >= 1")
    with _lock:
        _threads = int(n)


def get_threads():
    return _threads


def chunk_bounds(n_items, chunk_size):
    """Half-open ``(lo, hi)`` index pairs covering ``range(n_items)``."""
    chunk_size = max(1, int(chunk_size))
    return [(lo, min(lo + chunk_size, n_items)) for lo in range(0, n_items, chunk_size)]


def chunked_map(func, n_items, chunk_size, threads=None):
    """Apply ``func(lo, hi)`` to each chunk; results are in chunk order."""
    bounds = chunk_bounds(n_items, chunk_size)
    threads = _threads if threads is None else threads
    if threads <= 1 or len(bounds) <= 1:
        return [func(lo, hi) for lo, hi in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: func(*b), bounds))


def ordered_map(func, items, threads=None):
    """``map`` over ``items`` with results in input order."""
    items = list(items)
    threads = _threads if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
