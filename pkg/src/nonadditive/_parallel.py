"""Thread-count plumbing shared by the searches and the command line."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "HARAN_LAB_THREADS"


def thread_count(default: int = 1) -> int:
    raw = os.environ.get(ENV_VAR)
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        return default
    return max(1, n)


def ordered_map(fn, items, threads: int | None = None) -> list:
    """``[fn(x) for x in items]``, possibly on a thread pool; order is preserved."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
