"""Optional thread parallelism, capped by the PALEY_THREADS variable."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Worker cap from PALEY_THREADS (default 1, minimum 1)."""
    try:
        v = int(os.environ.get("PALEY_THREADS", "1"))
    except ValueError:
        v = 1
    return max(1, v)


def pmap(fn, items):
    """Order-preserving map, threaded when PALEY_THREADS > 1.

    Results are identical to the serial map; threading only reorders the
    wall-clock execution, never the output."""
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
