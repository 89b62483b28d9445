"""Thread-pool helper honoring the GMT_LAB_THREADS cap.

All hot-path objects in this package are immutable and the operations pure,
so unrestricted thread parallelism is safe.  Results are always returned in
input order, independent of schedule.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("GMT_LAB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    """Map fn over items, in parallel if GMT_LAB_THREADS > 1.

    Output order matches input order regardless of completion order.
    """
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
