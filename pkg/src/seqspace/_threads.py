import os
from concurrent.futures import ThreadPoolExecutor


def max_threads():
    """Thread cap from ``SEQSPACE_THREADS`` (default 1)."""
    raw = os.environ.get("SEQSPACE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SEQSPACE_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def map_rows(func, rows):
    """Apply ``func`` to each row index, in a thread pool when allowed."""
    rows = list(rows)
    workers = min(max_threads(), len(rows))
    if workers <= 1:
        return [func(n) for n in rows]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, rows))
