"""Optional process-level parallelism for witness-space sweeps.

``SUPERALG_THREADS`` (positive integer) caps the worker count; unset means
serial evaluation.  Results are always merged in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .errors import SuperalgError

ENV_VAR = "SUPERALG_THREADS"


def worker_count() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise SuperalgError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return n


def map_ordered(fn, items: list) -> list:
    """``[fn(x) for x in items]``, possibly spread over worker processes."""
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))
