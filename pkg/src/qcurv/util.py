"""Serialization helpers and optional grid parallelism."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor


def sig12(x: float) -> float:
    """Round to 12 significant digits (canonical report formatting)."""
    return float(f"{x:.12g}")


def canonical(obj):
    """Round floats to 12 significant digits; nan/inf become null.

    Identical runs then serialize byte-identically and every emitted number
    re-parses as a finite float.
    """
    if isinstance(obj, float):
        return sig12(obj) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(canonical(obj), indent=2, allow_nan=False)


def dump_csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{sig12(v):.12g}" if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def thread_count() -> int:
    raw = os.environ.get("QCURV_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def grid_map(fn, items):
    """Map fn over items, threaded when QCURV_THREADS > 1 (order preserved)."""
    workers = thread_count()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
