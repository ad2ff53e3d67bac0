"""Worker-count control: TROPDIV_THREADS caps pool sizes (default 1)."""

from __future__ import annotations

import os


def max_workers(task_count: int | None = None) -> int:
    raw = os.environ.get("TROPDIV_THREADS", "1")
    try:
        n = max(1, int(raw))
    except ValueError:
        n = 1
    if task_count is not None:
        n = min(n, max(1, task_count))
    return n
