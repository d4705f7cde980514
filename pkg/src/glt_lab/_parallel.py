"""Thread-pool helper honouring the ``GLT_LAB_THREADS`` cap."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "GLT_LAB_THREADS"


def thread_count() -> int:
    """Worker cap: ``$GLT_LAB_THREADS`` if set to a positive int, else CPU count."""
    raw = os.environ.get(ENV_VAR, "").strip()
    if raw:
        try:
            v = int(raw)
            if v >= 1:
                return v
        except ValueError:
            pass
    return os.cpu_count() or 1


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Order-preserving map; runs serially when only one worker is allowed."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
