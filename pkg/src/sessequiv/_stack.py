"""Run deeply recursive searches on a thread with a large stack."""

from __future__ import annotations

import sys
import threading
from typing import Any, Callable, TypeVar

R = TypeVar("R")

_STACK_BYTES = 512 * 1024 * 1024
_RECURSION = 200_000
_lock = threading.Lock()
_local = threading.local()


def run_deep(fn: Callable[..., R], *args: Any) -> R:
    """Call ``fn(*args)`` with room for ~10^5 nested Python frames.

    Exceptions propagate to the caller unchanged. Nested calls run inline.
    """
    if getattr(_local, "deep", False):
        return fn(*args)
    box: dict = {}

    def target() -> None:
        _local.deep = True
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised in the caller's thread
            box["error"] = exc

    with _lock:
        # the limit is interpreter-wide; raising it once is harmless
        if sys.getrecursionlimit() < _RECURSION:
            sys.setrecursionlimit(_RECURSION)
        old_size = threading.stack_size()
        try:
            threading.stack_size(_STACK_BYTES)
            worker = threading.Thread(target=target, name="sessequiv-search")
            worker.start()
        finally:
            threading.stack_size(old_size)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box["value"]
