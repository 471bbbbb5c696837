"""Collects one line per acceptance criterion for the terminal summary."""

from __future__ import annotations

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        bound = f", limit {limit:g} s" if limit is not None else ""
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f} s{bound})"
        LINES.append(line)
        print(line)
