"""Phase timer shared by the engine, the tour and the bench harness."""
from __future__ import annotations

import time
from collections import defaultdict
from contextlib import contextmanager
from typing import Iterator

PHASES = (
    "decomposition",
    "spqr build",
    "preprocess-up",
    "preprocess-down",
    "skeleton embedding",
    "node processing",
    "pertinent embedding",
    "green-graph build",
    "peeling",
    "tour",
    "verify",
)


class Timer:
    """Accumulates wall-clock seconds per phase and free-form counters."""

    def __init__(self) -> None:
        self.seconds: dict[str, float] = defaultdict(float)
        self.counts: dict[str, int] = defaultdict(int)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.seconds[name] += time.perf_counter() - t0

    def add(self, name: str, seconds: float) -> None:
        self.seconds[name] += seconds

    def count(self, name: str, k: int = 1) -> None:
        self.counts[name] += k

    def micros(self) -> dict[str, int]:
        return {k: int(round(v * 1e6)) for k, v in self.seconds.items()}


class NullTimer(Timer):
    """Timer that records nothing; the default when no one is measuring."""

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        yield

    def add(self, name: str, seconds: float) -> None:
        pass

    def count(self, name: str, k: int = 1) -> None:
        pass
