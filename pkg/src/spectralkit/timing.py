"""Exclusive per-kernel wall-clock timers.

Timers nest: entering ``timers("fft")`` inside ``timers("rk")`` pauses the
``rk`` clock, so the recorded times never overlap and their sum is bounded by
the elapsed wall time.
"""

from __future__ import annotations

from contextlib import contextmanager, nullcontext
from time import perf_counter

KERNELS = (
    "fft",
    "rk",
    "curl",
    "vector_product",
    "projection",
    "nonlin",
    "dealias",
    "forcing",
    "cfl",
    "output",
)


class KernelTimers:
    def __init__(self):
        self.times: dict[str, float] = {}
        self.counts: dict[str, int] = {}
        self._stack: list[list] = []

    @contextmanager
    def __call__(self, name):
        now = perf_counter()
        if self._stack:
            parent = self._stack[-1]
            self._add(parent[0], now - parent[1])
        frame = [name, now]
        self._stack.append(frame)
        try:
            yield
        finally:
            end = perf_counter()
            self._stack.pop()
            self._add(name, end - frame[1])
            self.counts[name] = self.counts.get(name, 0) + 1
            if self._stack:
                self._stack[-1][1] = end

    def _add(self, name, dt):
        self.times[name] = self.times.get(name, 0.0) + dt

    def reset(self):
        self.times.clear()
        self.counts.clear()

    def total(self):
        return sum(self.times.values())

    def as_dict(self):
        return dict(self.times)


class _NullTimers:
    """Stand-in when no timing is wanted."""

    times: dict = {}

    def __call__(self, name):
        return nullcontext()

    def reset(self):
        pass

    def total(self):
        return 0.0

    def as_dict(self):
        return {}


NULL_TIMERS = _NullTimers()
