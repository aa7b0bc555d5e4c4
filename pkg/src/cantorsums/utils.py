#!/usr/bin/env python3

import time
from contextlib import contextmanager

import numpy as np

from cantorsums.exceptions import InvalidParameter

SEED_LIMIT = 2**64


class SingletonMeta(type):
    """Singleton metaclass"""

    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            instance = super().__call__(*args, **kwargs)
            cls._instances[cls] = instance
        return cls._instances[cls]

    def reset(cls):
        """丢弃缓存的实例（配置变化后重新加载）"""
        cls._instances.pop(cls, None)


def parse_int_list(text: str, flag: str = "--set") -> list[int]:
    """Parse "1,3,9" (spaces allowed) into a list of ints."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return [int(item) for item in items]
    except ValueError as e:
        raise InvalidParameter(f"cannot parse integer list {text!r}: {e}", flag=flag)


def seeded_rng(seed: int, flag: str = "--seed") -> np.random.Generator:
    """PCG64 generator for a 64-bit seed in [0, 2⁶⁴)."""
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed}", flag=flag)
    return np.random.Generator(np.random.PCG64(seed))


class Stopwatch:
    """Wall-clock timer reporting milliseconds."""

    def __init__(self):
        self._start = time.perf_counter()
        self.elapsed_ms: float | None = None

    def stop(self) -> float:
        self.elapsed_ms = round((time.perf_counter() - self._start) * 1000, 3)
        return self.elapsed_ms


@contextmanager
def stopwatch():
    watch = Stopwatch()
    try:
        yield watch
    finally:
        watch.stop()
