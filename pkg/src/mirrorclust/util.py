"""Seed derivation and deterministic task parallelism."""
from __future__ import annotations

import hashlib
import struct
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def derive_seed(seed: int, *parts: object) -> int:
    """Derive a 64-bit task seed from a root seed and a label path.

    Stable across platforms and process invocations, so parallel tasks are
    reproducible regardless of execution order.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack(">Q", int(seed) & 0xFFFFFFFFFFFFFFFF))
    for part in parts:
        h.update(b"\x1f")
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest(), "big")


def spawn_rng(seed: int, *parts: object) -> np.random.Generator:
    """Generator seeded by ``derive_seed(seed, *parts)``."""
    return np.random.default_rng(derive_seed(seed, *parts))


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Map ``fn`` over ``items``, optionally on a thread pool.

    Results come back in input order, so output is identical for any thread
    count as long as ``fn`` itself is deterministic.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def quantiles(values: Sequence[float], qs: Sequence[float]) -> list[float]:
    return [float(np.quantile(np.asarray(values, dtype=float), q)) for q in qs]
