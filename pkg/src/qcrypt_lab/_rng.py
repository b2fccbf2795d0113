"""Reproducible random substreams and chunked parallel trials.

Every sampled experiment splits its trials into fixed-size chunks.  Chunk
``c`` of stream ``key`` draws from ``SeedSequence(seed, spawn_key=(*key, c))``
so the result does not depend on how many worker threads run the chunks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

THREADS_ENV = "QCRYPT_LAB_THREADS"
CHUNK = 1 << 14


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream addressed by ``key`` under ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2 ** 64 - 1),
                                spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def thread_cap() -> int:
    """Worker count from the environment (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def chunked(trials: int, seed: int, key: tuple, fn: Callable[[np.random.Generator, int], np.ndarray],
            chunk: int = CHUNK) -> np.ndarray:
    """Run ``fn(rng, count)`` over chunks and sum the returned arrays.

    ``fn`` must return an array of per-category counts (or any array that
    merges by summation).
    """
    sizes = [min(chunk, trials - start) for start in range(0, trials, chunk)]
    jobs = [(c, n) for c, n in enumerate(sizes)]

    def run(job):
        c, n = job
        return np.asarray(fn(substream(seed, *key, c), n))

    workers = min(thread_cap(), max(1, len(jobs)))
    if workers == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    return np.sum(parts, axis=0)
