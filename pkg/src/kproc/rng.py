"""Deterministic randomness and mergeable Monte Carlo reductions.

Every random draw in the package flows through a counter-based Philox
generator keyed by a (seed, stream) pair: equal pairs reproduce bit-identical
draws, distinct pairs are statistically independent. Monte Carlo drivers cut
the replica budget into fixed-size chunks, give chunk k the stream
``base_stream + k``, and reduce chunk results in chunk order, so estimates are
bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = ["SeedSpec", "MCEstimate", "DEFAULT_CHUNK", "run_chunked", "map_chunks"]

_MAX_64 = 2**64 - 1

# Replicas per chunk. Fixed so that the chunk -> stream assignment (and hence
# every estimate) does not depend on the worker count.
DEFAULT_CHUNK = 32768


@dataclass(frozen=True)
class SeedSpec:
    """Key of one reproducible random stream.

    seed: 64-bit base seed shared by an experiment.
    stream: substream index; chunked drivers advance it per chunk.
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or not 0 <= self.seed <= _MAX_64:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not isinstance(self.stream, int) or not 0 <= self.stream <= _MAX_64:
            raise ValueError(f"stream must be an integer in [0, 2^64), got {self.stream!r}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, offset: int) -> "SeedSpec":
        """The key for substream ``stream + offset`` under the same seed."""
        return SeedSpec(self.seed, self.stream + int(offset))


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo mean with its standard error.

    rejected counts replicas excluded from the average (see lambda_mc).
    """

    value: float
    std_error: float
    reps: int
    rejected: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"estimate must be finite, got {self.value!r}")
        if not self.std_error >= 0.0:
            raise ValueError(f"std_error must be nonnegative, got {self.std_error!r}")
        if self.reps < 0 or self.rejected < 0:
            raise ValueError("reps and rejected must be nonnegative")


def _chunk_counts(reps: int, chunk_size: int) -> list[int]:
    full, rest = divmod(reps, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _run_one(task):
    fn, count, seed, args = task
    return fn(count, seed, *args)


def map_chunks(fn, reps, seed, args=(), workers=1, chunk_size=DEFAULT_CHUNK):
    """Run ``fn(count, chunk_seed, *args)`` over fixed-size chunks.

    Yields the per-chunk results in chunk order regardless of worker count.
    ``fn`` must be a picklable top-level function when workers > 1.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    counts = _chunk_counts(int(reps), int(chunk_size))
    tasks = [(fn, count, seed.child(k), args) for k, count in enumerate(counts)]
    if workers <= 1 or len(tasks) == 1:
        for task in tasks:
            yield _run_one(task)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run_one, tasks, chunksize=1)


def run_chunked(fn, reps, seed, args=(), workers=1, chunk_size=DEFAULT_CHUNK) -> np.ndarray:
    """Sum the ndarray results of ``fn`` over chunks, in chunk order.

    The elementwise float additions happen in a fixed order, so the reduction
    is bit-stable across worker counts.
    """
    total = None
    for res in map_chunks(fn, reps, seed, args, workers, chunk_size):
        total = np.asarray(res, dtype=np.float64) if total is None else total + res
    return total


def mean_and_se(count: float, total: float, total_sq: float) -> tuple[float, float]:
    """Mean and standard error from (count, sum, sum of squares)."""
    if count <= 0:
        raise ValueError("no accepted replicas to average")
    mean = total / count
    if count == 1:
        return mean, 0.0
    var = max(0.0, (total_sq - total * total / count) / (count - 1))
    return mean, math.sqrt(var / count)
