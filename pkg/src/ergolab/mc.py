"""Batch-means Monte Carlo with reproducible per-batch streams.

Each batch b draws from numpy's default_rng seeded with [seed, b], so results
do not depend on how batches are scheduled across workers: running ranges in
parallel and concatenating the batch means in index order reproduces a serial
run bit for bit.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "EstimateWithError",
    "MIN_BATCHES",
    "run_batch_means",
    "run_batch_stats",
    "combine_batch_means",
    "batch_estimate",
    "batch_statistic_estimate",
]

MIN_BATCHES = 30

BatchSampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    stderr: float
    n_samples: int
    seed: int

    def within(self, target: float, n_sigma: float = 5.0) -> bool:
        return abs(self.value - target) <= n_sigma * self.stderr


def run_batch_means(
    sampler: BatchSampler,
    batch_size: int,
    batch_range: range,
    seed: int,
) -> np.ndarray:
    """Mean of each batch in the given index range."""
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    means = np.empty(len(batch_range))
    for slot, b in enumerate(batch_range):
        rng = np.random.default_rng([int(seed), int(b)])
        values = np.asarray(sampler(rng, batch_size), dtype=float)
        if values.shape != (batch_size,):
            raise ValueError(
                f"sampler returned shape {values.shape}, wanted ({batch_size},)"
            )
        means[slot] = values.mean()
    return means


def combine_batch_means(
    means: np.ndarray, batch_size: int, seed: int
) -> EstimateWithError:
    means = np.asarray(means, dtype=float)
    n_batches = len(means)
    if n_batches < 2:
        raise ValueError("need at least two batch means")
    stderr = float(means.std(ddof=1) / np.sqrt(n_batches))
    stderr = max(stderr, float(np.finfo(float).eps))
    return EstimateWithError(
        value=float(means.mean()),
        stderr=stderr,
        n_samples=batch_size * n_batches,
        seed=int(seed),
    )


def run_batch_stats(
    stat: Callable[[np.random.Generator, int], float],
    batch_size: int,
    batch_range: range,
    seed: int,
) -> np.ndarray:
    """One scalar statistic per batch (for estimands that are not means)."""
    if batch_size < 2:
        raise ValueError("batch statistics need at least two samples per batch")
    values = np.empty(len(batch_range))
    for slot, b in enumerate(batch_range):
        rng = np.random.default_rng([int(seed), int(b)])
        values[slot] = float(stat(rng, batch_size))
    return values


def _split_ranges(n_batches: int, jobs: int) -> list[range]:
    bounds = np.linspace(0, n_batches, jobs + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if a < b]


def batch_estimate(
    sampler: BatchSampler,
    *,
    batch_size: int,
    n_batches: int = 32,
    seed: int = 0,
    jobs: int = 1,
) -> EstimateWithError:
    """Batch-means estimate of E[sample], with a sample-std standard error."""
    if n_batches < MIN_BATCHES:
        raise ValueError(f"need at least {MIN_BATCHES} batches for a stable stderr")
    if jobs < 1:
        raise ValueError("jobs must be positive")
    if jobs == 1:
        means = run_batch_means(sampler, batch_size, range(n_batches), seed)
    else:
        ranges = _split_ranges(n_batches, jobs)
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(
                pool.map(
                    lambda r: run_batch_means(sampler, batch_size, r, seed), ranges
                )
            )
        means = np.concatenate(parts)
    return combine_batch_means(means, batch_size, seed)


def batch_statistic_estimate(
    stat: Callable[[np.random.Generator, int], float],
    *,
    batch_size: int,
    n_batches: int = 32,
    seed: int = 0,
    jobs: int = 1,
) -> EstimateWithError:
    """Batch means of a per-batch scalar statistic (covariances and the like).

    The statistic must be unbiased at the batch size for the combined value to
    be unbiased; the stderr is the spread of the per-batch values.
    """
    if n_batches < MIN_BATCHES:
        raise ValueError(f"need at least {MIN_BATCHES} batches for a stable stderr")
    if jobs < 1:
        raise ValueError("jobs must be positive")
    if jobs == 1:
        values = run_batch_stats(stat, batch_size, range(n_batches), seed)
    else:
        ranges = _split_ranges(n_batches, jobs)
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(
                pool.map(lambda r: run_batch_stats(stat, batch_size, r, seed), ranges)
            )
        values = np.concatenate(parts)
    return combine_batch_means(values, batch_size, seed)


def estimate_sequence(
    samplers: Sequence[BatchSampler],
    *,
    batch_size: int,
    n_batches: int = 32,
    seed: int = 0,
    jobs: int = 1,
) -> list[EstimateWithError]:
    """Run several samplers with distinct seeds derived in order."""
    return [
        batch_estimate(
            s, batch_size=batch_size, n_batches=n_batches, seed=seed + k, jobs=jobs
        )
        for k, s in enumerate(samplers)
    ]
