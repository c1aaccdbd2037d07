# -*- encoding: utf-8 -*-
"""
gricci Monte-Carlo Runner - deterministic batched estimation.

A run of n samples is cut into batches. Batch k draws from its own Philox
stream spawned from SeedSequence(seed) with spawn key (k,), so a batch's
samples depend only on (seed, k, batch size). Batches are queued on a Deck,
drained by a thread pool, and their statistics are merged by pairwise
reduction in batch order. The estimate is therefore the same for every
worker count.

Usage:
    from gricci.verify.sampler import McRunner

    runner = McRunner(seed=1, n=100_000, threads=4)
    estimate = runner.run(integrand)   # integrand(rng, size) -> (size,) values
"""

import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np
from hio.help import Deck

from gricci.config import default_batch_size, default_threads
from gricci.exceptions import BudgetExceeded, NumericError

logger = logging.getLogger(__name__)

Integrand = Callable[[np.random.Generator, int], np.ndarray]


def _number(value) -> Any:
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


@dataclass(frozen=True)
class MCEstimate:
    """
    Monte-Carlo estimate with its standard error.

    Attributes:
        value: Sample mean (real or complex)
        stderr: Standard error of the mean
        n_samples: Number of samples drawn
        seed: Root seed of the run
        wall_time: Seconds spent
    """
    value: complex
    stderr: float
    n_samples: int
    seed: int
    wall_time: float = 0.0

    @classmethod
    def exact(cls, value: complex, seed: int = 0) -> "MCEstimate":
        return cls(value, 0.0, 0, seed, 0.0)

    def agrees_with(self, target: complex, sigmas: float = 3.0, other_stderr: float = 0.0) -> bool:
        """Whether target lies within sigmas combined standard errors."""
        return abs(self.value - target) <= sigmas * math.hypot(self.stderr, other_stderr)

    def scaled(self, factor: complex) -> "MCEstimate":
        return MCEstimate(self.value * factor, self.stderr * abs(factor), self.n_samples, self.seed, self.wall_time)

    def to_dict(self) -> dict:
        return {
            "value": _number(self.value),
            "stderr": self.stderr,
            "n": self.n_samples,
            "seed": self.seed,
            "wall_time": self.wall_time,
        }


@dataclass(frozen=True)
class BatchStats:
    """Count, mean and sum of squared deviations of one or more batches."""
    count: int
    mean: complex
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "BatchStats":
        values = np.asarray(values)
        if values.size == 0:
            return cls(0, 0.0, 0.0)
        mean = np.mean(values)
        return cls(values.size, complex(mean), float(np.sum(np.abs(values - mean) ** 2)))

    def merge(self, other: "BatchStats") -> "BatchStats":
        """Combine two disjoint sample sets."""
        if self.count == 0:
            return other
        if other.count == 0:
            return self
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + abs(delta) ** 2 * self.count * other.count / count
        return BatchStats(count, mean, m2)

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def pairwise_reduce(stats: Sequence[BatchStats]) -> BatchStats:
    """Merge batch statistics in a fixed binary tree over the batch order."""
    if not stats:
        return BatchStats(0, 0.0, 0.0)
    if len(stats) == 1:
        return stats[0]
    mid = len(stats) // 2
    return pairwise_reduce(stats[:mid]).merge(pairwise_reduce(stats[mid:]))


def batch_generator(seed: int, index: int, stream: tuple[int, ...] = ()) -> np.random.Generator:
    """The Philox stream of a batch under the root seed and an optional stream prefix."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=stream + (index,))))


class McRunner:
    """
    Batched Monte-Carlo driver.

    Attributes:
        seed: Root seed
        n: Total number of samples
        batch_size: Samples per batch
        threads: Worker threads
        budget: Optional wall-time budget in seconds
        stream: Spawn-key prefix separating runs that share a seed
    """

    def __init__(
        self,
        seed: int,
        n: int,
        batch_size: Optional[int] = None,
        threads: Optional[int] = None,
        budget: Optional[float] = None,
        stream: tuple[int, ...] = (),
    ):
        if n < 1:
            raise NumericError(f"sample count must be positive, got {n}")
        self.seed = int(seed)
        self.n = int(n)
        self.batch_size = int(batch_size or default_batch_size())
        self.threads = int(threads or default_threads())
        self.budget = budget
        self.stream = tuple(stream)
        self.tasks = Deck()  # (batch index, size)
        self.results = Deck()  # (batch index, BatchStats)

    def batches(self) -> list[tuple[int, int]]:
        full, rest = divmod(self.n, self.batch_size)
        sizes = [self.batch_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def run(self, integrand: Integrand) -> MCEstimate:
        """
        Estimate the mean of integrand over all batches.

        Args:
            integrand: Called as integrand(rng, size), returns (size,) values

        Returns:
            MCEstimate

        Raises:
            BudgetExceeded: If the budget ran out; carries the estimate over
                the batches that finished
        """
        start = time.monotonic()
        deadline = None if self.budget is None else start + self.budget
        plan = self.batches()
        for task in plan:
            self.tasks.push(task)
        lock = threading.Lock()
        skipped: list[int] = []

        def work():
            while True:
                task = self.tasks.pull()
                if task is None:
                    return
                index, size = task
                if deadline is not None and time.monotonic() > deadline:
                    with lock:
                        skipped.append(index)
                    continue
                values = integrand(batch_generator(self.seed, index, self.stream), size)
                self.results.push((index, BatchStats.of(values)))
                logger.debug("batch %d done (%d samples)", index, size)

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [pool.submit(work) for _ in range(min(self.threads, len(plan)))]
            for future in futures:
                future.result()

        finished = {}
        while (item := self.results.pull()) is not None:
            finished[item[0]] = item[1]
        stats = pairwise_reduce([finished[i] for i in sorted(finished)])
        value = stats.mean.real if stats.mean.imag == 0 else stats.mean
        estimate = MCEstimate(value, stats.stderr, stats.count, self.seed, time.monotonic() - start)
        if skipped:
            logger.warning(
                "budget of %.1fs exhausted: %d of %d batches finished", self.budget, len(finished), len(plan)
            )
            raise BudgetExceeded(
                f"budget of {self.budget}s exhausted after {stats.count} samples "
                f"(stderr {estimate.stderr:.3e})",
                estimate,
            )
        return estimate
