"""Monte Carlo estimation of acceptance probabilities.

Sampling is split into fixed-size chunks, each with its own key derived from
``(seed, chunk index)``, so the estimate for a given ``(seed, M, chunk_size)``
is the same however many worker threads run the chunks.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Protocol

import numpy as np

from . import _kernels_py
from ._backend import kernels
from .exact import brute_force_prob, probability
from .model import (
    Instance,
    LinearModel,
    PartialInstance,
    ProductDistribution,
    SubsetError,
    check_dim,
    classify,
    subset_of,
)

DEFAULT_CHUNK = 1 << 16
_SEED_SALT = 0x5851F42D4C957F2D
_INT64_SAFE = 1 << 62
_UNIT = 1 << 53


def hoeffding_samples(t: float, gamma: float) -> int:
    """Samples needed so that ``Pr[|v_hat - v| <= t] >= 1 - gamma``.

    ``M = ceil(ln(2 / gamma) / (2 t^2))`` from ``2 exp(-2 t^2 M) <= gamma``.
    """
    t, gamma = float(t), float(gamma)
    if not 0 < t < 1:
        raise ValueError(f"deviation t must lie in (0, 1), got {t}")
    if not 0 < gamma < 1:
        raise ValueError(f"failure probability gamma must lie in (0, 1), got {gamma}")
    return max(1, math.ceil(math.log(2 / gamma) / (2 * t * t)))


def default_threads() -> int:
    env = os.environ.get("PSR_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("PSR_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


def chunk_key(seed: int, chunk: int) -> int:
    return _kernels_py.word(_kernels_py.fmix64(seed ^ _SEED_SALT), chunk)


def bernoulli_thresholds(params) -> np.ndarray:
    """53-bit cut-offs: a draw ``u`` in [0, 2^53) means 1 iff ``u < floor(p 2^53)``."""
    return np.array([int(Fraction(p) * _UNIT) for p in params], dtype=np.uint64)


def sample_completion(y: PartialInstance, dist: ProductDistribution | None,
                      rng: np.random.Generator) -> Instance:
    """One completion of ``y``; unknown cell ``i`` is 1 with probability ``p_i``."""
    dist = dist or ProductDistribution.uniform(len(y))
    if len(dist) != len(y):
        raise ValueError(f"distribution has dimension {len(dist)}, partial instance {len(y)}")
    free = y.free
    cells = list(y.cells)
    if free:
        cut = bernoulli_thresholds(dist.params[i] for i in free)
        draws = rng.integers(0, _UNIT, size=len(free), dtype=np.uint64)
        for i, bit in zip(free, draws < cut):
            cells[i] = int(bit)
    return Instance(tuple(cells))


def mc_count(model: LinearModel, y: PartialInstance, x: Instance, samples: int, seed: int,
             dist: ProductDistribution | None = None, chunk_size: int = DEFAULT_CHUNK,
             threads: int | None = None, backend=None) -> int:
    """Number of sampled completions of ``y`` that ``model`` classifies like ``x``."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    check_dim(model, x)
    check_dim(model, y)
    if not subset_of(y, x):
        raise SubsetError(f"{y} is not contained in {x}")
    w, t = model.integer_form
    free_idx = y.free
    need = t - sum(w[i] for i, c in enumerate(y) if c)
    free = [w[i] for i in free_idx]
    target = classify(model, x)

    k = backend or kernels
    if sum(abs(v) for v in free) + abs(need) < _INT64_SAFE:
        weights = np.array(free, dtype=np.int64)
    else:
        k = _kernels_py
        weights = np.array(free, dtype=object)

    uniform = dist is None or all(dist.params[i] == Fraction(1, 2) for i in free_idx)
    if dist is not None:
        check_dim(model, dist.params)
    cut = None if uniform else bernoulli_thresholds(dist.params[i] for i in free_idx)
    seed = int(seed) & _kernels_py.MASK64

    def run(chunk: int) -> int:
        n = min(chunk_size, samples - chunk * chunk_size)
        key = chunk_key(seed, chunk)
        if uniform:
            return k.count_uniform(weights, need, target, key, n)
        return k.count_product(weights, need, target, cut, key, n)

    n_chunks = -(-samples // chunk_size)
    threads = threads or default_threads()
    if threads == 1 or n_chunks == 1:
        return sum(run(c) for c in range(n_chunks))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(run, range(n_chunks)))


def mc_estimate(model: LinearModel, y: PartialInstance, x: Instance, samples: int, seed: int,
                dist: ProductDistribution | None = None, chunk_size: int = DEFAULT_CHUNK,
                threads: int | None = None) -> Fraction:
    """Fraction of ``samples`` sampled completions that agree with ``x``; unbiased."""
    hits = mc_count(model, y, x, samples, seed, dist, chunk_size, threads)
    return Fraction(hits, samples)


class Estimator(Protocol):
    """Anything that estimates ``Pr[L(z) = L(x)]`` for uniform completions of ``y``."""

    name: str

    def estimate(self, model: LinearModel, y: PartialInstance, x: Instance,
                 samples: int, seed: int) -> Fraction: ...


class MonteCarloEstimator:
    name = "mc"

    def __init__(self, samples: int | None = None, chunk_size: int = DEFAULT_CHUNK,
                 threads: int | None = None):
        self.samples = samples  # overrides the count the caller asks for
        self.chunk_size = chunk_size
        self.threads = threads

    def estimate(self, model, y, x, samples, seed):
        return mc_estimate(model, y, x, self.samples or samples, seed,
                           chunk_size=self.chunk_size, threads=self.threads)


class ExactEstimator:
    """Answers with the exact probability; ``samples`` and ``seed`` are ignored."""

    name = "exact"

    def __init__(self, method: str = "auto"):
        self.method = method

    def estimate(self, model, y, x, samples, seed):
        if self.method == "brute":
            return brute_force_prob(model, y, x)
        return probability(model, y, x)
