import math

import numpy as np
import pytest

from psr.exact import brute_force_prob
from psr.experiments import random_case, random_product_distribution
from psr.model import Instance, LinearModel, PartialInstance, ProductDistribution, SubsetError
from psr.montecarlo import (
    ExactEstimator,
    MonteCarloEstimator,
    chunk_key,
    default_threads,
    hoeffding_samples,
    mc_count,
    mc_estimate,
    sample_completion,
)

EX3 = LinearModel((5, 1, -3, 2, -1), 5)
X3 = Instance.parse("10011")


def test_hoeffding_samples():
    assert hoeffding_samples(0.1, 0.05) == 185
    assert hoeffding_samples(0.5, 2 / math.e) == 2
    for bad in ((0, 0.1), (0.1, 0), (1, 0.5), (0.1, 1)):
        with pytest.raises(ValueError):
            hoeffding_samples(*bad)


def test_estimate_is_fraction_of_samples():
    v = mc_estimate(EX3, PartialInstance.unknown(5), X3, 1000, seed=3)
    assert 0 <= v <= 1
    assert (v * 1000).denominator == 1


def test_deterministic_across_threads_and_backends(backend):
    y = PartialInstance.parse("1****")
    base = mc_count(EX3, y, X3, 50_000, 11, chunk_size=4096, threads=1)
    assert mc_count(EX3, y, X3, 50_000, 11, chunk_size=4096, threads=4) == base
    assert mc_count(EX3, y, X3, 50_000, 11, chunk_size=4096, threads=1, backend=backend) == base


def test_threads_env(monkeypatch):
    monkeypatch.setenv("PSR_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("PSR_THREADS", "0")
    with pytest.raises(ValueError):
        default_threads()


def test_seed_and_chunk_change_stream():
    assert chunk_key(1, 0) != chunk_key(1, 1)
    assert chunk_key(1, 0) != chunk_key(2, 0)
    y = PartialInstance.unknown(5)
    runs = {mc_count(EX3, y, X3, 2000, s) for s in range(8)}
    assert len(runs) > 1


def test_no_free_cells():
    assert mc_estimate(EX3, PartialInstance.parse("10011"), X3, 10, 0) == 1


def test_rejects_bad_input():
    with pytest.raises(SubsetError):
        mc_estimate(EX3, PartialInstance.parse("0****"), X3, 10, 0)
    with pytest.raises(ValueError):
        mc_estimate(EX3, PartialInstance.unknown(5), X3, 0, 0)


def test_unbiased_uniform(rng):
    # mean of 1000 independent estimates, M = 100 each
    y = PartialInstance.parse("1****")
    v = brute_force_prob(EX3, y, X3)
    est = [mc_estimate(EX3, y, X3, 100, int(s)) for s in rng.integers(0, 2**62, 1000)]
    sigma = math.sqrt(v * (1 - v) / 100_000)
    assert abs(float(sum(est) / 1000) - float(v)) <= 3 * sigma


def test_unbiased_product(rng):
    model, x = LinearModel((3, -2, 1, 1, -1, 2), 1), Instance.parse("101101")
    dist = ProductDistribution(("1/3", "3/4", "1/8", "1/2", "5/16", "15/16"))
    y = PartialInstance.parse("1*****")
    v = brute_force_prob(model, y, x, dist)
    n = 200_000
    hits = mc_count(model, y, x, n, 5, dist)
    assert abs(hits / n - float(v)) <= 3 * math.sqrt(float(v * (1 - v)) / n)


def test_big_weights_use_object_path():
    model = LinearModel((1 << 70, 1, -(1 << 70)), 1)
    x = Instance.parse("110")
    v = mc_estimate(model, PartialInstance.unknown(3), x, 40_000, 1)
    assert abs(float(v) - 0.5) < 0.02


def test_sample_completion_frequencies(rng):
    dist = ProductDistribution(("1/16", "1/2", "13/16", "1"))
    y = PartialInstance.parse("****")
    n = 8000
    counts = np.zeros(4)
    for _ in range(n):
        counts += sample_completion(y, dist, rng).bits
    for p, c in zip(dist.params, counts):
        p = float(p)
        assert abs(c / n - p) <= 3 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_sample_completion_respects_defined(rng):
    y = PartialInstance.parse("1*0*")
    for _ in range(50):
        z = sample_completion(y, None, rng)
        assert z[0] == 1 and z[2] == 0


def test_estimators(rng):
    model, x = random_case(rng, 10)
    y = PartialInstance.unknown(model.dim)
    assert ExactEstimator().estimate(model, y, x, 10, 0) == brute_force_prob(model, y, x)
    assert ExactEstimator("brute").estimate(model, y, x, 10, 0) == brute_force_prob(model, y, x)
    mc = MonteCarloEstimator(samples=500)
    assert (mc.estimate(model, y, x, 10, 0) * 500).denominator == 1


def test_product_with_random_dists(rng):
    for _ in range(10):
        model, x = random_case(rng, 6)
        dist = random_product_distribution(rng, model.dim)
        y = PartialInstance.unknown(model.dim)
        v = float(brute_force_prob(model, y, x, dist))
        n = 20_000
        got = mc_count(model, y, x, n, int(rng.integers(0, 2**62)), dist) / n
        assert abs(got - v) <= 4 * math.sqrt(v * (1 - v) / n) + 1e-9
