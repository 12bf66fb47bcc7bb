"""Acceptance criteria, one test each; the summary prints a PASS/FAIL line per criterion."""
import time
from fractions import Fraction

import numpy as np

from psr.exact import (
    binomial_tail,
    brute_force_prob,
    dp_prob,
    is_sufficient_reason,
    min_delta_sr_exact,
    prefix_probabilities,
)
from psr.experiments import (
    EXAMPLE3_MODEL,
    EXAMPLE3_X,
    check_local_minimality_theorem,
    erdos_bound_holds,
    example1_model,
    gap_sweep,
    greedy_violations,
    g_within_bound,
    random_case,
    random_product_distribution,
)
from psr.explainer import ExplainerParams, explain, step_cap
from psr.model import PartialInstance, greedy_prefixes, restrict
from psr.montecarlo import ExactEstimator, MonteCarloEstimator, hoeffding_samples, mc_estimate

SEED = 20240601


def test_ac1_example_prefix_table(criterion):
    e = criterion(1, "five-feature example: greedy prefix probabilities bit-exact")
    t0 = time.perf_counter()
    v = prefix_probabilities(EXAMPLE3_MODEL, EXAMPLE3_X)
    dt = time.perf_counter() - t0
    e["detail"] = f"{', '.join(str(p) for p in v)}; {dt:.3f}s"
    assert v == [Fraction(1, 4), Fraction(1, 2), Fraction(7, 8), 1, 1, 1]
    assert all(isinstance(p, Fraction) for p in v)
    assert dt < 1


def test_ac2_example_size2_table(criterion):
    e = criterion(2, "five-feature example: all 10 size-2 probabilities bit-exact")
    expected = {
        (1, 3): Fraction(7, 8), (1, 4): Fraction(5, 8), (3, 4): Fraction(1, 2),
        (3, 5): Fraction(3, 8), (2, 3): Fraction(3, 8), (1, 5): Fraction(3, 8),
        (1, 2): Fraction(3, 8), (4, 5): Fraction(1, 4), (2, 4): Fraction(1, 4),
        (2, 5): Fraction(1, 8),
    }
    t0 = time.perf_counter()
    got = {pair: brute_force_prob(EXAMPLE3_MODEL, restrict(EXAMPLE3_X, [i - 1 for i in pair]), EXAMPLE3_X)
           for pair in expected}
    dt = time.perf_counter() - t0
    e["detail"] = f"{sum(got[p] == expected[p] for p in expected)}/10 match; {dt:.3f}s"
    assert len(expected) == 10
    assert got == expected
    assert dt < 1


def test_ac3_thousand_feature_example(criterion):
    e = criterion(3, "thousand-feature example: tail >= 0.999999 and minimum 1-SR size 251")
    t0 = time.perf_counter()
    tail = binomial_tail(999, 250)
    model, x = example1_model()
    k = next(k for k, y in enumerate(greedy_prefixes(model, x)) if is_sufficient_reason(model, y, x))
    dt = time.perf_counter() - t0
    e["detail"] = f"1 - tail = {float(1 - tail):.3g}, size={k}; {dt:.2f}s"
    assert tail >= Fraction(999999, 1000000)
    assert k == 251
    assert dt < 5


def test_ac4_greedy_prefix_suite(criterion):
    e = criterion(4, "greedy prefixes monotone and optimal on 200 models, d <= 12")
    rng = np.random.default_rng(SEED + 4)
    deltas = (Fraction(3, 10), Fraction(6, 10), Fraction(9, 10))
    t0 = time.perf_counter()
    bad = []
    for _ in range(200):
        model, x = random_case(rng, 12, max_weight=8)
        bad += greedy_violations(model, x, deltas)
    dt = time.perf_counter() - t0
    e["detail"] = f"{len(bad)} violations; {dt:.1f}s"
    assert not bad, bad[:5]
    assert dt < 120


def test_ac5_hoeffding_coverage(criterion):
    e = criterion(5, "Monte Carlo coverage of |v_hat - v| <= 0.1 at gamma = 0.1 is >= 0.85")
    y = PartialInstance.parse("1****")
    v = brute_force_prob(EXAMPLE3_MODEL, y, EXAMPLE3_X)
    m = hoeffding_samples(0.1, 0.1)
    rng = np.random.default_rng(SEED + 5)
    t0 = time.perf_counter()
    inside = sum(
        abs(mc_estimate(EXAMPLE3_MODEL, y, EXAMPLE3_X, m, int(s)) - v) <= Fraction(1, 10)
        for s in rng.integers(0, 2**62, size=500)
    )
    dt = time.perf_counter() - t0
    e["detail"] = f"v={v}, M={m}, coverage={inside / 500:.3f}; {dt:.2f}s"
    assert inside / 500 >= 0.85
    assert dt < 60


def test_ac6_explainer_with_exact_oracle(criterion):
    e = criterion(6, "explain with the exact oracle returns the exact minimum on 500 models, d <= 12")
    rng = np.random.default_rng(SEED + 6)
    wrong = over = 0
    for _ in range(500):
        model, x = random_case(rng, 12)
        delta = Fraction(int(rng.integers(20, 81)), 100)
        eps = Fraction(int(rng.integers(1, 20)), 100)
        res = explain(model, x, ExplainerParams(delta, eps, Fraction(1, 10),
                                                seed=int(rng.integers(2**62)),
                                                estimator=ExactEstimator()))
        wrong += res.k != min_delta_sr_exact(model, x, res.delta_star)[0]
        over += res.steps > step_cap(model.dim)
    e["detail"] = f"{500 - wrong}/500 exact, {over} over the step cap"
    assert wrong == 0 and over == 0


def test_ac7_explainer_end_to_end(criterion):
    e = criterion(7, "explain with Monte Carlo: success rate >= 0.75 over 300 trials, d <= 14")
    rng = np.random.default_rng(SEED + 7)
    gamma, eps = Fraction(1, 5), Fraction(1, 10)
    ok = 0
    t0 = time.perf_counter()
    for _ in range(300):
        model, x = random_case(rng, 14)
        delta = Fraction(int(rng.integers(15, 91)), 100)
        res = explain(model, x, ExplainerParams(delta, eps, gamma, seed=int(rng.integers(2**62)),
                                                estimator=MonteCarloEstimator()))
        ok += res.k == min_delta_sr_exact(model, x, res.delta_star)[0]
    dt = time.perf_counter() - t0
    e["detail"] = f"success={ok / 300:.3f}; wall {dt:.1f}s"
    assert ok / 300 >= 0.75


def test_ac8_local_minimality(criterion):
    e = criterion(8, "no locally-minimal but not subset-minimal delta-SR in 100 cases, d <= 10")
    rng = np.random.default_rng(SEED + 8)
    t0 = time.perf_counter()
    found = checked = 0
    for _ in range(100):
        model, x = random_case(rng, 10)
        dist = random_product_distribution(rng, model.dim)
        delta = Fraction(int(rng.integers(1, 100)), 100)
        rep = check_local_minimality_theorem(model, x, delta, dist)
        found += len(rep.counterexamples)
        checked += rep.n_locally_minimal
    dt = time.perf_counter() - t0
    e["detail"] = f"{checked} locally minimal sets, {found} counterexamples; {dt:.1f}s"
    assert found == 0
    assert dt < 300


def test_ac9_binomial_lemmas_and_gap(criterion):
    e = criterion(9, "g(n) <= 1/sqrt(n) for n <= 200, central binomial bound, gap ratio grows")
    g_bad = [n for n in range(2, 201) if not g_within_bound(n)]
    e_bad = [n for n in range(1, 101) if not erdos_bound_holds(n)]
    rows = gap_sweep(Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), [100, 1000, 10000])
    sizes = [(r["n"], r["min_delta"], r["min_delta_plus_eps"]) for r in rows]
    ratios = [r["ratio"] for r in rows]
    e["detail"] = "; ".join(f"n={n}: {lo} vs {hi}" for n, lo, hi in sizes)
    assert not g_bad and not e_bad
    assert all(lo == 1 for _, lo, _ in sizes)
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


def test_ac10_dp_matches_enumeration(criterion):
    e = criterion(10, "counting DP equals enumeration on 200 cases, d <= 18")
    rng = np.random.default_rng(SEED + 10)
    diff = 0
    for _ in range(200):
        model, x = random_case(rng, 18)
        keep = np.flatnonzero(rng.random(model.dim) < 0.3).tolist()
        y = restrict(x, keep)
        diff += dp_prob(model, y, x) != brute_force_prob(model, y, x)
    e["detail"] = f"{200 - diff}/200 identical"
    assert diff == 0
