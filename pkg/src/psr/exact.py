"""Exact acceptance probabilities and minimum explanations.

Everything here returns :class:`~fractions.Fraction`. Two independent routes
compute ``Pr[L(z) = L(x)]`` for a random completion ``z`` of ``y``: plain
enumeration of completions (:func:`brute_force_prob`) and a counting DP over
partial sums (:func:`dp_prob`). Tests hold them against each other.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from . import _kernels_py
from ._backend import kernels
from .model import (
    LinearModel,
    Instance,
    PartialInstance,
    ProductDistribution,
    check_dim,
    classify,
    greedy_prefixes,
    subset_of,
    SubsetError,
)

Probability = Fraction

ENUMERATION_CAP = 24
DP_BUDGET = 10**7
_INT64_SAFE = 1 << 62


class OracleLimitError(RuntimeError):
    """An exact oracle was asked for more work than its configured cap."""


class ZeroWeightError(ValueError):
    """The completions of a partial instance carry zero total probability."""


def _split(model: LinearModel, y: PartialInstance, x: Instance):
    """Integer free weights and the residual threshold they must reach."""
    check_dim(model, x)
    check_dim(model, y)
    if not subset_of(y, x):
        raise SubsetError(f"{y} is not contained in {x}")
    w, t = model.integer_form
    fixed = sum(w[i] for i, c in enumerate(y) if c)
    free = [w[i] for i in y.free]
    return free, t - fixed


def _fits_int64(free, need) -> bool:
    return sum(abs(v) for v in free) + abs(need) < _INT64_SAFE


def count_agreeing(model: LinearModel, y: PartialInstance, x: Instance,
                   cap: int = ENUMERATION_CAP) -> tuple[int, int]:
    """(number of completions of ``y`` classified like ``x``, number of completions)."""
    free, need = _split(model, y, x)
    if len(free) > cap:
        raise OracleLimitError(f"{len(free)} unknown cells exceed the enumeration cap of {cap}")
    target = classify(model, x)
    if _fits_int64(free, need):
        hits = kernels.count_enumerate(np.array(free, dtype=np.int64), need, target)
    else:
        hits = _kernels_py.count_enumerate(np.array(free, dtype=object), need, target)
    return int(hits), 1 << len(free)


def _product_prob(model, y, x, dist, cap):
    free, need = _split(model, y, x)
    if len(free) > cap:
        raise OracleLimitError(f"{len(free)} unknown cells exceed the enumeration cap of {cap}")
    params = dist.params
    # defined cells contribute one common factor; it only matters when it is zero
    for i in y.defined:
        if (params[i] if x[i] else 1 - params[i]) == 0:
            raise ZeroWeightError(f"feature {i} has probability zero of taking value {x[i]}")
    # scale the free parameters to one denominator so completion masses are integers
    den = 1
    for i in y.free:
        den = lcm(den, params[i].denominator)
    ones = [int(params[i] * den) for i in y.free]
    zeros = [den - a for a in ones]
    f = len(free)
    target = classify(model, x)
    total = den ** f
    small = total < _INT64_SAFE and _fits_int64(free, need)
    dtype = np.int64 if small else object
    weights = np.array(free, dtype=dtype)
    one_arr = np.array(ones, dtype=dtype)
    zero_arr = np.array(zeros, dtype=dtype)
    shift = np.arange(f, dtype=np.int64)
    agree = 0
    step = max(1, (1 << 18) // max(f, 1))
    for start in range(0, 1 << f, step):
        pat = np.arange(start, min(1 << f, start + step), dtype=np.int64)
        bits = (pat[:, None] >> shift[None, :]) & 1
        if f:
            s = bits.astype(dtype).dot(weights)
            mass = np.where(bits == 1, one_arr[None, :], zero_arr[None, :]).prod(axis=1)
        else:
            s = np.zeros(len(pat), dtype=dtype)
            mass = np.ones(len(pat), dtype=dtype)
        mask = (s >= need) == bool(target)
        agree += int(sum(int(v) for v in mass[mask]))
    return Fraction(agree, total)


def brute_force_prob(model: LinearModel, y: PartialInstance, x: Instance,
                     dist: ProductDistribution | None = None,
                     cap: int = ENUMERATION_CAP) -> Fraction:
    """``Pr[L(z) = L(x)]`` for ``z`` drawn from ``dist`` conditioned on agreeing with ``y``.

    Enumerates all completions, so the number of unknown cells is capped.
    """
    if dist is not None:
        check_dim(model, dist.params)
    if dist is None or dist.is_uniform:
        hits, total = count_agreeing(model, y, x, cap)
        return Fraction(hits, total)
    return _product_prob(model, y, x, dist, cap)


def dp_prob(model: LinearModel, y: PartialInstance, x: Instance,
            budget: int = DP_BUDGET) -> Fraction:
    """Uniform-completion probability by counting reachable partial sums.

    Pseudo-polynomial: needs integer weights with ``sum |w_i| <= budget``.
    """
    if not model.is_integral:
        raise ValueError("dp_prob needs integer weights and threshold")
    spread = sum(abs(w) for w in model.weights)
    if spread > budget:
        raise OracleLimitError(f"sum of |w_i| = {spread} exceeds the DP budget of {budget}")
    free, need = _split(model, y, x)
    f = len(free)
    lo = sum(w for w in free if w < 0)
    size = sum(abs(w) for w in free) + 1
    counts = np.zeros(size, dtype=np.int64 if f <= 62 else object)
    counts[-lo] = 1
    for w in free:
        nxt = counts.copy()
        if w > 0:
            nxt[w:] += counts[:-w]
        elif w < 0:
            nxt[:w] += counts[-w:]
        else:
            nxt += counts
        counts = nxt
    start = min(max(need - lo, 0), size)
    accepted = int(sum(int(c) for c in counts[start:])) if f > 62 else int(counts[start:].sum())
    total = 1 << f
    hits = accepted if classify(model, x) else total - accepted
    return Fraction(hits, total)


def probability(model: LinearModel, y: PartialInstance, x: Instance,
                dist: ProductDistribution | None = None,
                cap: int = ENUMERATION_CAP, budget: int = DP_BUDGET) -> Fraction:
    """Exact probability by whichever oracle fits: enumeration first, then the DP."""
    if y.n_unknown <= cap or (dist is not None and not dist.is_uniform):
        return brute_force_prob(model, y, x, dist, cap)
    if model.is_integral:
        return dp_prob(model, y, x, budget)
    # rescaling to integers keeps every classification, so the DP still applies
    w, t = model.integer_form
    return dp_prob(LinearModel(w, t), y, x, budget)


@lru_cache(maxsize=4096)
def _upper_sum(n: int, k: int) -> int:
    """sum_{j >= k} C(n, j), summed from the shorter end."""
    if k <= 0:
        return 1 << n
    if k > n:
        return 0
    if 2 * k > n:
        term, acc = 1, 0
        for j in range(n, k - 1, -1):
            acc += term
            term = term * j // (n - j + 1)
        return acc
    term, acc = 1, 0
    for j in range(k):
        acc += term
        term = term * (n - j) // (j + 1)
    return (1 << n) - acc


def binomial_tail(n: int, k: int) -> Fraction:
    """``Pr[Bin(n, 1/2) >= k]`` exactly."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Fraction(_upper_sum(n, k), 1 << n)


def worst_case_margin(model: LinearModel, y: PartialInstance, x: Instance) -> Fraction:
    """Adversarial slack ``min_z (2 L(x) - 1) (w . z - t)`` over completions ``z`` of ``y``."""
    check_dim(model, x)
    if not subset_of(y, x):
        raise SubsetError(f"{y} is not contained in {x}")
    fixed = sum((w for w, c in zip(model.weights, y) if c), Fraction(0))
    free = [model.weights[i] for i in y.free]
    if classify(model, x):
        return fixed + sum((w for w in free if w < 0), Fraction(0)) - model.threshold
    return model.threshold - fixed - sum((w for w in free if w > 0), Fraction(0))


def is_sufficient_reason(model: LinearModel, y: PartialInstance, x: Instance) -> bool:
    """Every completion of ``y`` gets the class of ``x``; decided in O(d)."""
    margin = worst_case_margin(model, y, x)
    return margin >= 0 if classify(model, x) else margin > 0


def _check_delta(delta) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return delta


def is_delta_sr(model, y, x, delta, dist=None, cap: int = ENUMERATION_CAP) -> bool:
    delta = Fraction(delta)
    if not 0 <= delta <= 1:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return brute_force_prob(model, y, x, dist, cap) >= delta


def prefix_probabilities(model: LinearModel, x: Instance, method: str = "brute") -> list[Fraction]:
    """Exact ``v_0, ..., v_d`` for the greedy prefixes under the uniform distribution."""
    oracle = {"brute": brute_force_prob, "dp": dp_prob, "auto": probability}[method]
    return [oracle(model, y, x) for y in greedy_prefixes(model, x)]


def min_delta_sr_exact(model: LinearModel, x: Instance, delta,
                       dist: ProductDistribution | None = None,
                       method: str = "brute") -> tuple[int, PartialInstance]:
    """Smallest greedy prefix meeting ``delta``; minimum among all explanations under uniform."""
    delta = _check_delta(delta)
    if dist is not None and not dist.is_uniform:
        raise ValueError("greedy prefixes are only known to be optimal under the uniform distribution")
    oracle = {"brute": brute_force_prob, "dp": dp_prob, "auto": probability}[method]
    for k, y in enumerate(greedy_prefixes(model, x)):
        if oracle(model, y, x) >= delta:
            return k, y
    raise AssertionError("the full instance always has probability 1")
