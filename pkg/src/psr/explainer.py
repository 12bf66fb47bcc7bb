"""Randomised search for a minimum probabilistic sufficient reason.

Draw a target ``delta_star`` uniformly from ``[delta - eps, delta + eps]``,
rank features by score, then binary-search the shortest greedy prefix whose
estimated probability reaches ``delta_star``. With probability at least
``1 - gamma`` the returned prefix is a minimum ``delta_star``-SR.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import Instance, LinearModel, PartialInstance, check_dim, greedy_prefixes
from .montecarlo import Estimator, MonteCarloEstimator

_UNIT = 1 << 53


@dataclass(frozen=True)
class ExplainerParams:
    delta: Fraction
    epsilon: Fraction
    gamma: Fraction
    seed: int = 0
    estimator: Estimator = field(default_factory=MonteCarloEstimator)
    gamma_adjust: bool = True

    def __post_init__(self):
        for name in ("delta", "epsilon", "gamma"):
            value = Fraction(getattr(self, name))
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
            object.__setattr__(self, name, value)
        if self.delta - self.epsilon <= 0:
            raise ValueError("delta - epsilon must be positive")
        if self.delta + self.epsilon > 1:
            raise ValueError("delta + epsilon must not exceed 1")

    @property
    def effective_gamma(self) -> Fraction:
        return self.gamma / 3 if self.gamma_adjust else self.gamma


@dataclass(frozen=True)
class ExplanationResult:
    delta_star: Fraction
    k: int
    explanation: PartialInstance
    trace: tuple[tuple[int, Fraction], ...]
    steps: int
    samples: int | None


def ceil_log2(d: int) -> int:
    """``max(1, ceil(log2 d))``; keeps the sample count finite at ``d = 1``."""
    return max(1, (d - 1).bit_length())


def step_cap(d: int) -> int:
    """``floor(log2 d) + 1``, the most iterations a binary search over 0..d needs."""
    return d.bit_length()


def sample_count(d: int, epsilon, gamma) -> int:
    """Samples per estimate: ``lg^2 d / (2 eps^2 gamma^2) * ln(2 lg d / gamma)``, rounded up."""
    lg = ceil_log2(d)
    eps, gam = float(epsilon), float(gamma)
    return max(1, math.ceil(lg * lg / (2 * eps * eps * gam * gam) * math.log(2 * lg / gam)))


def draw_delta_star(delta, epsilon, rng: np.random.Generator) -> Fraction:
    """Uniform draw from ``[delta - eps, delta + eps]`` on a 2^-53 grid, as an exact rational."""
    delta, epsilon = Fraction(delta), Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if delta - epsilon <= 0 or delta + epsilon > 1:
        raise ValueError("[delta - epsilon, delta + epsilon] must lie inside (0, 1]")
    u = Fraction(int(rng.integers(0, _UNIT + 1)), _UNIT)
    return delta - epsilon + 2 * epsilon * u


def explain(model: LinearModel, x: Instance, params: ExplainerParams) -> ExplanationResult:
    check_dim(model, x)
    d = model.dim
    rng = np.random.default_rng(params.seed)
    delta_star = draw_delta_star(params.delta, params.epsilon, rng)
    prefixes = greedy_prefixes(model, x)
    samples = sample_count(d, params.epsilon, params.effective_gamma)

    lb, ub, steps = 0, d, 0
    trace = []
    cap = step_cap(d)
    while lb != ub and steps < cap:
        steps += 1
        m = (lb + ub) // 2
        seed = int(rng.integers(0, 1 << 63))
        v = Fraction(params.estimator.estimate(model, prefixes[m], x, samples, seed))
        trace.append((m, v))
        if v >= delta_star:
            ub = m
        else:
            lb = m + 1
    reported = getattr(params.estimator, "samples", None) or samples
    return ExplanationResult(
        delta_star=delta_star,
        k=lb,
        explanation=prefixes[lb],
        trace=tuple(trace),
        steps=steps,
        samples=reported if params.estimator.name == "mc" else None,
    )
