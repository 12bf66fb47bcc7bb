"""Probabilistic sufficient reasons for binary linear classifiers."""
from ._backend import BACKEND
from .exact import (
    OracleLimitError,
    binomial_tail,
    brute_force_prob,
    dp_prob,
    is_delta_sr,
    is_sufficient_reason,
    min_delta_sr_exact,
    probability,
    worst_case_margin,
)
from .explainer import ExplainerParams, ExplanationResult, draw_delta_star, explain
from .model import (
    DimensionError,
    Instance,
    LinearModel,
    PartialInstance,
    ProductDistribution,
    SubsetError,
    classify,
    drop,
    extend,
    greedy_prefixes,
    restrict,
    scores,
    subset_of,
)
from .montecarlo import (
    ExactEstimator,
    MonteCarloEstimator,
    hoeffding_samples,
    mc_estimate,
    sample_completion,
)

__version__ = "0.1.0"
