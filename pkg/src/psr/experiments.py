"""Reproduction harness: worked examples, property suites and the size-gap construction."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .exact import (
    OracleLimitError,
    binomial_tail,
    brute_force_prob,
    dp_prob,
    is_sufficient_reason,
    min_delta_sr_exact,
    prefix_probabilities,
)
from .model import (
    Instance,
    LinearModel,
    PartialInstance,
    ProductDistribution,
    classify,
    format_fraction,
    greedy_prefixes,
    restrict,
    scores,
)

EXAMPLE3_MODEL = LinearModel((5, 1, -3, 2, -1), 5)
EXAMPLE3_X = Instance.parse("10011")

LOCAL_MIN_MAX_DIM = 10
GAP_MAX_N = 10**5


# --------------------------------------------------------------------------
# reports


@dataclass
class Row:
    check: str
    claim: str
    expected: str
    observed: str
    ok: bool


@dataclass
class Report:
    title: str
    rows: list[Row] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def add(self, check, claim, expected, observed, ok):
        self.rows.append(Row(check, claim, _show(expected), _show(observed), bool(ok)))

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "rows": [asdict(r) for r in self.rows]}

    def to_text(self) -> str:
        head = ("check", "claim", "expected", "observed", "ok")
        body = [(r.check, r.claim, r.expected, r.observed, "PASS" if r.ok else "FAIL") for r in self.rows]
        widths = [max(len(str(c)) for c in col) for col in zip(head, *body)]
        lines = [f"== {self.title} =="]
        for line in (head, *body):
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(line, widths)).rstrip())
        return "\n".join(lines)


def _show(v) -> str:
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_show(e) for e in v) + ")"
    return str(v)


def dumps(reports) -> str:
    return json.dumps({"schema": 1, "reports": [r.to_json() for r in reports]}, indent=2)


# --------------------------------------------------------------------------
# random cases


def random_case(rng: np.random.Generator, max_dim: int, min_dim: int = 1,
                max_weight: int = 8) -> tuple[LinearModel, Instance]:
    """Integer weights in [-max_weight, max_weight], threshold in [-sum|w|, sum|w|]."""
    d = int(rng.integers(min_dim, max_dim + 1))
    w = [int(v) for v in rng.integers(-max_weight, max_weight + 1, size=d)]
    spread = sum(abs(v) for v in w)
    t = int(rng.integers(-spread, spread + 1))
    x = Instance(tuple(int(b) for b in rng.integers(0, 2, size=d)))
    return LinearModel(tuple(w), t), x


def random_product_distribution(rng: np.random.Generator, d: int, grid: int = 16) -> ProductDistribution:
    """Parameters drawn from {1/grid, ..., (grid-1)/grid}; never degenerate."""
    return ProductDistribution(tuple(Fraction(int(j), grid) for j in rng.integers(1, grid, size=d)))


def subset_probabilities(model: LinearModel, x: Instance,
                         dist: ProductDistribution | None = None) -> list[Fraction]:
    """Probability of every explanation, indexed by the bitmask of its defined features."""
    d = model.dim
    out = []
    for mask in range(1 << d):
        y = restrict(x, [i for i in range(d) if mask >> i & 1])
        out.append(brute_force_prob(model, y, x, dist))
    return out


def exhaustive_min_size(model: LinearModel, x: Instance, delta,
                        probs: list[Fraction] | None = None) -> int:
    """Smallest explanation meeting ``delta`` found by trying every feature subset."""
    probs = probs if probs is not None else subset_probabilities(model, x)
    delta = Fraction(delta)
    return min(bin(mask).count("1") for mask, p in enumerate(probs) if p >= delta)


def greedy_violations(model: LinearModel, x: Instance, deltas) -> list[str]:
    """Check prefix monotonicity and greedy optimality against exhaustive search."""
    out = []
    v = prefix_probabilities(model, x)
    for k in range(len(v) - 1):
        if v[k + 1] < v[k]:
            out.append(f"v[{k + 1}] = {v[k + 1]} < v[{k}] = {v[k]}")
    if v[-1] != 1:
        out.append(f"v[d] = {v[-1]}")
    probs = subset_probabilities(model, x)
    for delta in deltas:
        greedy, _ = min_delta_sr_exact(model, x, delta)
        best = exhaustive_min_size(model, x, delta, probs)
        if greedy != best:
            out.append(f"delta={delta}: greedy {greedy} vs exhaustive {best}")
    return out


# --------------------------------------------------------------------------
# local versus subset minimality


@dataclass
class LocalMinReport:
    n_sufficient: int
    n_locally_minimal: int
    n_subset_minimal: int
    counterexamples: list[PartialInstance]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def check_local_minimality_theorem(model: LinearModel, x: Instance, delta,
                                   dist: ProductDistribution | None = None) -> LocalMinReport:
    """Find delta-SRs that cannot shed any single feature yet contain a smaller delta-SR."""
    d = model.dim
    if d > LOCAL_MIN_MAX_DIM:
        raise OracleLimitError(f"exhaustive check is capped at d = {LOCAL_MIN_MAX_DIM}")
    delta = Fraction(delta)
    good = [p >= delta for p in subset_probabilities(model, x, dist)]
    # below[mask]: some strict subset of mask is a delta-SR
    below = [False] * (1 << d)
    for mask in range(1 << d):  # submasks are numerically smaller, so already filled
        bits = [1 << i for i in range(d) if mask & (1 << i)]
        below[mask] = any(good[mask ^ b] or below[mask ^ b] for b in bits)
    n_local = n_subset = 0
    bad = []
    for mask in range(1 << d):
        if not good[mask]:
            continue
        local = not any(good[mask ^ (1 << i)] for i in range(d) if mask >> i & 1)
        subset = not below[mask]
        n_local += local
        n_subset += subset
        if local and not subset:
            bad.append(restrict(x, [i for i in range(d) if mask >> i & 1]))
    return LocalMinReport(sum(good), n_local, n_subset, bad)


# --------------------------------------------------------------------------
# binomial lemmas and the size-gap construction


def g_value(n: int) -> Fraction:
    """``max_k P(n-1, k-1) - P(n, k)`` over ``k = 1..n``."""
    return max(binomial_tail(n - 1, k - 1) - binomial_tail(n, k) for k in range(1, n + 1))


def g_within_bound(n: int) -> bool:
    """Exact check of ``0 <= g(n) <= 1/sqrt(n)`` (compared as ``g^2 n <= 1``)."""
    g = g_value(n)
    return g >= 0 and g * g * n <= 1


def erdos_bound_holds(n: int) -> bool:
    """``C(2n, n) <= 4^n / sqrt(2n + 1)``, squared to stay in integers."""
    c = comb(2 * n, n)
    return c * c * (2 * n + 1) <= 16**n


def chernoff_holds(n: int, p: Fraction = Fraction(1, 2)) -> bool:
    """``Pr[|X - mu| >= t] <= 2 exp(-t^2 / (3 mu))`` for ``X ~ Bin(n, p)``, every half-integer t."""
    p = Fraction(p)
    mu = n * p
    pmf = [comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(n + 1)]
    for t2 in range(0, 2 * n + 1):
        t = Fraction(t2, 2)
        tail = sum((q for j, q in enumerate(pmf) if abs(j - mu) >= t), Fraction(0))
        if float(tail) > 2 * math.exp(-float(t * t) / (3 * float(mu))) * (1 + 1e-12):
            return False
    return True


def _largest_k_reaching(n: int, delta: Fraction) -> int:
    lo, hi = 0, n  # P(n, 0) = 1 >= delta > 0 = P(n, n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if binomial_tail(n, mid) >= delta:
            lo = mid
        else:
            hi = mid - 1
    return lo


def binomial_approximation(delta, epsilon, n: int | None = None) -> tuple[int, int]:
    """``(n, k)`` with ``k <= n`` and ``|P(n, k) - delta| < epsilon``.

    ``n`` defaults to the smallest value with ``1/sqrt(n) < epsilon``. Takes the
    largest ``k`` with ``P(n, k) >= delta`` and prefers ``k + 1`` when it qualifies.
    """
    delta, epsilon = Fraction(delta), Fraction(epsilon)
    if not 0 < delta < 1 or epsilon <= 0:
        raise ValueError("need delta in (0, 1) and epsilon > 0")
    if n is None:
        n = math.floor(1 / (epsilon * epsilon)) + 1
    k = _largest_k_reaching(n, delta)
    for cand in (k + 1, k):
        if cand <= n and abs(binomial_tail(n, cand) - delta) < epsilon:
            return n, cand
    raise ValueError(f"no k with |P({n}, k) - {delta}| < {epsilon}; n is too small")


@dataclass(frozen=True)
class GapConstruction:
    n: int
    m: int
    delta: Fraction
    epsilon: Fraction
    gamma_exp: Fraction
    tail: Fraction  # P(n, m), the probability of the size-1 explanation

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def model(self) -> LinearModel:
        return LinearModel((Fraction(1),) + (Fraction(1, self.m),) * self.n, 2)

    @property
    def x(self) -> Instance:
        return Instance((1,) * (self.n + 1))

    def prefix_probability(self, k: int) -> Fraction:
        """Exact ``v_k``: the first feature plus ``k - 1`` of the exchangeable others."""
        n, m = self.n, self.m
        if k == 0:
            return (binomial_tail(n, m) + binomial_tail(n, 2 * m)) / 2
        return binomial_tail(n - (k - 1), m - (k - 1))

    def min_size(self, delta) -> int:
        """Size of the smallest ``delta``-SR, from exact binomial tails."""
        delta = Fraction(delta)
        if self.prefix_probability(0) >= delta:
            return 0
        lo, hi = 0, self.m  # P(n - m, 0) = 1
        while lo < hi:
            mid = (lo + hi) // 2
            if binomial_tail(self.n - mid, self.m - mid) >= delta:
                hi = mid
            else:
                lo = mid + 1
        return 1 + lo


def build_gap_instance(delta, epsilon, gamma_exp, n: int | None = None,
                       max_n: int = GAP_MAX_N) -> GapConstruction:
    """Model where a size-1 explanation reaches ``delta`` but ``delta + epsilon`` needs many features.

    Weights are ``(1, 1/m, ..., 1/m)`` with threshold 2 on the all-ones instance.
    """
    delta, epsilon, gamma_exp = Fraction(delta), Fraction(epsilon), Fraction(gamma_exp)
    if not 0 < delta < 1 or epsilon <= 0 or delta + epsilon > 1:
        raise ValueError("need delta in (0, 1), epsilon > 0 and delta + epsilon <= 1")
    if not 0 < gamma_exp < Fraction(1, 2):
        raise ValueError("gamma_exp must lie in (0, 1/2)")
    target, tol = delta + epsilon / 4, epsilon / 4
    if n is None:
        n_lemma = math.floor(1 / (tol * tol)) + 1
        n_growth = math.floor((2 / float(epsilon)) ** (1 / float(gamma_exp))) + 1
        n = max(n_lemma, n_growth)
    if n > max_n:
        raise OracleLimitError(f"n = {n} exceeds the construction budget of {max_n}")
    n, m = binomial_approximation(target, tol, n)
    if m < 1:
        raise ValueError(f"construction degenerates at n = {n}")
    return GapConstruction(n, m, delta, epsilon, gamma_exp, binomial_tail(n, m))


def gap_sweep(delta, epsilon, gamma_exp, ns) -> list[dict]:
    rows = []
    for n in ns:
        gc = build_gap_instance(delta, epsilon, gamma_exp, n=n)
        lo, hi = gc.min_size(delta), gc.min_size(Fraction(delta) + Fraction(epsilon))
        rows.append({
            "n": n, "m": gc.m, "d": gc.dim, "tail": gc.tail,
            "min_delta": lo, "min_delta_plus_eps": hi, "ratio": Fraction(hi, lo),
            "size_bound": n ** (0.5 - float(gamma_exp)),
        })
    return rows


# --------------------------------------------------------------------------
# worked examples


EXAMPLE3_SIZE2 = {
    (1, 3): Fraction(7, 8), (1, 4): Fraction(5, 8), (3, 4): Fraction(1, 2),
    (3, 5): Fraction(3, 8), (2, 3): Fraction(3, 8), (1, 5): Fraction(3, 8),
    (1, 2): Fraction(3, 8), (4, 5): Fraction(1, 4), (2, 4): Fraction(1, 4),
    (2, 5): Fraction(1, 8),
}
EXAMPLE3_PREFIX = tuple(Fraction(a, b) for a, b in ((1, 4), (1, 2), (7, 8), (1, 1), (1, 1), (1, 1)))


def verify_example3() -> Report:
    m, x = EXAMPLE3_MODEL, EXAMPLE3_X
    rep = Report("five-feature worked example")
    rep.add("dot product", "w.x = 6, class 1", (6, 1), (m.dot(x), classify(m, x)),
            m.dot(x) == 6 and classify(m, x) == 1)
    s = scores(m, x)
    rep.add("scores", "feature scores", (5, -1, 3, 2, -1), s, s == (5, -1, 3, 2, -1))
    v = tuple(prefix_probabilities(m, x))
    rep.add("prefix probabilities", "greedy prefix table", EXAMPLE3_PREFIX, v, v == EXAMPLE3_PREFIX)
    best, best_p = None, Fraction(-1)
    for pair, expected in EXAMPLE3_SIZE2.items():
        y = restrict(x, [i - 1 for i in pair])
        p = brute_force_prob(m, y, x)
        rep.add(f"size-2 {{{pair[0]},{pair[1]}}}", "size-2 table", expected, p, p == expected)
        if p > best_p:
            best, best_p = pair, p
    y2 = greedy_prefixes(m, x)[2]
    rep.add("best size-2 set", "greedy picks features 1 and 3", "{1,3} = 1*0**",
            f"{{{best[0]},{best[1]}}} = {y2}", best == (1, 3) and str(y2) == "1*0**")
    return rep


def example1_model() -> tuple[LinearModel, Instance]:
    return LinearModel((1000,) + (1,) * 999, 1250), Instance((1,) * 1000)


def verify_example1(rng: np.random.Generator | None = None, trials: int = 20) -> Report:
    rng = rng or np.random.default_rng(1)
    m, x = example1_model()
    rep = Report("thousand-feature worked example")
    rep.add("class", "L(x) = 1", 1, classify(m, x), classify(m, x) == 1)
    tail = binomial_tail(999, 250)
    bound = Fraction(999999, 1000000)
    rep.add("tail", "P(Bin(999,1/2) >= 250) >= 0.999999", ">= 0.999999", f"{float(tail):.17g}", tail >= bound)
    y1 = greedy_prefixes(m, x)[1]
    via_dp = dp_prob(m, y1, x)
    rep.add("dp agrees", "size-1 explanation probability", format_fraction(tail)[:24] + "...",
            format_fraction(via_dp)[:24] + "...", via_dp == tail)
    prefixes = greedy_prefixes(m, x)
    k = next(k for k, y in enumerate(prefixes) if is_sufficient_reason(m, y, x))
    rep.add("min 1-SR", "smallest sufficient reason", 251, k, k == 251)
    ok_with, ok_without, ok_short = True, True, True
    for _ in range(trials):
        others = [int(i) for i in rng.choice(np.arange(1, 1000), size=250, replace=False)]
        ok_with &= is_sufficient_reason(m, restrict(x, [0] + others), x)
        extra = int(rng.choice([i for i in range(1, 1000) if i not in set(others)]))
        ok_without &= not is_sufficient_reason(m, restrict(x, others + [extra]), x)
        ok_short &= not is_sufficient_reason(m, restrict(x, [0] + others[:249]), x)
    rep.add("feature 1 + 250", "any such set is a 1-SR", True, ok_with, ok_with)
    rep.add("251 without feature 1", "never a 1-SR", True, ok_without, ok_without)
    rep.add("feature 1 + 249", "never a 1-SR", True, ok_short, ok_short)
    return rep


def verify_lemmas(seed: int = 0, n_models: int = 30, n_local: int = 15) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("property suites")
    bad = []
    for _ in range(n_models):
        model, x = random_case(rng, 9)
        bad += greedy_violations(model, x, (Fraction(3, 10), Fraction(6, 10), Fraction(9, 10)))
    rep.add("greedy prefixes", "monotone and optimal", 0, len(bad), not bad)
    bad = 0
    for _ in range(n_local):
        model, x = random_case(rng, 7)
        dist = random_product_distribution(rng, model.dim)
        delta = Fraction(int(rng.integers(1, 100)), 100)
        bad += len(check_local_minimality_theorem(model, x, delta, dist).counterexamples)
    rep.add("local minimality", "locally minimal implies subset-minimal", 0, bad, bad == 0)
    g_ok = all(g_within_bound(n) for n in range(2, 61))
    rep.add("g(n) bound", "0 <= g(n) <= 1/sqrt(n), n <= 60", True, g_ok, g_ok)
    e_ok = all(erdos_bound_holds(n) for n in range(1, 101))
    rep.add("central binomial", "C(2n,n) <= 4^n/sqrt(2n+1), n <= 100", True, e_ok, e_ok)
    c_ok = all(chernoff_holds(n) for n in range(1, 21))
    rep.add("chernoff", "fair-coin sums, n <= 20", True, c_ok, c_ok)
    gc = build_gap_instance(Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), n=257)
    lo, hi = gc.min_size(gc.delta), gc.min_size(gc.delta + gc.epsilon)
    in_band = gc.delta <= gc.tail <= gc.delta + gc.epsilon / 2
    rep.add("gap construction", "size-1 delta-SR, larger (delta+eps)-SR", "1 < Min(delta+eps)",
            f"{lo}, {hi}", lo == 1 and hi > 1 and in_band)
    return rep


def verify_paper() -> list[Report]:
    return [verify_example1(), verify_example3(), verify_lemmas()]
