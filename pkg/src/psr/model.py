"""Linear models, instances and partial instances over binary features.

All numeric data is held as :class:`fractions.Fraction` so that threshold
comparisons are exact. Feature indices are 0-based throughout the Python API;
human-facing reports label features from 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

UNKNOWN = None  # the undefined cell of a partial instance


class DimensionError(ValueError):
    """Raised when vectors that must share a dimension do not."""


class SubsetError(ValueError):
    """Raised when a partial instance is not contained in the instance it explains."""


def to_fraction(value) -> Fraction:
    """Parse an int, Fraction, decimal string or ``"p/q"`` string exactly.

    Floats are rejected: they would silently smuggle binary rounding into
    the canonical representation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class LinearModel:
    """Binary linear classifier ``x -> [w . x >= t]``."""

    weights: tuple[Fraction, ...]
    threshold: Fraction

    def __post_init__(self):
        weights = tuple(to_fraction(w) for w in self.weights)
        if not weights:
            raise DimensionError("a linear model needs at least one feature")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", to_fraction(self.threshold))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @cached_property
    def integer_form(self) -> tuple[tuple[int, ...], int]:
        """Weights and threshold scaled by the lcm of all denominators.

        Scaling by a positive constant preserves every classification, so the
        kernels work on these integers.
        """
        scale = 1
        for q in (*self.weights, self.threshold):
            scale = math.lcm(scale, q.denominator)
        ints = tuple(int(w * scale) for w in self.weights)
        return ints, int(self.threshold * scale)

    @property
    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.weights) and self.threshold.denominator == 1

    def dot(self, bits: Sequence[int]) -> Fraction:
        check_dim(self, bits)
        return sum((w for w, b in zip(self.weights, bits) if b), Fraction(0))

    def to_json(self) -> dict:
        return {
            "weights": [format_fraction(w) for w in self.weights],
            "threshold": format_fraction(self.threshold),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearModel":
        try:
            return cls(tuple(obj["weights"]), obj["threshold"])
        except KeyError as exc:
            raise ValueError(f"model JSON is missing {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Instance:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("instance bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    @classmethod
    def parse(cls, text: str) -> "Instance":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"instance must be a non-empty bitstring, got {text!r}")
        return cls(tuple(int(c) for c in text))

    def __str__(self):
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class PartialInstance:
    """Vector over {0, 1, unknown}; ``None`` marks an unknown cell."""

    cells: tuple[int | None, ...]

    def __post_init__(self):
        cells = tuple(None if c is None else int(c) for c in self.cells)
        if any(c not in (0, 1, None) for c in cells):
            raise ValueError("partial instance cells must be 0, 1 or None")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __getitem__(self, i):
        return self.cells[i]

    @property
    def size(self) -> int:
        """Number of defined cells (the explanation size)."""
        return sum(c is not None for c in self.cells)

    @property
    def n_unknown(self) -> int:
        return len(self.cells) - self.size

    @property
    def defined(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c is not None)

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.cells) if c is None)

    @classmethod
    def unknown(cls, d: int) -> "PartialInstance":
        return cls((None,) * d)

    @classmethod
    def parse(cls, text: str) -> "PartialInstance":
        text = text.strip()
        if not text or set(text) - {"0", "1", "*"}:
            raise ValueError(f"partial instance must use 0, 1 and '*', got {text!r}")
        return cls(tuple(None if c == "*" else int(c) for c in text))

    def __str__(self):
        return "".join("*" if c is None else str(c) for c in self.cells)


@dataclass(frozen=True)
class ProductDistribution:
    """Independent Bernoulli features; ``params[i]`` is Pr[z_i = 1]."""

    params: tuple[Fraction, ...]

    def __post_init__(self):
        params = tuple(to_fraction(p) for p in self.params)
        if any(p < 0 or p > 1 for p in params):
            raise ValueError("Bernoulli parameters must lie in [0, 1]")
        object.__setattr__(self, "params", params)

    def __len__(self):
        return len(self.params)

    @classmethod
    def uniform(cls, d: int) -> "ProductDistribution":
        return cls((Fraction(1, 2),) * d)

    @property
    def is_uniform(self) -> bool:
        return all(p == Fraction(1, 2) for p in self.params)

    def to_json(self) -> dict:
        return {"params": [format_fraction(p) for p in self.params]}

    @classmethod
    def from_json(cls, obj: dict) -> "ProductDistribution":
        try:
            return cls(tuple(obj["params"]))
        except KeyError:
            raise ValueError("distribution JSON is missing 'params'") from None


def check_dim(model: LinearModel, vec) -> None:
    if len(vec) != model.dim:
        raise DimensionError(f"expected dimension {model.dim}, got {len(vec)}")


def classify(model: LinearModel, x: Instance | Sequence[int]) -> int:
    return int(model.dot(x) >= model.threshold)


def scores(model: LinearModel, x: Instance) -> tuple[Fraction, ...]:
    """Per-feature score ``w_i (2 x_i - 1) (2 L(x) - 1)``.

    Positive scores push the dot product towards the class of ``x``.
    """
    sign = 2 * classify(model, x) - 1
    return tuple(w * (2 * xi - 1) * sign for w, xi in zip(model.weights, x))


def subset_of(y: PartialInstance, z: Instance | PartialInstance) -> bool:
    if len(y) != len(z):
        raise DimensionError(f"length mismatch: {len(y)} vs {len(z)}")
    return all(c is None or c == zc for c, zc in zip(y, z))


def _require_subset(y: PartialInstance, x: Instance) -> None:
    if not subset_of(y, x):
        raise SubsetError(f"{y} is not contained in {x}")


def restrict(x: Instance, features: Iterable[int]) -> PartialInstance:
    keep = set(features)
    bad = [i for i in keep if not 0 <= i < len(x)]
    if bad:
        raise IndexError(f"feature index out of range: {sorted(bad)}")
    return PartialInstance(tuple(b if i in keep else None for i, b in enumerate(x)))


def extend(y: PartialInstance, i: int, x: Instance) -> PartialInstance:
    """Define cell ``i`` of ``y`` with the value it has in ``x``."""
    _require_subset(y, x)
    if y[i] is not None:
        raise ValueError(f"feature {i} is already defined")
    cells = list(y.cells)
    cells[i] = x[i]
    return PartialInstance(tuple(cells))


def drop(y: PartialInstance, i: int) -> PartialInstance:
    if y[i] is None:
        raise ValueError(f"feature {i} is already unknown")
    cells = list(y.cells)
    cells[i] = None
    return PartialInstance(tuple(cells))


def feature_ranking(model: LinearModel, x: Instance) -> list[int]:
    """Features by descending score; ties go to the lower index."""
    check_dim(model, x)
    s = scores(model, x)
    return sorted(range(model.dim), key=lambda i: (-s[i], i))


def greedy_prefixes(model: LinearModel, x: Instance) -> list[PartialInstance]:
    """``y^(0), ..., y^(d)`` where ``y^(k)`` keeps the ``k`` best-scored features of ``x``."""
    order = feature_ranking(model, x)
    cells: list[int | None] = [None] * model.dim
    out = [PartialInstance(tuple(cells))]
    for i in order:
        cells[i] = x[i]
        out.append(PartialInstance(tuple(cells)))
    return out
